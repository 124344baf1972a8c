//! The two sides of descent along a group action, and their comparison.
//!
//! For a finite group acting on a finite set, sheaves of finite sets can be
//! described in two ways: as functors on the total category of the
//! associated simplicial datum that invert every cartesian edge, or as
//! equivariant sheaves — functors on the action groupoid. This module
//! enumerates both descriptions, converts between them ([`descend`] and
//! [`assemble`]), and certifies that the conversion is a bijection on
//! isomorphism classes with explicit round-trip witnesses
//! ([`verify_exodromy`]). A fundamental-groupoid route
//! ([`fundamental_groupoid`], [`groupoid_equivalent`]) covers the fully
//! invertible comparison by presentations instead of enumeration.

mod enumerate;
mod groupoid;
#[cfg(test)]
mod tests;

pub use enumerate::{enumerate_sheaves, SearchBudget};
pub use groupoid::{
    coset_enumeration, fundamental_groupoid, groupoid_equivalent, reconstruct_group,
    tables_isomorphic, ComponentPresentation, EnumeratedGroup, GroupoidPresentation,
    MAX_GROUP_ORDER,
};

use crate::fincat::FiniteCategory;
use crate::setfun::{natural_iso, validate_set_natural_iso, SetFunctor, SetFunctorError};
use crate::simplex::{FiniteGroup, GSet};
use crate::simplex::{bar_datum, bar_decode, SimplexMap};
use crate::total::{build_total_guarded, project_total_size, TotalCategory, TotalError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures of the descent comparison machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExodromyError {
    #[error("search explored {explored} nodes, over the budget of {budget}")]
    SearchBudgetExceeded { explored: u64, budget: u64 },
    #[error("functor sends cartesian edge {edge} to a non-bijection")]
    NotCartesianInverting { edge: usize },
    #[error("the two sides of the comparison failed to match: {detail}")]
    EquivalenceFailure { detail: String },
    #[error("component group order exceeds the supported bound {limit}")]
    OrderTooLarge { limit: usize },
    #[error(transparent)]
    Total(#[from] TotalError),
}

/// The groupoid of a right action: objects are the points, and for every
/// point `x` and group element `g` there is one morphism `x -> x·g`.
/// Composition multiplies group elements in traversal order. Morphism
/// `x * |G| + g` is the pair `(x, g)`.
pub fn action_groupoid(group: &FiniteGroup, xset: &GSet) -> FiniteCategory {
    let og = group.order();
    let n = xset.size;
    let mut src = Vec::with_capacity(n * og);
    let mut tgt = Vec::with_capacity(n * og);
    for x in 0..n {
        for g in 0..og {
            src.push(x as u32);
            tgt.push(xset.apply(x, g) as u32);
        }
    }
    let ident: Vec<u32> = (0..n).map(|x| (x * og + group.identity) as u32).collect();
    let mul = &group.mul;
    FiniteCategory::from_parts(n, src, tgt, ident, |gm, fm| {
        let h = gm as usize % og;
        let x = fm as usize / og;
        let g = fm as usize % og;
        (x * og + mul[g][h]) as u32
    })
}

/// A set-valued functor on a total category: the sheaf side of the
/// comparison. The inner functor lives on `total.underlying`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SheafFunctor {
    pub functor: SetFunctor,
}

impl SheafFunctor {
    /// Functor laws against the underlying category.
    pub fn validate(&self, total: &TotalCategory) -> Result<(), SetFunctorError> {
        self.functor.validate(&total.underlying)
    }

    /// Checks that every cartesian edge goes to a bijection.
    pub fn check_cartesian_inverting(&self, total: &TotalCategory) -> Result<(), ExodromyError> {
        let cartesian = (0..total.underlying.n_morphisms()).filter(|&m| total.is_cartesian(m));
        match self.functor.first_non_bijection(&total.underlying, cartesian) {
            None => Ok(()),
            Some(edge) => Err(ExodromyError::NotCartesianInverting { edge }),
        }
    }
}

/// A functor on the action groupoid: value sets per point and one bijection
/// per group element. `action[x][g]` maps the set at `x` to the set at
/// `x·g`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquivariantSheaf {
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<Vec<usize>>>,
}

impl EquivariantSheaf {
    /// The same data as a functor on [`action_groupoid`].
    pub fn as_groupoid_functor(&self) -> SetFunctor {
        let images: Vec<Vec<usize>> = self
            .action
            .iter()
            .flat_map(|per_x| per_x.iter().cloned())
            .collect();
        SetFunctor {
            sizes: self.sizes.clone(),
            images,
        }
    }

    /// Reads a functor on [`action_groupoid`] back into per-point tables.
    pub fn from_groupoid_functor(group: &FiniteGroup, xset: &GSet, f: &SetFunctor) -> Self {
        let og = group.order();
        let action: Vec<Vec<Vec<usize>>> = (0..xset.size)
            .map(|x| (0..og).map(|g| f.images[x * og + g].clone()).collect())
            .collect();
        EquivariantSheaf {
            sizes: f.sizes.clone(),
            action,
        }
    }

    /// Functoriality (identity and multiplication laws) plus the bijection
    /// requirement, checked on the materialized action groupoid.
    pub fn validate(&self, group: &FiniteGroup, xset: &GSet) -> Result<(), SetFunctorError> {
        let groupoid = action_groupoid(group, xset);
        let f = self.as_groupoid_functor();
        f.validate(&groupoid)?;
        // Every groupoid morphism is invertible, so a functorial image is
        // automatically a bijection; checking directly gives a sharper
        // failure than a composition mismatch would.
        for m in 0..groupoid.n_morphisms() {
            if !f.is_bijection_on(&groupoid, m) {
                return Err(SetFunctorError::CompositionImage { g: m, f: m });
            }
        }
        Ok(())
    }
}

fn invert_table(t: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; t.len()];
    for (x, &y) in t.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Extracts the equivariant sheaf underlying a cartesian-edge-inverting
/// functor on the total category of a bar datum.
///
/// The value at a point is the functor's value at the corresponding level-0
/// object. The action of `g` at `x` is the zig-zag through the level-1
/// object `(x, g)`: the image of the lift over the 0th coface (whose source
/// is the level-0 object at `x·g`) is inverted and composed with the image
/// of the lift over the 1st coface (whose source is the one at `x`). The
/// result is audited: the identity element must act as the identity (seen
/// on the degenerate level-1 objects) and composites must multiply (seen on
/// the three faces of every level-2 object).
pub fn descend(
    group: &FiniteGroup,
    xset: &GSet,
    total: &TotalCategory,
    f: &SheafFunctor,
) -> Result<EquivariantSheaf, ExodromyError> {
    f.check_cartesian_inverting(total)?;
    let og = group.order();
    let sizes: Vec<usize> = (0..xset.size)
        .map(|x| f.functor.sizes[total.object_id(0, x)])
        .collect();
    let delta0 = SimplexMap::coface(1, 0);
    let delta1 = SimplexMap::coface(1, 1);
    let mut action: Vec<Vec<Vec<usize>>> = Vec::with_capacity(xset.size);
    for x in 0..xset.size {
        let mut per_x = Vec::with_capacity(og);
        for g in 0..og {
            let xi = x * og + g;
            let lift0 = total.cartesian_lift(&delta0, xi);
            let lift1 = total.cartesian_lift(&delta1, xi);
            let t0_inv = invert_table(&f.functor.images[lift0]);
            let t1 = &f.functor.images[lift1];
            let rho: Vec<usize> = t1.iter().map(|&v| t0_inv[v]).collect();
            per_x.push(rho);
        }
        action.push(per_x);
    }
    // Self-audit of the zig-zag convention; failures here would mean the
    // functor was not functorial or the face conventions drifted.
    let e = group.identity;
    for (x, per_x) in action.iter().enumerate() {
        assert!(
            per_x[e].iter().enumerate().all(|(v, &w)| v == w),
            "identity element must act trivially at point {x}"
        );
    }
    for x in 0..xset.size {
        for g in 0..og {
            for h in 0..og {
                let gh = group.mul[g][h];
                let xg = xset.apply(x, g);
                let composite: Vec<usize> =
                    action[x][g].iter().map(|&v| action[xg][h][v]).collect();
                assert_eq!(
                    action[x][gh], composite,
                    "action of a product must be the composite of actions"
                );
            }
        }
    }
    Ok(EquivariantSheaf { sizes, action })
}

/// Spreads an equivariant sheaf over the whole total category of the bar
/// datum: the value at `(m, (x; g_1..g_m))` is the value at `x`, and an
/// edge over a base map `sigma` transports backwards along the group
/// product `g_1···g_{sigma(0)}` read off its target object.
pub fn assemble(
    group: &FiniteGroup,
    xset: &GSet,
    sheaf: &EquivariantSheaf,
    total: &TotalCategory,
) -> SheafFunctor {
    debug_assert!(
        sheaf.validate(group, xset).is_ok(),
        "input must be a valid equivariant sheaf"
    );
    let og = group.order();
    let n_obj = total.underlying.n_objects();
    let mut sizes = Vec::with_capacity(n_obj);
    for o in 0..n_obj {
        let level = total.level_of[o];
        let (x, _) = bar_decode(og, level, total.fiber_object_of[o]);
        sizes.push(sheaf.sizes[x]);
    }
    let n_mor = total.underlying.n_morphisms();
    let mut images = Vec::with_capacity(n_mor);
    for m in 0..n_mor {
        let (sigma, fiber_mor) = total.decompose(m);
        let src_level = sigma.source_level;
        debug_assert!(
            total.fibers[src_level].is_identity(fiber_mor),
            "bar fibers are discrete"
        );
        let tgt_obj = total.underlying.target(m);
        let (x, word) = bar_decode(og, sigma.target_level, total.fiber_object_of[tgt_obj]);
        let mut prefix = group.identity;
        for &gi in &word[..sigma.apply(0)] {
            prefix = group.mul[prefix][gi];
        }
        // The source object sits at x·prefix; transport back to x.
        images.push(invert_table(&sheaf.action[x][prefix]));
    }
    SheafFunctor {
        functor: SetFunctor { sizes, images },
    }
}

/// Which comparison strategy [`verify_exodromy`] uses for the sheaf side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Decide by projected size of the total category.
    Auto,
    /// Enumerate functors on the total category outright and match them
    /// against the groupoid side through [`descend`].
    Direct,
    /// Enumerate only on the action groupoid and realize the sheaf side by
    /// [`assemble`], certifying the matching through round trips.
    Groupoid,
}

/// Total-category morphism count beyond which [`Route::Auto`] switches to
/// the groupoid strategy.
pub const AUTO_ROUTE_MORPHISM_LIMIT: usize = 10_000;

/// Per-matched-pair certificates: a matching isomorphism on the groupoid
/// side and the two round-trip isomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripWitness {
    /// Components of `descend(sheaf rep) => descent rep` per point.
    pub matching: Vec<Vec<usize>>,
    /// Components of `assemble(descend(sheaf rep)) => sheaf rep` per total
    /// object.
    pub sheaf_roundtrip: Vec<Vec<usize>>,
    /// Components of `descend(assemble(descent rep)) => descent rep` per
    /// point.
    pub descent_roundtrip: Vec<Vec<usize>>,
}

/// Outcome of the two-sided comparison: class representatives on both
/// sides, the matching bijection, and its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Strategy actually taken (never [`Route::Auto`]).
    pub route_taken: Route,
    /// Isomorphism-class representatives of cartesian-edge-inverting
    /// functors on the total category, sorted.
    pub sheaf_side: Vec<SetFunctor>,
    /// Isomorphism-class representatives of functors on the action
    /// groupoid, sorted.
    pub descent_side: Vec<SetFunctor>,
    /// Pairs `(sheaf index, descent index)`; a bijection.
    pub matched: Vec<(usize, usize)>,
    /// One witness bundle per matched pair, in `matched` order.
    pub roundtrip_witnesses: Vec<RoundTripWitness>,
}

impl ComparisonReport {
    /// Matched class count (equal on both sides).
    pub fn n_classes(&self) -> usize {
        self.matched.len()
    }
}

/// Enumerates sheaves on both sides of the descent comparison for the bar
/// datum of `(group, xset)` at truncation `n` with value sets of size at
/// most `k`, and certifies a bijection of isomorphism classes with
/// round-trip witnesses. Fails loudly if any class cannot be matched.
pub fn verify_exodromy(
    group: &FiniteGroup,
    xset: &GSet,
    k: usize,
    n: usize,
    route: Route,
    budget: &SearchBudget,
) -> Result<ComparisonReport, ExodromyError> {
    let groupoid = action_groupoid(group, xset);
    let invert_all = vec![true; groupoid.n_morphisms()];
    let descent_side = enumerate_sheaves(&groupoid, k, &invert_all, budget)?;

    let datum = bar_datum(group, xset, n);
    let (_, projected_morphisms) = project_total_size(&datum);
    let total = build_total_guarded(&datum, 4_000_000)?;
    let route_taken = match route {
        Route::Auto => {
            if projected_morphisms > AUTO_ROUTE_MORPHISM_LIMIT {
                Route::Groupoid
            } else {
                Route::Direct
            }
        }
        fixed => fixed,
    };

    let mut matched: Vec<(usize, usize)> = Vec::new();
    let mut witnesses: Vec<RoundTripWitness> = Vec::new();
    let sheaf_side: Vec<SetFunctor> = match route_taken {
        Route::Direct => {
            let sheaf_side =
                enumerate_sheaves(&total.underlying, k, &total.cartesian, budget)?;
            if sheaf_side.len() != descent_side.len() {
                return Err(ExodromyError::EquivalenceFailure {
                    detail: format!(
                        "{} classes on the sheaf side vs {} on the descent side",
                        sheaf_side.len(),
                        descent_side.len()
                    ),
                });
            }
            let mut hit = vec![false; descent_side.len()];
            for (i, rep) in sheaf_side.iter().enumerate() {
                let wrapped = SheafFunctor {
                    functor: rep.clone(),
                };
                let descended = descend(group, xset, &total, &wrapped)?;
                let descended_fun = descended.as_groupoid_functor();
                let mut found = None;
                for (j, target) in descent_side.iter().enumerate() {
                    if let Some(matching) = natural_iso(&groupoid, &descended_fun, target) {
                        found = Some((j, matching));
                        break;
                    }
                }
                let (j, matching) = found.ok_or_else(|| ExodromyError::EquivalenceFailure {
                    detail: format!("sheaf class {i} descends outside every descent class"),
                })?;
                if hit[j] {
                    return Err(ExodromyError::EquivalenceFailure {
                        detail: format!("two sheaf classes descend into descent class {j}"),
                    });
                }
                hit[j] = true;
                let reassembled = assemble(group, xset, &descended, &total);
                let sheaf_roundtrip = natural_iso(
                    &total.underlying,
                    &reassembled.functor,
                    rep,
                )
                .ok_or_else(|| ExodromyError::EquivalenceFailure {
                    detail: format!("sheaf class {i} does not survive the round trip"),
                })?;
                let redescended = descend(group, xset, &total, &reassembled)?;
                let descent_roundtrip = natural_iso(
                    &groupoid,
                    &redescended.as_groupoid_functor(),
                    &descent_side[j],
                )
                .ok_or_else(|| ExodromyError::EquivalenceFailure {
                    detail: format!("descent class {j} does not survive the round trip"),
                })?;
                matched.push((i, j));
                witnesses.push(RoundTripWitness {
                    matching,
                    sheaf_roundtrip,
                    descent_roundtrip,
                });
            }
            sheaf_side
        }
        Route::Groupoid => {
            // Realize the sheaf side through assembly. Distinctness of the
            // resulting classes follows from the round trips: naturally
            // isomorphic assemblies would descend to naturally isomorphic
            // groupoid functors, and the descent classes are distinct by
            // enumeration.
            let mut sheaf_side = Vec::with_capacity(descent_side.len());
            for (j, rep) in descent_side.iter().enumerate() {
                let sheaf = EquivariantSheaf::from_groupoid_functor(group, xset, rep);
                let assembled = assemble(group, xset, &sheaf, &total);
                assembled
                    .validate(&total)
                    .expect("assembled functors are functorial");
                assembled.check_cartesian_inverting(&total)?;
                let descended = descend(group, xset, &total, &assembled)?;
                let matching = natural_iso(
                    &groupoid,
                    &descended.as_groupoid_functor(),
                    rep,
                )
                .ok_or_else(|| ExodromyError::EquivalenceFailure {
                    detail: format!("descent class {j} does not survive the round trip"),
                })?;
                let sheaf_roundtrip: Vec<Vec<usize>> = assembled
                    .functor
                    .sizes
                    .iter()
                    .map(|&s| (0..s).collect())
                    .collect();
                let descent_roundtrip = matching.clone();
                matched.push((sheaf_side.len(), j));
                witnesses.push(RoundTripWitness {
                    matching,
                    sheaf_roundtrip,
                    descent_roundtrip,
                });
                sheaf_side.push(assembled.functor);
            }
            sheaf_side
        }
        Route::Auto => unreachable!("resolved above"),
    };

    // Validate every witness against the exact functors it connects before
    // reporting success.
    for ((i, j), w) in matched.iter().zip(&witnesses) {
        let wrapped = SheafFunctor {
            functor: sheaf_side[*i].clone(),
        };
        let descended = descend(group, xset, &total, &wrapped)?;
        assert!(
            validate_set_natural_iso(
                &groupoid,
                &descended.as_groupoid_functor(),
                &descent_side[*j],
                &w.matching
            ),
            "matching witness must be a natural isomorphism"
        );
        let reassembled = assemble(group, xset, &descended, &total);
        assert!(
            validate_set_natural_iso(
                &total.underlying,
                &reassembled.functor,
                &sheaf_side[*i],
                &w.sheaf_roundtrip
            ),
            "sheaf round-trip witness must be a natural isomorphism"
        );
        let redescended = descend(group, xset, &total, &reassembled)?;
        assert!(
            validate_set_natural_iso(
                &groupoid,
                &redescended.as_groupoid_functor(),
                &descent_side[*j],
                &w.descent_roundtrip
            ),
            "descent round-trip witness must be a natural isomorphism"
        );
    }
    Ok(ComparisonReport {
        route_taken,
        sheaf_side,
        descent_side,
        matched,
        roundtrip_witnesses: witnesses,
    })
}
