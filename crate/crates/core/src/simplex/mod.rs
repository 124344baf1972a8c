//! The truncated simplex category and diagrams of categories over it.
//!
//! [`SimplexMap`] is a weakly monotone map `{0..m} -> {0..n}`; every such map
//! factors uniquely as collapses followed by omissions ([`factorize_map`]),
//! which is how [`sigma_star`] extends the generating face and degeneracy
//! functors of a [`SimplicialGaloisDatum`] to arbitrary maps. The datum
//! validator checks the simplicial identities exhaustively, so any two
//! factorizations of the same map induce the same functor.

mod group;

pub use group::{ActionError, FiniteGroup, GSet};

use crate::fincat::{
    validate_category, validate_functor, CategoryData, CategoryError, FiniteCategory, Functor,
    FunctorError, LayeredWitness,
};
use thiserror::Error;

/// Truncation level used when nothing else is requested: deep enough for
/// homology through degree 2, small enough for exhaustive validation.
pub const DEFAULT_TRUNCATION: usize = 3;

/// A weakly monotone map `{0..source_level} -> {0..target_level}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexMap {
    pub source_level: usize,
    pub target_level: usize,
    pub values: Vec<usize>,
}

impl SimplexMap {
    pub fn new(source_level: usize, target_level: usize, values: Vec<usize>) -> SimplexMap {
        assert_eq!(values.len(), source_level + 1);
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "values must be monotone");
        assert!(values.iter().all(|&v| v <= target_level), "values out of range");
        SimplexMap { source_level, target_level, values }
    }

    pub fn try_new(
        source_level: usize,
        target_level: usize,
        values: Vec<usize>,
    ) -> Option<SimplexMap> {
        if values.len() != source_level + 1
            || !values.windows(2).all(|w| w[0] <= w[1])
            || values.iter().any(|&v| v > target_level)
        {
            return None;
        }
        Some(SimplexMap { source_level, target_level, values })
    }

    pub fn identity(level: usize) -> SimplexMap {
        SimplexMap::new(level, level, (0..=level).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.source_level == self.target_level
            && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The monotone injection `{0..n-1} -> {0..n}` omitting the value `i`.
    pub fn coface(target_level: usize, i: usize) -> SimplexMap {
        assert!(target_level >= 1 && i <= target_level);
        let values = (0..target_level).map(|x| if x < i { x } else { x + 1 }).collect();
        SimplexMap::new(target_level - 1, target_level, values)
    }

    /// The monotone surjection `{0..n+1} -> {0..n}` repeating the value `i`.
    pub fn codegeneracy(target_level: usize, i: usize) -> SimplexMap {
        assert!(i <= target_level);
        let values = (0..=target_level + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
        SimplexMap::new(target_level + 1, target_level, values)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }
}

/// `tau` after `sigma`; panics when the levels do not line up.
pub fn compose_maps(tau: &SimplexMap, sigma: &SimplexMap) -> SimplexMap {
    assert_eq!(sigma.target_level, tau.source_level, "levels do not compose");
    SimplexMap::new(
        sigma.source_level,
        tau.target_level,
        sigma.values.iter().map(|&v| tau.values[v]).collect(),
    )
}

/// All weakly monotone maps `{0..m} -> {0..n}` in lexicographic order of
/// their value tables.
pub fn hom_delta(m: usize, n: usize) -> Vec<SimplexMap> {
    let mut out = Vec::new();
    let mut values = vec![0usize; m + 1];
    fn rec(pos: usize, low: usize, n: usize, values: &mut Vec<usize>, out: &mut Vec<SimplexMap>) {
        if pos == values.len() {
            out.push(SimplexMap {
                source_level: values.len() - 1,
                target_level: n,
                values: values.clone(),
            });
            return;
        }
        for v in low..=n {
            values[pos] = v;
            rec(pos + 1, v, n, values, out);
        }
    }
    rec(0, 0, n, &mut values, &mut out);
    out
}

/// The unique epi-mono normal form of a monotone map.
///
/// `sigma` equals the composite of the listed collapses applied first
/// (indices ascending in `codegeneracies`, applied from the back) followed
/// by the listed omissions (indices descending in `cofaces`, applied from
/// the back). Written as a composition word, cofaces come first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizedMap {
    /// Values of the target missing from the image, in descending order.
    pub cofaces: Vec<usize>,
    /// Positions `j` of the source with `sigma(j) = sigma(j+1)`, ascending.
    pub codegeneracies: Vec<usize>,
}

pub fn factorize_map(sigma: &SimplexMap) -> FactorizedMap {
    let mut cofaces: Vec<usize> = (0..=sigma.target_level)
        .filter(|v| !sigma.values.contains(v))
        .collect();
    cofaces.reverse();
    let codegeneracies: Vec<usize> = (0..sigma.source_level)
        .filter(|&j| sigma.values[j] == sigma.values[j + 1])
        .collect();
    FactorizedMap { cofaces, codegeneracies }
}

impl FactorizedMap {
    /// Rebuilds the map by composing the generators, for cross-checking.
    pub fn evaluate(&self, source_level: usize) -> SimplexMap {
        let mut current = SimplexMap::identity(source_level);
        for &j in self.codegeneracies.iter().rev() {
            let next = SimplexMap::codegeneracy(current.target_level - 1, j);
            current = compose_maps(&next, &current);
        }
        for &i in self.cofaces.iter().rev() {
            let next = SimplexMap::coface(current.target_level + 1, i);
            current = compose_maps(&next, &current);
        }
        current
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("level {level} exceeds truncation {truncation}")]
    LevelOutOfRange { level: usize, truncation: usize },
    #[error("datum shape mismatch: {what}")]
    WrongShape { what: String },
    #[error("fiber at level {level} is not a category")]
    BadLevel {
        level: usize,
        #[source]
        cause: CategoryError,
    },
    #[error("structure map {map} at level {level} is not a functor")]
    BadStructureMap {
        level: usize,
        map: String,
        #[source]
        cause: FunctorError,
    },
    #[error("simplicial identity {identity} fails at level {level}")]
    SimplicialIdentityViolation { level: usize, identity: String },
    #[error("fiber at level {level} has a non-invertible endomorphism {morphism}")]
    NotLayered { level: usize, morphism: usize },
}

/// Unvalidated input for [`validate_simplicial_datum`].
#[derive(Debug, Clone)]
pub struct RawSimplicialDatum {
    pub truncation: usize,
    /// Categories at levels `0..=truncation`.
    pub fibers: Vec<CategoryData>,
    /// `face_functors[m][i]` maps level `m` to level `m-1`; the entry at
    /// `m = 0` stays empty.
    pub face_functors: Vec<Vec<Functor>>,
    /// `degeneracy_functors[m][i]` maps level `m` to level `m+1`; the entry
    /// at `m = truncation` stays empty.
    pub degeneracy_functors: Vec<Vec<Functor>>,
}

/// A validated contravariant diagram of layered categories over the
/// truncated simplex category.
#[derive(Debug, Clone)]
pub struct SimplicialGaloisDatum {
    pub truncation: usize,
    pub fibers: Vec<FiniteCategory>,
    pub face_functors: Vec<Vec<Functor>>,
    pub degeneracy_functors: Vec<Vec<Functor>>,
    pub layered_witnesses: Vec<LayeredWitness>,
}

fn functors_equal(a: &Functor, b: &Functor) -> bool {
    a.object_map == b.object_map && a.morphism_map == b.morphism_map
}

/// Composes a chain of functors applied left to right, without validation.
fn chain(fs: &[&Functor]) -> Functor {
    let first = fs[0];
    let mut object_map = first.object_map.clone();
    let mut morphism_map = first.morphism_map.clone();
    for f in &fs[1..] {
        for o in object_map.iter_mut() {
            *o = f.object_map[*o];
        }
        for m in morphism_map.iter_mut() {
            *m = f.morphism_map[*m];
        }
    }
    Functor { object_map, morphism_map }
}

pub fn validate_simplicial_datum(
    raw: &RawSimplicialDatum,
) -> Result<SimplicialGaloisDatum, SimplexError> {
    let n = raw.truncation;
    if raw.fibers.len() != n + 1 {
        return Err(SimplexError::WrongShape {
            what: format!("expected {} fibers, got {}", n + 1, raw.fibers.len()),
        });
    }
    if raw.face_functors.len() != n + 1 || raw.degeneracy_functors.len() != n + 1 {
        return Err(SimplexError::WrongShape {
            what: "face and degeneracy lists must have one entry per level".to_string(),
        });
    }
    let mut fibers = Vec::with_capacity(n + 1);
    let mut layered_witnesses = Vec::with_capacity(n + 1);
    for (level, data) in raw.fibers.iter().enumerate() {
        let cat = validate_category(data)
            .map_err(|cause| SimplexError::BadLevel { level, cause })?;
        match cat.is_layered() {
            Ok(w) => layered_witnesses.push(w),
            Err(m) => return Err(SimplexError::NotLayered { level, morphism: m }),
        }
        fibers.push(cat);
    }
    for m in 0..=n {
        let expect_faces = if m == 0 { 0 } else { m + 1 };
        if raw.face_functors[m].len() != expect_faces {
            return Err(SimplexError::WrongShape {
                what: format!("level {m} must carry {expect_faces} face functors"),
            });
        }
        let expect_degens = if m == n { 0 } else { m + 1 };
        if raw.degeneracy_functors[m].len() != expect_degens {
            return Err(SimplexError::WrongShape {
                what: format!("level {m} must carry {expect_degens} degeneracy functors"),
            });
        }
        for (i, f) in raw.face_functors[m].iter().enumerate() {
            validate_functor(&fibers[m], &fibers[m - 1], f).map_err(|cause| {
                SimplexError::BadStructureMap { level: m, map: format!("d_{i}"), cause }
            })?;
        }
        for (i, s) in raw.degeneracy_functors[m].iter().enumerate() {
            validate_functor(&fibers[m], &fibers[m + 1], s).map_err(|cause| {
                SimplexError::BadStructureMap { level: m, map: format!("s_{i}"), cause }
            })?;
        }
    }

    let d = &raw.face_functors;
    let s = &raw.degeneracy_functors;
    // Operator identities on the tower, checked as equality of functors.
    for m in 2..=n {
        for j in 0..=m {
            for i in 0..j {
                // d_i d_j = d_{j-1} d_i on level m
                let lhs = chain(&[&d[m][j], &d[m - 1][i]]);
                let rhs = chain(&[&d[m][i], &d[m - 1][j - 1]]);
                if !functors_equal(&lhs, &rhs) {
                    return Err(SimplexError::SimplicialIdentityViolation {
                        level: m,
                        identity: format!("d_{i} d_{j} = d_{} d_{i}", j - 1),
                    });
                }
            }
        }
    }
    for m in 0..n.saturating_sub(1) {
        for j in 0..=m {
            for i in 0..=j {
                // s_i s_j = s_{j+1} s_i on level m
                let lhs = chain(&[&s[m][j], &s[m + 1][i]]);
                let rhs = chain(&[&s[m][i], &s[m + 1][j + 1]]);
                if !functors_equal(&lhs, &rhs) {
                    return Err(SimplexError::SimplicialIdentityViolation {
                        level: m,
                        identity: format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                    });
                }
            }
        }
    }
    for m in 0..n {
        for j in 0..=m {
            for i in 0..=m + 1 {
                // d_i s_j on level m
                let lhs = chain(&[&s[m][j], &d[m + 1][i]]);
                let (rhs, name) = if i < j {
                    (chain(&[&d[m][i], &s[m - 1][j - 1]]), format!("d_{i} s_{j} = s_{} d_{i}", j - 1))
                } else if i == j || i == j + 1 {
                    (Functor::identity(&fibers[m]), format!("d_{i} s_{j} = id"))
                } else {
                    (chain(&[&d[m][i - 1], &s[m - 1][j]]), format!("d_{i} s_{j} = s_{j} d_{}", i - 1))
                };
                if !functors_equal(&lhs, &rhs) {
                    return Err(SimplexError::SimplicialIdentityViolation { level: m, identity: name });
                }
            }
        }
    }

    let datum = SimplicialGaloisDatum {
        truncation: n,
        fibers,
        face_functors: raw.face_functors.clone(),
        degeneracy_functors: raw.degeneracy_functors.clone(),
        layered_witnesses,
    };

    // Functoriality across all composable pairs within truncation.
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                for sig in hom_delta(a, b) {
                    for tau in hom_delta(b, c) {
                        let composite = sigma_star(&datum, &compose_maps(&tau, &sig))
                            .expect("levels within truncation");
                        let left = sigma_star(&datum, &tau).expect("levels within truncation");
                        let right = sigma_star(&datum, &sig).expect("levels within truncation");
                        let two_step = chain(&[&left, &right]);
                        if !functors_equal(&composite, &two_step) {
                            return Err(SimplexError::SimplicialIdentityViolation {
                                level: c,
                                identity: format!(
                                    "pullback of {:?} after pullback of {:?} differs from the composite",
                                    sig.values, tau.values
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(datum)
}

/// The contravariant functor `C_n -> C_m` induced by `sigma: m -> n`,
/// assembled from the generating face and degeneracy functors along the
/// epi-mono factorization.
pub fn sigma_star(
    datum: &SimplicialGaloisDatum,
    sigma: &SimplexMap,
) -> Result<Functor, SimplexError> {
    let n = datum.truncation;
    if sigma.target_level > n {
        return Err(SimplexError::LevelOutOfRange { level: sigma.target_level, truncation: n });
    }
    if sigma.source_level > n {
        return Err(SimplexError::LevelOutOfRange { level: sigma.source_level, truncation: n });
    }
    let word = factorize_map(sigma);
    // Contravariance reverses the word: pull back along the outermost coface
    // first, then along the codegeneracies.
    let mut level = sigma.target_level;
    let mut steps: Vec<&Functor> = Vec::new();
    for &i in &word.cofaces {
        steps.push(&datum.face_functors[level][i]);
        level -= 1;
    }
    for &j in &word.codegeneracies {
        steps.push(&datum.degeneracy_functors[level][j]);
        level += 1;
    }
    debug_assert_eq!(level, sigma.source_level);
    if steps.is_empty() {
        return Ok(Functor::identity(&datum.fibers[level]));
    }
    Ok(chain(&steps))
}

/// Index of the tuple `(x; g_1..g_m)` in the level-`m` fiber of a bar datum:
/// big-endian with `x` most significant.
pub fn bar_index(order: usize, x: usize, gs: &[usize]) -> usize {
    let mut idx = x;
    for &g in gs {
        idx = idx * order + g;
    }
    idx
}

/// Decodes a level-`m` bar-fiber object back into `(x, [g_1..g_m])`.
pub fn bar_decode(order: usize, m: usize, mut idx: usize) -> (usize, Vec<usize>) {
    let mut gs = vec![0usize; m];
    for slot in gs.iter_mut().rev() {
        *slot = idx % order;
        idx /= order;
    }
    (idx, gs)
}

/// The bar construction of a right action, truncated at `n`: the level-`m`
/// fiber is the discrete category on `X x G^m`, the bottom face acts, the
/// middle faces multiply adjacent entries, the top face drops the last
/// entry, and degeneracies insert the identity element.
pub fn bar_datum(group: &FiniteGroup, xset: &GSet, n: usize) -> SimplicialGaloisDatum {
    let order = group.order();
    let fiber_size = |m: usize| xset.size * order.pow(m as u32);
    let discrete = |size: usize| CategoryData {
        objects: size,
        morphisms: (0..size).map(|i| (i, i)).collect(),
        identity: (0..size).collect(),
        compose: (0..size).map(|i| (i, i, i)).collect(),
    };
    let fibers: Vec<CategoryData> = (0..=n).map(|m| discrete(fiber_size(m))).collect();

    let mut face_functors: Vec<Vec<Functor>> = vec![Vec::new()];
    for m in 1..=n {
        let mut level = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let object_map: Vec<usize> = (0..fiber_size(m))
                .map(|idx| {
                    let (x, gs) = bar_decode(order, m, idx);
                    if i == 0 {
                        bar_index(order, xset.apply(x, gs[0]), &gs[1..])
                    } else if i == m {
                        bar_index(order, x, &gs[..m - 1])
                    } else {
                        let mut out = Vec::with_capacity(m - 1);
                        out.extend_from_slice(&gs[..i - 1]);
                        out.push(group.mul[gs[i - 1]][gs[i]]);
                        out.extend_from_slice(&gs[i + 1..]);
                        bar_index(order, x, &out)
                    }
                })
                .collect();
            let morphism_map = object_map.clone();
            level.push(Functor { object_map, morphism_map });
        }
        face_functors.push(level);
    }

    let mut degeneracy_functors: Vec<Vec<Functor>> = Vec::new();
    for m in 0..=n {
        if m == n {
            degeneracy_functors.push(Vec::new());
            break;
        }
        let mut level = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let object_map: Vec<usize> = (0..fiber_size(m))
                .map(|idx| {
                    let (x, gs) = bar_decode(order, m, idx);
                    let mut out = Vec::with_capacity(m + 1);
                    out.extend_from_slice(&gs[..i]);
                    out.push(group.identity);
                    out.extend_from_slice(&gs[i..]);
                    bar_index(order, x, &out)
                })
                .collect();
            let morphism_map = object_map.clone();
            level.push(Functor { object_map, morphism_map });
        }
        degeneracy_functors.push(level);
    }

    let raw = RawSimplicialDatum {
        truncation: n,
        fibers,
        face_functors,
        degeneracy_functors,
    };
    validate_simplicial_datum(&raw).expect("bar construction satisfies the simplicial identities")
}
