//! Set-valued functors stored as explicit size vectors and image tables.
//!
//! A [`SetFunctor`] assigns every object of a finite category the set
//! `{0..size-1}` and every morphism a function table between those sets.
//! Validation checks the functor laws; [`natural_iso`] searches for a natural
//! isomorphism between two such functors by backtracking over per-object
//! bijections with early pruning on naturality squares. The representation is
//! deliberately independent of [`crate::finset::FinSetCat`] so that large
//! categories never need the function category materialized, but
//! [`SetFunctor::to_functor`] provides the bridge for cross-validation.

use crate::fincat::FiniteCategory;
use crate::finset::FinSetCat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A functor from a finite category to finite sets, with every value set a
/// canonical initial segment `{0..size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SetFunctor {
    /// Value-set size per object.
    pub sizes: Vec<usize>,
    /// Function table per morphism: `images[m][x]` is where `x` goes.
    pub images: Vec<Vec<usize>>,
}

/// Ways a size/table assignment can fail to be a functor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetFunctorError {
    #[error("expected {expected} value-set sizes, got {got}")]
    SizeCount { expected: usize, got: usize },
    #[error("expected {expected} image tables, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image table of morphism {morphism} has length {got}, expected {expected}")]
    TableShape {
        morphism: usize,
        expected: usize,
        got: usize,
    },
    #[error("image table of morphism {morphism} sends {position} to {got}, outside 0..{bound}")]
    ValueOutOfRange {
        morphism: usize,
        position: usize,
        got: usize,
        bound: usize,
    },
    #[error("identity of object {object} is not sent to the identity function")]
    IdentityImage { object: usize },
    #[error("image of composite of {g} after {f} differs from composite of images")]
    CompositionImage { g: usize, f: usize },
}

impl SetFunctor {
    /// The empty functor: every value set empty.
    pub fn empty(c: &FiniteCategory) -> SetFunctor {
        SetFunctor {
            sizes: vec![0; c.n_objects()],
            images: vec![Vec::new(); c.n_morphisms()],
        }
    }

    /// The constant functor with every value set of size `s` and every
    /// morphism acting as the identity.
    pub fn constant(c: &FiniteCategory, s: usize) -> SetFunctor {
        SetFunctor {
            sizes: vec![s; c.n_objects()],
            images: vec![(0..s).collect(); c.n_morphisms()],
        }
    }

    /// Checks shapes, ranges, identities, and composition against `c`.
    pub fn validate(&self, c: &FiniteCategory) -> Result<(), SetFunctorError> {
        if self.sizes.len() != c.n_objects() {
            return Err(SetFunctorError::SizeCount {
                expected: c.n_objects(),
                got: self.sizes.len(),
            });
        }
        if self.images.len() != c.n_morphisms() {
            return Err(SetFunctorError::ImageCount {
                expected: c.n_morphisms(),
                got: self.images.len(),
            });
        }
        for m in 0..c.n_morphisms() {
            let (a, b) = (c.source(m), c.target(m));
            let table = &self.images[m];
            if table.len() != self.sizes[a] {
                return Err(SetFunctorError::TableShape {
                    morphism: m,
                    expected: self.sizes[a],
                    got: table.len(),
                });
            }
            for (x, &y) in table.iter().enumerate() {
                if y >= self.sizes[b] {
                    return Err(SetFunctorError::ValueOutOfRange {
                        morphism: m,
                        position: x,
                        got: y,
                        bound: self.sizes[b],
                    });
                }
            }
        }
        for o in 0..c.n_objects() {
            let id = c.identity(o);
            if self.images[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(SetFunctorError::IdentityImage { object: o });
            }
        }
        for g in 0..c.n_morphisms() {
            for f in 0..c.n_morphisms() {
                if !c.composable(g, f) {
                    continue;
                }
                let gf = c.compose(g, f);
                let tf = &self.images[f];
                let tg = &self.images[g];
                let tgf = &self.images[gf];
                if tf.iter().enumerate().any(|(x, &y)| tgf[x] != tg[y]) {
                    return Err(SetFunctorError::CompositionImage { g, f });
                }
            }
        }
        Ok(())
    }

    /// Whether morphism `m` is sent to a bijection.
    pub fn is_bijection_on(&self, c: &FiniteCategory, m: usize) -> bool {
        let (a, b) = (c.source(m), c.target(m));
        if self.sizes[a] != self.sizes[b] {
            return false;
        }
        let mut seen = vec![false; self.sizes[b]];
        for &y in &self.images[m] {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    /// First edge of `edges` not sent to a bijection, if any.
    pub fn first_non_bijection<I>(&self, c: &FiniteCategory, edges: I) -> Option<usize>
    where
        I: IntoIterator<Item = usize>,
    {
        edges.into_iter().find(|&m| !self.is_bijection_on(c, m))
    }

    /// A key invariant under independent relabeling of each value set, used
    /// to bucket functors cheaply before exact natural-isomorphism checks.
    pub fn iso_invariant_key(&self, c: &FiniteCategory) -> Vec<u64> {
        let mut key: Vec<u64> = self.sizes.iter().map(|&s| s as u64).collect();
        for m in 0..c.n_morphisms() {
            let b = c.target(m);
            let mut pre = vec![0u64; self.sizes[b]];
            for &y in &self.images[m] {
                pre[y] += 1;
            }
            pre.sort_unstable();
            key.push(u64::MAX);
            key.extend_from_slice(&pre);
            if c.source(m) == b {
                // Conjugation invariants of an endofunction: fixed points of
                // the first three iterates.
                let t = &self.images[m];
                let mut fixed = [0u64; 3];
                for x in 0..t.len() {
                    let mut y = x;
                    for f in fixed.iter_mut() {
                        y = t[y];
                        if y == x {
                            *f += 1;
                        }
                    }
                }
                key.extend_from_slice(&fixed);
            }
        }
        key
    }

    /// Re-expresses the functor as a [`crate::fincat::Functor`] into the
    /// materialized function category. Panics if a value set exceeds the
    /// bound of `fs`.
    pub fn to_functor(&self, c: &FiniteCategory, fs: &FinSetCat) -> crate::fincat::Functor {
        let object_map: Vec<usize> = self.sizes.clone();
        let mut morphism_map = Vec::with_capacity(c.n_morphisms());
        for m in 0..c.n_morphisms() {
            let (a, b) = (c.source(m), c.target(m));
            morphism_map.push(fs.encode(self.sizes[a], self.sizes[b], &self.images[m]));
        }
        crate::fincat::Functor {
            object_map,
            morphism_map,
        }
    }
}

/// All permutations of `{0..n}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, depth: usize, out: &mut Vec<Vec<usize>>) {
        if depth == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur[depth] = v;
                rec(n, cur, used, depth + 1, out);
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, 0, &mut out);
    out
}

/// Searches for a natural isomorphism `f => g`: one bijection per object,
/// commuting with every image table. Returns the per-object bijections.
///
/// The search assigns objects in order and rejects a partial assignment as
/// soon as any morphism with both endpoints assigned fails its naturality
/// square, so the cost is governed by genuine symmetry rather than the raw
/// number of component choices.
pub fn natural_iso(
    c: &FiniteCategory,
    f: &SetFunctor,
    g: &SetFunctor,
) -> Option<Vec<Vec<usize>>> {
    if f.sizes != g.sizes {
        return None;
    }
    let n = c.n_objects();
    // Morphisms indexed by their larger endpoint, so each square is checked
    // exactly once, as early as possible.
    let mut edges_at: Vec<Vec<u32>> = vec![Vec::new(); n];
    for m in 0..c.n_morphisms() {
        if c.is_identity(m) {
            continue;
        }
        let hi = c.source(m).max(c.target(m));
        edges_at[hi].push(m as u32);
    }
    let perms: Vec<Vec<Vec<usize>>> = {
        let max_size = f.sizes.iter().copied().max().unwrap_or(0);
        (0..=max_size).map(permutations).collect()
    };
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); n];

    fn square_ok(
        c: &FiniteCategory,
        f: &SetFunctor,
        g: &SetFunctor,
        chosen: &[Vec<usize>],
        m: usize,
    ) -> bool {
        let (a, b) = (c.source(m), c.target(m));
        let (eta_a, eta_b) = (&chosen[a], &chosen[b]);
        let (tf, tg) = (&f.images[m], &g.images[m]);
        (0..f.sizes[a]).all(|x| eta_b[tf[x]] == tg[eta_a[x]])
    }

    fn dfs(
        x: usize,
        c: &FiniteCategory,
        f: &SetFunctor,
        g: &SetFunctor,
        perms: &[Vec<Vec<usize>>],
        edges_at: &[Vec<u32>],
        chosen: &mut Vec<Vec<usize>>,
    ) -> bool {
        if x == c.n_objects() {
            return true;
        }
        for p in &perms[f.sizes[x]] {
            chosen[x] = p.clone();
            if edges_at[x]
                .iter()
                .all(|&m| square_ok(c, f, g, chosen, m as usize))
                && dfs(x + 1, c, f, g, perms, edges_at, chosen)
            {
                return true;
            }
        }
        chosen[x] = Vec::new();
        false
    }

    if dfs(0, c, f, g, &perms, &edges_at, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// Checks that `components` is a valid natural isomorphism `f => g`.
pub fn validate_set_natural_iso(
    c: &FiniteCategory,
    f: &SetFunctor,
    g: &SetFunctor,
    components: &[Vec<usize>],
) -> bool {
    if components.len() != c.n_objects() || f.sizes != g.sizes {
        return false;
    }
    for (o, comp) in components.iter().enumerate() {
        if comp.len() != f.sizes[o] {
            return false;
        }
        let mut seen = vec![false; f.sizes[o]];
        for &y in comp {
            if y >= f.sizes[o] || seen[y] {
                return false;
            }
            seen[y] = true;
        }
    }
    (0..c.n_morphisms()).all(|m| {
        let (a, b) = (c.source(m), c.target(m));
        (0..f.sizes[a]).all(|x| components[b][f.images[m][x]] == g.images[m][components[a][x]])
    })
}

/// Deduplicates a list of functors up to natural isomorphism, keeping the
/// lexicographically least representative of each class. Output order is
/// deterministic (sorted representatives).
pub fn dedup_iso_classes(c: &FiniteCategory, mut fs: Vec<SetFunctor>) -> Vec<SetFunctor> {
    fs.sort_unstable();
    fs.dedup();
    let mut buckets: std::collections::BTreeMap<Vec<u64>, Vec<SetFunctor>> =
        std::collections::BTreeMap::new();
    for f in fs {
        let key = f.iso_invariant_key(c);
        buckets.entry(key).or_default().push(f);
    }
    let mut out: Vec<SetFunctor> = Vec::new();
    for (_, bucket) in buckets {
        let mut reps: Vec<SetFunctor> = Vec::new();
        'cand: for f in bucket {
            for r in &reps {
                if natural_iso(c, r, &f).is_some() {
                    continue 'cand;
                }
            }
            reps.push(f);
        }
        out.extend(reps);
    }
    out.sort_unstable();
    out
}
