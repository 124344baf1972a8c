//! Finite categories with explicit composition tables.
//!
//! Objects and morphisms are dense integer indices. A category is built by
//! validating raw table data ([`validate_category`]); after that it is
//! immutable and all lookups are O(1). Composition is stored per morphism
//! `g`, aligned with the list of morphisms into `source(g)`, so storage is
//! proportional to the number of composable pairs rather than the square of
//! the morphism count.

mod canon;

pub use canon::{canonical_form, CanonicalForm};

use thiserror::Error;

/// Raw category tables, as read from an interchange document or assembled
/// by a generator. `compose` lists triples `(g, f, gf)` meaning `g ∘ f = gf`
/// with `f` applied first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryData {
    pub objects: usize,
    /// Per morphism: (source, target).
    pub morphisms: Vec<(usize, usize)>,
    /// Per object: its identity morphism.
    pub identity: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("morphism {morphism} has endpoints ({from}, {to}) outside {objects} objects")]
    EndpointOutOfRange {
        morphism: usize,
        from: usize,
        to: usize,
        objects: usize,
    },
    #[error("identity list has {got} entries for {objects} objects")]
    IdentityCount { objects: usize, got: usize },
    #[error("morphism index {index} in {place} exceeds morphism count {count}")]
    MorphismOutOfRange {
        place: &'static str,
        index: usize,
        count: usize,
    },
    /// The identity assigned to `object` has wrong endpoints, or the witness
    /// morphism fails a unit law against it.
    #[error("bad identity at object {object} (witness morphism {morphism})")]
    BadIdentity { object: usize, morphism: usize },
    /// The composition table is wrong at the pair `(g, f)`: the entry is
    /// absent, duplicated, attached to a non-composable pair, or lands on a
    /// morphism with the wrong endpoints.
    #[error("composition table mismatch at g = {g}, f = {f}")]
    MissingComposite { g: usize, f: usize },
    #[error("associativity fails on f = {f}, g = {g}, h = {h}")]
    NonAssociative { f: usize, g: usize, h: usize },
}

/// A validated finite category. Immutable; shared freely across threads.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    n_objects: usize,
    src: Vec<u32>,
    tgt: Vec<u32>,
    ident: Vec<u32>,
    /// Per object: morphisms with that target, ascending.
    in_list: Vec<Vec<u32>>,
    /// Per morphism: its position inside `in_list[target]`.
    in_pos: Vec<u32>,
    /// Per morphism g: composites `g ∘ f` for `f` in `in_list[source(g)]`.
    comp: Vec<Box<[u32]>>,
    /// Morphisms sorted by (source, target); `st_off` has n_objects^2 + 1
    /// offsets into it.
    by_st: Vec<u32>,
    st_off: Vec<u32>,
    /// Two-sided inverse per morphism, if any.
    inv: Vec<Option<u32>>,
}

/// Inverses for every endomorphism, produced by [`FiniteCategory::is_layered`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredWitness {
    /// Pairs (endomorphism, inverse), ascending by endomorphism index.
    pub endo_inverses: Vec<(usize, usize)>,
}

/// Validates raw tables and produces the packed category.
pub fn validate_category(data: &CategoryData) -> Result<FiniteCategory, CategoryError> {
    let n_obj = data.objects;
    let n_mor = data.morphisms.len();
    assert!(n_mor < u32::MAX as usize, "morphism count exceeds index width");
    for (m, &(s, t)) in data.morphisms.iter().enumerate() {
        if s >= n_obj || t >= n_obj {
            return Err(CategoryError::EndpointOutOfRange {
                morphism: m,
                from: s,
                to: t,
                objects: n_obj,
            });
        }
    }
    if data.identity.len() != n_obj {
        return Err(CategoryError::IdentityCount {
            objects: n_obj,
            got: data.identity.len(),
        });
    }
    for (o, &m) in data.identity.iter().enumerate() {
        if m >= n_mor {
            return Err(CategoryError::MorphismOutOfRange {
                place: "identity list",
                index: m,
                count: n_mor,
            });
        }
        if data.morphisms[m] != (o, o) {
            return Err(CategoryError::BadIdentity {
                object: o,
                morphism: m,
            });
        }
    }

    let src: Vec<u32> = data.morphisms.iter().map(|&(s, _)| s as u32).collect();
    let tgt: Vec<u32> = data.morphisms.iter().map(|&(_, t)| t as u32).collect();

    let mut in_list: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
    let mut in_pos = vec![0u32; n_mor];
    for m in 0..n_mor {
        let t = tgt[m] as usize;
        in_pos[m] = in_list[t].len() as u32;
        in_list[t].push(m as u32);
    }

    let mut comp: Vec<Vec<Option<u32>>> = (0..n_mor)
        .map(|g| vec![None; in_list[src[g] as usize].len()])
        .collect();
    for &(g, f, gf) in &data.compose {
        for (idx, place) in [(g, "compose g"), (f, "compose f"), (gf, "compose gf")] {
            if idx >= n_mor {
                return Err(CategoryError::MorphismOutOfRange {
                    place,
                    index: idx,
                    count: n_mor,
                });
            }
        }
        if tgt[f] != src[g] {
            return Err(CategoryError::MissingComposite { g, f });
        }
        if src[gf] != src[f] || tgt[gf] != tgt[g] {
            return Err(CategoryError::MissingComposite { g, f });
        }
        let slot = &mut comp[g][in_pos[f] as usize];
        if slot.is_some() {
            return Err(CategoryError::MissingComposite { g, f });
        }
        *slot = Some(gf as u32);
    }
    let mut packed: Vec<Box<[u32]>> = Vec::with_capacity(n_mor);
    for g in 0..n_mor {
        let row = &comp[g];
        let ins = &in_list[src[g] as usize];
        for (p, entry) in row.iter().enumerate() {
            if entry.is_none() {
                return Err(CategoryError::MissingComposite {
                    g,
                    f: ins[p] as usize,
                });
            }
        }
        packed.push(row.iter().map(|e| e.unwrap()).collect());
    }

    let mut cat = FiniteCategory {
        n_objects: n_obj,
        src,
        tgt,
        ident: data.identity.iter().map(|&m| m as u32).collect(),
        in_list,
        in_pos,
        comp: packed,
        by_st: Vec::new(),
        st_off: Vec::new(),
        inv: Vec::new(),
    };
    cat.build_hom_index();
    cat.check_laws()?;
    cat.build_inverses();
    Ok(cat)
}

impl FiniteCategory {
    /// Packs pre-validated parts built by an internal generator. The caller
    /// must still run [`FiniteCategory::validate`] if the tables were not
    /// produced by construction rules that guarantee the laws.
    pub(crate) fn from_parts(
        n_objects: usize,
        src: Vec<u32>,
        tgt: Vec<u32>,
        ident: Vec<u32>,
        compose_fn: impl Fn(u32, u32) -> u32 + Sync,
    ) -> FiniteCategory {
        use rayon::prelude::*;
        let n_mor = src.len();
        let mut in_list: Vec<Vec<u32>> = vec![Vec::new(); n_objects];
        let mut in_pos = vec![0u32; n_mor];
        for m in 0..n_mor {
            let t = tgt[m] as usize;
            in_pos[m] = in_list[t].len() as u32;
            in_list[t].push(m as u32);
        }
        let comp: Vec<Box<[u32]>> = (0..n_mor)
            .into_par_iter()
            .map(|g| {
                in_list[src[g] as usize]
                    .iter()
                    .map(|&f| compose_fn(g as u32, f))
                    .collect()
            })
            .collect();
        let mut cat = FiniteCategory {
            n_objects,
            src,
            tgt,
            ident,
            in_list,
            in_pos,
            comp,
            by_st: Vec::new(),
            st_off: Vec::new(),
            inv: Vec::new(),
        };
        cat.build_hom_index();
        cat.build_inverses();
        cat
    }

    fn build_hom_index(&mut self) {
        let n = self.n_objects;
        let mut counts = vec![0u32; n * n + 1];
        for m in 0..self.n_morphisms() {
            counts[self.src[m] as usize * n + self.tgt[m] as usize + 1] += 1;
        }
        for i in 0..n * n {
            counts[i + 1] += counts[i];
        }
        let mut by_st = vec![0u32; self.n_morphisms()];
        let mut cursor = counts.clone();
        for m in 0..self.n_morphisms() {
            let cell = self.src[m] as usize * n + self.tgt[m] as usize;
            by_st[cursor[cell] as usize] = m as u32;
            cursor[cell] += 1;
        }
        self.by_st = by_st;
        self.st_off = counts;
    }

    fn build_inverses(&mut self) {
        let mut inv = vec![None; self.n_morphisms()];
        for m in 0..self.n_morphisms() {
            if inv[m].is_some() {
                continue;
            }
            let (a, b) = (self.src[m] as usize, self.tgt[m] as usize);
            let (id_a, id_b) = (self.ident[a], self.ident[b]);
            for &g in self.hom(b, a) {
                if self.compose(g as usize, m) == id_a as usize
                    && self.compose(m, g as usize) == id_b as usize
                {
                    inv[m] = Some(g);
                    inv[g as usize] = Some(m as u32);
                    break;
                }
            }
        }
        self.inv = inv;
    }

    /// Re-checks unit laws and associativity on the packed tables.
    pub fn validate(&self) -> Result<(), CategoryError> {
        self.check_laws()
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        use rayon::prelude::*;
        for f in 0..self.n_morphisms() {
            let (a, b) = (self.src[f] as usize, self.tgt[f] as usize);
            if self.compose(self.ident[b] as usize, f) != f {
                return Err(CategoryError::BadIdentity {
                    object: b,
                    morphism: f,
                });
            }
            if self.compose(f, self.ident[a] as usize) != f {
                return Err(CategoryError::BadIdentity {
                    object: a,
                    morphism: f,
                });
            }
            let gf = self.comp[f][self.in_pos[self.ident[a] as usize] as usize] as usize;
            debug_assert_eq!(gf, f);
        }
        // Associativity over every composable triple. The early return above
        // guarantees endpoints already line up.
        let bad = (0..self.n_morphisms()).into_par_iter().find_map_first(|h| {
            let mid = self.src[h] as usize;
            for &g in &self.in_list[mid] {
                let hg = self.compose(h, g as usize);
                for &f in &self.in_list[self.src[g as usize] as usize] {
                    let gf = self.compose(g as usize, f as usize);
                    if self.compose(h, gf) != self.compose(hg, f as usize) {
                        return Some(CategoryError::NonAssociative {
                            f: f as usize,
                            g: g as usize,
                            h,
                        });
                    }
                }
            }
            None
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn source(&self, m: usize) -> usize {
        self.src[m] as usize
    }

    pub fn target(&self, m: usize) -> usize {
        self.tgt[m] as usize
    }

    pub fn identity(&self, o: usize) -> usize {
        self.ident[o] as usize
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ident[self.src[m] as usize] as usize == m && self.src[m] == self.tgt[m]
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.tgt[f] == self.src[g]
    }

    /// `g ∘ f`, with `f` applied first. Panics if the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        assert!(self.composable(g, f), "compose({g}, {f}) not composable");
        self.comp[g][self.in_pos[f] as usize] as usize
    }

    /// Morphisms from `a` to `b`, ascending.
    pub fn hom(&self, a: usize, b: usize) -> &[u32] {
        let cell = a * self.n_objects + b;
        let lo = self.st_off[cell] as usize;
        let hi = self.st_off[cell + 1] as usize;
        &self.by_st[lo..hi]
    }

    /// Morphisms with target `o`, ascending.
    pub fn into_object(&self, o: usize) -> &[u32] {
        &self.in_list[o]
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inv[m].is_some()
    }

    pub fn inverse(&self, m: usize) -> Option<usize> {
        self.inv[m].map(|g| g as usize)
    }

    /// Every endomorphism must be invertible. On success returns the witness
    /// table of inverses; on failure, the first bad endomorphism.
    pub fn is_layered(&self) -> Result<LayeredWitness, usize> {
        let mut endo_inverses = Vec::new();
        for m in 0..self.n_morphisms() {
            if self.src[m] == self.tgt[m] {
                match self.inv[m] {
                    Some(g) => endo_inverses.push((m, g as usize)),
                    None => return Err(m),
                }
            }
        }
        Ok(LayeredWitness { endo_inverses })
    }

    /// The full subcategory on `objects` (which must be distinct). Returns the
    /// category together with the object and morphism maps back into `self`.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FiniteCategory, Vec<usize>, Vec<usize>) {
        let mut obj_old = vec![usize::MAX; self.n_objects];
        for (new, &old) in objects.iter().enumerate() {
            obj_old[old] = new;
        }
        let mut mor_map = Vec::new();
        let mut mor_old = vec![u32::MAX; self.n_morphisms()];
        for m in 0..self.n_morphisms() {
            if obj_old[self.src[m] as usize] != usize::MAX
                && obj_old[self.tgt[m] as usize] != usize::MAX
            {
                mor_old[m] = mor_map.len() as u32;
                mor_map.push(m);
            }
        }
        let src: Vec<u32> = mor_map.iter().map(|&m| obj_old[self.src[m] as usize] as u32).collect();
        let tgt: Vec<u32> = mor_map.iter().map(|&m| obj_old[self.tgt[m] as usize] as u32).collect();
        let ident: Vec<u32> = objects.iter().map(|&o| mor_old[self.ident[o] as usize]).collect();
        let mor_map_ref = &mor_map;
        let mor_old_ref = &mor_old;
        let cat = FiniteCategory::from_parts(objects.len(), src, tgt, ident, |g, f| {
            mor_old_ref[self.compose(mor_map_ref[g as usize], mor_map_ref[f as usize])]
        });
        (cat, objects.to_vec(), mor_map)
    }

    /// Exports the raw tables (inverse of [`validate_category`]).
    pub fn to_data(&self) -> CategoryData {
        let mut compose = Vec::new();
        for g in 0..self.n_morphisms() {
            for &f in &self.in_list[self.src[g] as usize] {
                compose.push((g, f as usize, self.compose(g, f as usize)));
            }
        }
        CategoryData {
            objects: self.n_objects,
            morphisms: (0..self.n_morphisms())
                .map(|m| (self.src[m] as usize, self.tgt[m] as usize))
                .collect(),
            identity: self.ident.iter().map(|&m| m as usize).collect(),
            compose,
        }
    }

    /// Objects grouped into connected components of the underlying graph
    /// (morphism direction ignored). Returns (component id per object, count).
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n_objects];
        let mut n = 0;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.n_objects];
        for m in 0..self.n_morphisms() {
            let (a, b) = (self.src[m] as usize, self.tgt[m] as usize);
            if a != b {
                adj[a].push(b as u32);
                adj[b].push(a as u32);
            }
        }
        for start in 0..self.n_objects {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = n;
            while let Some(o) = stack.pop() {
                for &b in &adj[o] {
                    if comp[b as usize] == usize::MAX {
                        comp[b as usize] = n;
                        stack.push(b as usize);
                    }
                }
            }
            n += 1;
        }
        (comp, n)
    }
}

/// A functor between validated categories, stored as raw index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map has {got} entries for {expected} source objects")]
    ObjectMapLength { expected: usize, got: usize },
    #[error("morphism map has {got} entries for {expected} source morphisms")]
    MorphismMapLength { expected: usize, got: usize },
    #[error("{place} entry {index} maps outside the target category")]
    TargetOutOfRange { place: &'static str, index: usize },
    #[error("morphism {morphism} maps to a morphism with mismatched endpoints")]
    EndpointMismatch { morphism: usize },
    #[error("identity of object {object} does not map to an identity")]
    IdentityMismatch { object: usize },
    #[error("functoriality fails on the composable pair g = {g}, f = {f}")]
    NotFunctorial { g: usize, f: usize },
    #[error("middle categories disagree when composing functors")]
    SourceTargetMismatch,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Functor {
        Functor {
            object_map: (0..c.n_objects()).collect(),
            morphism_map: (0..c.n_morphisms()).collect(),
        }
    }

    pub fn ob(&self, o: usize) -> usize {
        self.object_map[o]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.morphism_map[m]
    }
}

/// Checks that `f` is a functor from `src` to `tgt`.
pub fn validate_functor(
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Functor,
) -> Result<(), FunctorError> {
    if f.object_map.len() != src.n_objects() {
        return Err(FunctorError::ObjectMapLength {
            expected: src.n_objects(),
            got: f.object_map.len(),
        });
    }
    if f.morphism_map.len() != src.n_morphisms() {
        return Err(FunctorError::MorphismMapLength {
            expected: src.n_morphisms(),
            got: f.morphism_map.len(),
        });
    }
    for (o, &im) in f.object_map.iter().enumerate() {
        if im >= tgt.n_objects() {
            return Err(FunctorError::TargetOutOfRange {
                place: "object map",
                index: o,
            });
        }
    }
    for (m, &im) in f.morphism_map.iter().enumerate() {
        if im >= tgt.n_morphisms() {
            return Err(FunctorError::TargetOutOfRange {
                place: "morphism map",
                index: m,
            });
        }
        if tgt.source(im) != f.ob(src.source(m)) || tgt.target(im) != f.ob(src.target(m)) {
            return Err(FunctorError::EndpointMismatch { morphism: m });
        }
    }
    for o in 0..src.n_objects() {
        if f.mor(src.identity(o)) != tgt.identity(f.ob(o)) {
            return Err(FunctorError::IdentityMismatch { object: o });
        }
    }
    for g in 0..src.n_morphisms() {
        for &fm in src.into_object(src.source(g)) {
            let fm = fm as usize;
            if f.mor(src.compose(g, fm)) != tgt.compose(f.mor(g), f.mor(fm)) {
                return Err(FunctorError::NotFunctorial { g, f: fm });
            }
        }
    }
    Ok(())
}

/// `g ∘ f` with `f` applied first; `mid` is the shared middle category.
pub fn compose_functors(
    mid: &FiniteCategory,
    f: &Functor,
    g: &Functor,
) -> Result<Functor, FunctorError> {
    if g.object_map.len() != mid.n_objects() || g.morphism_map.len() != mid.n_morphisms() {
        return Err(FunctorError::SourceTargetMismatch);
    }
    if f.object_map.iter().any(|&o| o >= mid.n_objects())
        || f.morphism_map.iter().any(|&m| m >= mid.n_morphisms())
    {
        return Err(FunctorError::SourceTargetMismatch);
    }
    Ok(Functor {
        object_map: f.object_map.iter().map(|&o| g.ob(o)).collect(),
        morphism_map: f.morphism_map.iter().map(|&m| g.mor(m)).collect(),
    })
}

/// A natural transformation: one target morphism per source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalTransformation {
    pub components: Vec<usize>,
}

impl NaturalTransformation {
    /// Componentwise inverse; requires every component invertible.
    pub fn invert(&self, tgt: &FiniteCategory) -> Option<NaturalTransformation> {
        let mut components = Vec::with_capacity(self.components.len());
        for &c in &self.components {
            components.push(tgt.inverse(c)?);
        }
        Some(NaturalTransformation { components })
    }
}

/// Checks naturality of `nt : f => g` and that every component is invertible.
pub fn validate_natural_iso(
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Functor,
    g: &Functor,
    nt: &NaturalTransformation,
) -> bool {
    if nt.components.len() != src.n_objects() {
        return false;
    }
    for (x, &c) in nt.components.iter().enumerate() {
        if c >= tgt.n_morphisms()
            || tgt.source(c) != f.ob(x)
            || tgt.target(c) != g.ob(x)
            || !tgt.is_iso(c)
        {
            return false;
        }
    }
    for m in 0..src.n_morphisms() {
        let (a, b) = (src.source(m), src.target(m));
        if tgt.compose(nt.components[b], f.mor(m)) != tgt.compose(g.mor(m), nt.components[a]) {
            return false;
        }
    }
    true
}

/// Searches exhaustively for a natural isomorphism `f => g`, pruning partial
/// assignments as soon as a naturality square fails.
pub fn natural_iso_check(
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    f: &Functor,
    g: &Functor,
) -> Option<NaturalTransformation> {
    let n = src.n_objects();
    let mut cands: Vec<Vec<u32>> = Vec::with_capacity(n);
    for x in 0..n {
        let c: Vec<u32> = tgt
            .hom(f.ob(x), g.ob(x))
            .iter()
            .copied()
            .filter(|&m| tgt.is_iso(m as usize))
            .collect();
        if c.is_empty() {
            return None;
        }
        cands.push(c);
    }
    // Morphisms whose endpoints are both within the first k objects, indexed
    // by the larger endpoint, so each is checked exactly once.
    let mut edges_at: Vec<Vec<u32>> = vec![Vec::new(); n];
    for m in 0..src.n_morphisms() {
        let hi = src.source(m).max(src.target(m));
        edges_at[hi].push(m as u32);
    }
    let mut chosen = vec![0usize; n];
    fn dfs(
        x: usize,
        src: &FiniteCategory,
        tgt: &FiniteCategory,
        f: &Functor,
        g: &Functor,
        cands: &[Vec<u32>],
        edges_at: &[Vec<u32>],
        chosen: &mut Vec<usize>,
    ) -> bool {
        if x == src.n_objects() {
            return true;
        }
        'next: for &c in &cands[x] {
            chosen[x] = c as usize;
            for &m in &edges_at[x] {
                let m = m as usize;
                let (a, b) = (src.source(m), src.target(m));
                if tgt.compose(chosen[b], f.mor(m)) != tgt.compose(g.mor(m), chosen[a]) {
                    continue 'next;
                }
            }
            if dfs(x + 1, src, tgt, f, g, cands, edges_at, chosen) {
                return true;
            }
        }
        false
    }
    if dfs(0, src, tgt, f, g, &cands, &edges_at, &mut chosen) {
        Some(NaturalTransformation { components: chosen })
    } else {
        None
    }
}

/// Tables for a few stock categories used across the crate and its tests.
pub mod stock {
    use super::*;

    /// The terminal category: one object, one morphism.
    pub fn terminal() -> FiniteCategory {
        validate_category(&CategoryData {
            objects: 1,
            morphisms: vec![(0, 0)],
            identity: vec![0],
            compose: vec![(0, 0, 0)],
        })
        .unwrap()
    }

    /// One object whose endomorphisms form the given multiplication table
    /// (`mul[a][b]` is `a ∘ b`); entry `id` is the unit.
    pub fn one_object(mul: &[Vec<usize>], id: usize) -> Result<FiniteCategory, CategoryError> {
        let n = mul.len();
        let mut compose = Vec::new();
        for g in 0..n {
            for f in 0..n {
                compose.push((g, f, mul[g][f]));
            }
        }
        validate_category(&CategoryData {
            objects: 1,
            morphisms: vec![(0, 0); n],
            identity: vec![id],
            compose,
        })
    }

    /// The poset {0 < 1} as a category: objects 0, 1; morphisms id0, id1, arrow.
    pub fn arrow() -> FiniteCategory {
        validate_category(&CategoryData {
            objects: 2,
            morphisms: vec![(0, 0), (1, 1), (0, 1)],
            identity: vec![0, 1],
            compose: vec![(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)],
        })
        .unwrap()
    }

    /// A finite poset from its strict covering relation, given as `less[i]`
    /// listing elements strictly above i (the reflexive-transitive closure is
    /// taken here). Morphism a -> b exists iff a <= b.
    pub fn poset(n: usize, covers: &[(usize, usize)]) -> Result<FiniteCategory, CategoryError> {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in covers {
            le[a * n + b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut mor_of = vec![usize::MAX; n * n];
        for a in 0..n {
            for b in 0..n {
                if le[a * n + b] {
                    mor_of[a * n + b] = morphisms.len();
                    morphisms.push((a, b));
                }
            }
        }
        let identity: Vec<usize> = (0..n).map(|a| mor_of[a * n + a]).collect();
        let mut compose = Vec::new();
        for (g, &(b1, c)) in morphisms.iter().enumerate() {
            for (f, &(a, b2)) in morphisms.iter().enumerate() {
                if b1 == b2 {
                    compose.push((g, f, mor_of[a * n + c]));
                }
            }
        }
        validate_category(&CategoryData {
            objects: n,
            morphisms,
            identity,
            compose,
        })
    }
}

#[cfg(test)]
mod tests;
