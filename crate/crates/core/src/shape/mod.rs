//! Homotopical invariants of total categories: truncated nerves, exact
//! integral homology along two independent routes (the nerve of the total
//! category, and the homotopy colimit of the fiber nerves assembled as a
//! double complex), and spanning-tree fundamental-group presentations.

pub mod group_homology;
mod morse;
#[cfg(test)]
mod tests;

pub use morse::total_nerve_homology;

use crate::exodromy::fundamental_groupoid;
use crate::fincat::{FiniteCategory, Functor};
use crate::simplex::{compose_maps, hom_delta, sigma_star, SimplexMap, SimplicialGaloisDatum};
use crate::snf::{rank_and_invariant_factors, AbelianGroup, SparseVec};
use crate::total::build_total;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Sentinel face index for a face that is degenerate (its chain would
/// contain an identity), hence zero in the normalized chain complex.
pub const DEGENERATE: u32 = u32::MAX;

/// Cap on the total matrix work a homology call may take on. The unit
/// counts boundary-matrix entries as streamed into the reduction plus, per
/// boundary, the square of its smaller side — the dense core that exact
/// integer elimination tends toward on these complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixBudget {
    pub entries: u64,
}

impl MatrixBudget {
    pub const DEFAULT_ENTRIES: u64 = 2_000_000_000;
}

impl Default for MatrixBudget {
    fn default() -> MatrixBudget {
        MatrixBudget { entries: MatrixBudget::DEFAULT_ENTRIES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    /// The boundary matrices would be materialized only after this
    /// projection passes, so oversized inputs are refused cheaply.
    #[error("projected matrix work of {projected} entries exceeds the budget of {budget}")]
    MatrixBudgetExceeded { projected: u64, budget: u64 },
}

// ---------------------------------------------------------------------------
// Truncated simplicial sets and nerves
// ---------------------------------------------------------------------------

/// Nondegenerate simplices of a nerve through dimension `cap`, with face
/// bookkeeping. A dimension-`d` simplex is a chain of `d` composable
/// non-identity morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    pub cap: usize,
    pub n_vertices: usize,
    /// `chains[d]` for `d >= 1`: morphism ids flattened with stride `d`, in
    /// lexicographic order. `chains[0]` is empty (vertices are objects).
    pub chains: Vec<Vec<u32>>,
    /// `faces[d]` parallel to `chains[d]` with stride `d + 1`: the index of
    /// the `i`-th face among the `(d-1)`-chains, or [`DEGENERATE`].
    /// `faces[1]` records vertices, target first.
    pub faces: Vec<Vec<u32>>,
}

impl TruncatedSimplicialSet {
    pub fn n_cells(&self, d: usize) -> usize {
        if d == 0 {
            self.n_vertices
        } else if d <= self.cap {
            self.chains[d].len() / d
        } else {
            0
        }
    }

    /// The morphism ids of simplex `s` in dimension `d >= 1`.
    pub fn chain(&self, d: usize, s: usize) -> &[u32] {
        &self.chains[d][s * d..(s + 1) * d]
    }

    /// Index of the `i`-th face of simplex `s`, or [`DEGENERATE`].
    pub fn face(&self, d: usize, s: usize, i: usize) -> u32 {
        self.faces[d][s * (d + 1) + i]
    }
}

/// Binary search for `key` among lexicographically sorted windows of width
/// `stride`.
fn locate(flat: &[u32], stride: usize, key: &[u32]) -> u32 {
    debug_assert_eq!(key.len(), stride);
    let n = flat.len() / stride;
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if &flat[mid * stride..(mid + 1) * stride] < &key {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    debug_assert!(
        lo < n && flat[lo * stride..(lo + 1) * stride] == *key,
        "chain must be present in the dimension below"
    );
    lo as u32
}

/// Number of `d`-chains of composable non-identity morphisms for each
/// `d = 0..=cap`, by dynamic programming; saturates instead of overflowing.
pub fn nerve_cell_counts(c: &FiniteCategory, cap: usize) -> Vec<u64> {
    let n_obj = c.n_objects();
    let mut counts = Vec::with_capacity(cap + 1);
    counts.push(n_obj as u64);
    let mut ending_at = vec![1u64; n_obj];
    for _ in 1..=cap {
        let mut next = vec![0u64; n_obj];
        for m in 0..c.n_morphisms() {
            if !c.is_identity(m) {
                let t = c.target(m);
                next[t] = next[t].saturating_add(ending_at[c.source(m)]);
            }
        }
        counts.push(next.iter().fold(0u64, |a, &x| a.saturating_add(x)));
        ending_at = next;
    }
    counts
}

/// The nerve of `c` through dimension `cap`: chains of composable
/// non-identity morphisms, with inner faces composing, outer faces
/// dropping, and composites that land on identities marked [`DEGENERATE`].
pub fn nerve(c: &FiniteCategory, cap: usize) -> TruncatedSimplicialSet {
    let n_obj = c.n_objects();
    let n_mor = c.n_morphisms();
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
    for m in 0..n_mor {
        if !c.is_identity(m) {
            out[c.source(m)].push(m as u32);
        }
    }
    let counts = nerve_cell_counts(c, cap);

    let mut chains: Vec<Vec<u32>> = Vec::with_capacity(cap + 1);
    chains.push(Vec::new());
    for d in 1..=cap {
        let hint = usize::try_from(counts[d].saturating_mul(d as u64)).unwrap_or(0);
        let mut cur = Vec::with_capacity(hint);
        if d == 1 {
            cur.extend((0..n_mor).filter(|&m| !c.is_identity(m)).map(|m| m as u32));
        } else {
            for ch in chains[d - 1].chunks_exact(d - 1) {
                for &f in &out[c.target(ch[d - 2] as usize)] {
                    cur.extend_from_slice(ch);
                    cur.push(f);
                }
            }
        }
        chains.push(cur);
    }

    let mut faces: Vec<Vec<u32>> = Vec::with_capacity(cap + 1);
    faces.push(Vec::new());
    let mut key: Vec<u32> = Vec::new();
    for d in 1..=cap {
        let n_cells = chains[d].len() / d;
        let mut f = Vec::with_capacity(n_cells * (d + 1));
        for s in 0..n_cells {
            let ch = &chains[d][s * d..(s + 1) * d];
            if d == 1 {
                f.push(c.target(ch[0] as usize) as u32);
                f.push(c.source(ch[0] as usize) as u32);
                continue;
            }
            for i in 0..=d {
                if i == 0 {
                    f.push(locate(&chains[d - 1], d - 1, &ch[1..]));
                } else if i == d {
                    f.push(locate(&chains[d - 1], d - 1, &ch[..d - 1]));
                } else {
                    let g = c.compose(ch[i] as usize, ch[i - 1] as usize);
                    if c.is_identity(g) {
                        f.push(DEGENERATE);
                    } else {
                        key.clear();
                        key.extend_from_slice(&ch[..i - 1]);
                        key.push(g as u32);
                        key.extend_from_slice(&ch[i + 1..]);
                        f.push(locate(&chains[d - 1], d - 1, &key));
                    }
                }
            }
        }
        faces.push(f);
    }

    TruncatedSimplicialSet { cap, n_vertices: n_obj, chains, faces }
}

// ---------------------------------------------------------------------------
// Chain complexes
// ---------------------------------------------------------------------------

/// Sparse integer matrix in compressed column form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Entry range of column `j` is `col_ptr[j]..col_ptr[j + 1]`.
    pub col_ptr: Vec<usize>,
    /// `(row, value)` with rows strictly ascending within each column.
    pub entries: Vec<(u32, i64)>,
}

impl SparseMatrix {
    fn empty(n_rows: usize) -> SparseMatrix {
        SparseMatrix { n_rows, n_cols: 0, col_ptr: vec![0], entries: Vec::new() }
    }

    fn push_column(&mut self, col: &SparseVec) {
        self.entries.extend_from_slice(&col.entries);
        self.col_ptr.push(self.entries.len());
        self.n_cols += 1;
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.entries[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// `(row, column, value)` triples in column-major order, for export.
    pub fn triplets(&self) -> impl Iterator<Item = (u32, u32, i64)> + '_ {
        (0..self.n_cols).flat_map(move |j| {
            self.column(j).iter().map(move |&(r, v)| (r, j as u32, v))
        })
    }
}

/// Integer chain complex: `boundaries[d - 1]` maps degree `d` to `d - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Checks shape consistency and that consecutive boundary maps compose
    /// to zero, exactly.
    pub fn validate(&self) -> Result<(), String> {
        if self.boundaries.len() + 1 != self.dims.len() {
            return Err(format!(
                "{} boundary maps do not fit {} chain degrees",
                self.boundaries.len(),
                self.dims.len()
            ));
        }
        for (k, b) in self.boundaries.iter().enumerate() {
            if b.n_rows != self.dims[k] || b.n_cols != self.dims[k + 1] {
                return Err(format!(
                    "boundary {} has shape {}x{}, expected {}x{}",
                    k + 1,
                    b.n_rows,
                    b.n_cols,
                    self.dims[k],
                    self.dims[k + 1]
                ));
            }
            if b.col_ptr.len() != b.n_cols + 1 || *b.col_ptr.last().unwrap() != b.entries.len() {
                return Err(format!("boundary {} has inconsistent column offsets", k + 1));
            }
            for j in 0..b.n_cols {
                let col = b.column(j);
                if col.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(format!("boundary {} column {} has unsorted rows", k + 1, j));
                }
                if col.iter().any(|&(r, v)| r as usize >= b.n_rows || v == 0) {
                    return Err(format!("boundary {} column {} has an invalid entry", k + 1, j));
                }
            }
        }
        for d in 1..self.boundaries.len() {
            let hi = &self.boundaries[d];
            let lo = &self.boundaries[d - 1];
            let mut acc: BTreeMap<u32, i128> = BTreeMap::new();
            for j in 0..hi.n_cols {
                acc.clear();
                for &(r, v) in hi.column(j) {
                    for &(r2, v2) in lo.column(r as usize) {
                        *acc.entry(r2).or_insert(0) += v as i128 * v2 as i128;
                    }
                }
                if acc.values().any(|&x| x != 0) {
                    return Err(format!(
                        "boundaries {} and {} fail to compose to zero at column {}",
                        d,
                        d + 1,
                        j
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Signed boundary column of simplex `s` from its recorded faces.
fn boundary_of_faces(faces: &[u32], d: usize, s: usize) -> SparseVec {
    let row = &faces[s * (d + 1)..(s + 1) * (d + 1)];
    SparseVec::from_terms(
        row.iter()
            .enumerate()
            .filter(|&(_, &f)| f != DEGENERATE)
            .map(|(i, &f)| (f, if i % 2 == 0 { 1i64 } else { -1 })),
    )
}

/// The normalized chain complex of a truncated nerve.
pub fn nerve_complex(ts: &TruncatedSimplicialSet) -> ChainComplex {
    let dims: Vec<usize> = (0..=ts.cap).map(|d| ts.n_cells(d)).collect();
    let mut boundaries = Vec::with_capacity(ts.cap);
    for d in 1..=ts.cap {
        let mut m = SparseMatrix::empty(dims[d - 1]);
        for s in 0..dims[d] {
            m.push_column(&boundary_of_faces(&ts.faces[d], d, s));
        }
        boundaries.push(m);
    }
    ChainComplex { dims, boundaries }
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

/// Integral homology per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub degrees: Vec<AbelianGroup>,
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(d, g)| format!("H_{d} = {g}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Rank and nontrivial invariant factors of a boundary matrix whose columns
/// arrive through `columns` in a fixed order.
fn rank_and_factors(
    n_rows: usize,
    n_cols: usize,
    columns: impl FnOnce(&mut dyn FnMut(SparseVec)),
) -> (usize, Vec<i64>) {
    let (rank, factors) = rank_and_invariant_factors(n_rows, n_cols, columns);
    (rank, factors.into_iter().filter(|&x| x > 1).collect())
}

fn homology_of_nerve(ts: &TruncatedSimplicialSet, max_degree: usize) -> Vec<AbelianGroup> {
    let top = max_degree + 1;
    debug_assert!(ts.cap >= top);
    let mut ranks = vec![0usize; top + 2];
    let mut torsion: Vec<Vec<i64>> = vec![Vec::new(); top + 2];
    for d in 1..=top {
        let (r, t) = rank_and_factors(ts.n_cells(d - 1), ts.n_cells(d), |sink| {
            for s in 0..ts.n_cells(d) {
                sink(boundary_of_faces(&ts.faces[d], d, s));
            }
        });
        ranks[d] = r;
        torsion[d] = t;
    }
    (0..=max_degree)
        .map(|d| AbelianGroup {
            free_rank: ts.n_cells(d) - ranks[d] - ranks[d + 1],
            torsion: torsion[d + 1].clone(),
        })
        .collect()
}

/// Projected matrix work for a complex with the given cell counts per
/// dimension: streamed entries (`d + 2` per column, counting faces and sign
/// slack) plus the dense elimination core, `min(rows, cols)^2` per boundary.
fn projected_work(counts: &[u64]) -> u64 {
    let mut total = 0u64;
    for d in 1..counts.len() {
        let side = counts[d - 1].min(counts[d]);
        total = total
            .saturating_add(counts[d].saturating_mul(d as u64 + 2))
            .saturating_add(side.saturating_mul(side));
    }
    total
}

/// Integral homology of the nerve of `c` in degrees `0..=max_degree`,
/// computed from the nerve truncated one dimension above the cap so the top
/// reported degree sees its incoming boundary. The projected matrix work is
/// checked against `budget` before anything large is materialized.
pub fn homology(
    c: &FiniteCategory,
    max_degree: usize,
    budget: &MatrixBudget,
) -> Result<HomologyResult, ShapeError> {
    assert!(max_degree >= 1, "degree cap must be at least 1");
    let cap = max_degree + 1;
    let counts = nerve_cell_counts(c, cap);
    let projected = projected_work(&counts);
    if projected > budget.entries {
        return Err(ShapeError::MatrixBudgetExceeded { projected, budget: budget.entries });
    }
    let ts = nerve(c, cap);
    Ok(HomologyResult { degrees: homology_of_nerve(&ts, max_degree) })
}

// ---------------------------------------------------------------------------
// Homotopy colimit of the fiber nerves
// ---------------------------------------------------------------------------

/// The truncated simplex category with all its monotone maps indexed, for
/// chain bookkeeping on the base.
struct DeltaCat {
    maps: Vec<SimplexMap>,
    /// `block[s][t]` is `(start, len)` of the maps from level `s` to `t`,
    /// lexicographically ordered by value table.
    block: Vec<Vec<(u32, u32)>>,
    /// Non-identity map ids grouped by target level, ascending.
    nonid_by_tgt: Vec<Vec<u32>>,
}

impl DeltaCat {
    fn new(n: usize) -> DeltaCat {
        let mut maps = Vec::new();
        let mut block = vec![vec![(0u32, 0u32); n + 1]; n + 1];
        for s in 0..=n {
            for t in 0..=n {
                let h = hom_delta(s, t);
                debug_assert!(h.windows(2).all(|w| w[0].values < w[1].values));
                block[s][t] = (maps.len() as u32, h.len() as u32);
                maps.extend(h);
            }
        }
        let mut nonid_by_tgt = vec![Vec::new(); n + 1];
        for (i, m) in maps.iter().enumerate() {
            if !m.is_identity() {
                nonid_by_tgt[m.target_level].push(i as u32);
            }
        }
        DeltaCat { maps, block, nonid_by_tgt }
    }

    fn map(&self, id: u32) -> &SimplexMap {
        &self.maps[id as usize]
    }

    fn locate(&self, m: &SimplexMap) -> u32 {
        let (start, len) = self.block[m.source_level][m.target_level];
        let s = start as usize;
        let pos = self.maps[s..s + len as usize]
            .binary_search_by(|cand| cand.values.cmp(&m.values))
            .expect("composite of truncation-level maps stays within the truncation");
        (s + pos) as u32
    }

    /// `a ∘ b` (apply `b` first).
    fn compose(&self, a: u32, b: u32) -> u32 {
        self.locate(&compose_maps(self.map(a), self.map(b)))
    }
}

/// Cell layout of one total dimension of the double complex: blocks by
/// horizontal length `p`, then by chain, then by fiber-nerve cell.
struct Layout {
    block_off: Vec<u64>,
    prefix: Vec<Vec<u64>>,
}

impl Layout {
    fn total(&self) -> u64 {
        *self.block_off.last().unwrap()
    }
}

/// All data needed to stream the simplicial-replacement double complex:
/// chains of non-identity base maps (rows) against fiber-nerve chains
/// (columns).
struct HocolimShape<'a> {
    datum: &'a SimplicialGaloisDatum,
    delta: DeltaCat,
    /// Pullback functor per base map id.
    pulls: Vec<Functor>,
    /// Fiber nerves per level.
    nerves: Vec<TruncatedSimplicialSet>,
    /// Per length `p`: the level each chain starts from (its first target).
    hlevels: Vec<Vec<u8>>,
    /// Per length `p >= 1`: flattened chains of map ids, stride `p`,
    /// lexicographic.
    hchains: Vec<Vec<u32>>,
}

impl<'a> HocolimShape<'a> {
    fn build(datum: &'a SimplicialGaloisDatum, cap: usize) -> HocolimShape<'a> {
        let n = datum.truncation;
        let delta = DeltaCat::new(n);
        let pulls: Vec<Functor> = delta
            .maps
            .iter()
            .map(|m| sigma_star(datum, m).expect("validated datum pulls back along every map"))
            .collect();
        let nerves: Vec<TruncatedSimplicialSet> =
            (0..=n).map(|m| nerve(&datum.fibers[m], cap)).collect();

        let mut hlevels: Vec<Vec<u8>> = vec![(0..=n as u8).collect()];
        let mut hchains: Vec<Vec<u32>> = vec![Vec::new()];
        for p in 1..=cap {
            let mut lv = Vec::new();
            let mut ch = Vec::new();
            if p == 1 {
                for (id, m) in delta.maps.iter().enumerate() {
                    if !m.is_identity() {
                        ch.push(id as u32);
                        lv.push(m.target_level as u8);
                    }
                }
            } else {
                let prev = &hchains[p - 1];
                let prev_lv = &hlevels[p - 1];
                for (idx, window) in prev.chunks_exact(p - 1).enumerate() {
                    let tail_src = delta.map(window[p - 2]).source_level;
                    for &next in &delta.nonid_by_tgt[tail_src] {
                        ch.extend_from_slice(window);
                        ch.push(next);
                        lv.push(prev_lv[idx]);
                    }
                }
            }
            hchains.push(ch);
            hlevels.push(lv);
        }

        HocolimShape { datum, delta, pulls, nerves, hlevels, hchains }
    }

    fn layout(&self, t: usize) -> Layout {
        let mut block_off = Vec::with_capacity(t + 2);
        let mut prefix = Vec::with_capacity(t + 1);
        let mut off = 0u64;
        for p in 0..=t {
            block_off.push(off);
            let q = t - p;
            let lv = &self.hlevels[p];
            let mut pre = Vec::with_capacity(lv.len() + 1);
            let mut acc = 0u64;
            for &m in lv {
                pre.push(acc);
                acc += self.nerves[m as usize].n_cells(q) as u64;
            }
            pre.push(acc);
            prefix.push(pre);
            off += acc;
        }
        block_off.push(off);
        Layout { block_off, prefix }
    }

    fn index(&self, lay: &Layout, p: usize, hid: usize, vid: usize) -> u32 {
        let idx = lay.block_off[p] + lay.prefix[p][hid] + vid as u64;
        u32::try_from(idx).expect("cell index fits in 32 bits")
    }

    /// Visits the cells of total dimension `t` in layout order.
    fn for_each_cell(&self, t: usize, mut f: impl FnMut(usize, usize, usize)) {
        for p in 0..=t {
            let q = t - p;
            for hid in 0..self.hlevels[p].len() {
                let level = self.hlevels[p][hid] as usize;
                for vid in 0..self.nerves[level].n_cells(q) {
                    f(p, hid, vid);
                }
            }
        }
    }

    /// Transports fiber-nerve cell `vid` of dimension `q` along a pullback
    /// functor; `None` when the image chain contains an identity.
    fn push_vchain(
        &self,
        from_level: usize,
        to_level: usize,
        q: usize,
        vid: usize,
        pull: &Functor,
    ) -> Option<usize> {
        if q == 0 {
            return Some(pull.ob(vid));
        }
        let chain = self.nerves[from_level].chain(q, vid);
        let mut key = Vec::with_capacity(q);
        for &m in chain {
            let im = pull.mor(m as usize);
            if self.datum.fibers[to_level].is_identity(im) {
                return None;
            }
            key.push(im as u32);
        }
        Some(locate(&self.nerves[to_level].chains[q], q, &key) as usize)
    }

    /// Boundary column of the cell `(p, hid, vid)` of total dimension `t`,
    /// expressed in the layout of dimension `t - 1`. Horizontal faces drop
    /// or compose base maps (the innermost one transports the fiber cell
    /// along its pullback); vertical faces are fiber-nerve faces weighted
    /// by `(-1)^p`. Faces landing on degenerate cells are omitted.
    fn boundary_column(&self, lay_lo: &Layout, t: usize, p: usize, hid: usize, vid: usize) -> SparseVec {
        let q = t - p;
        let level = self.hlevels[p][hid] as usize;
        let mut terms: Vec<(u32, i64)> = Vec::with_capacity(t + 2);
        if p >= 1 {
            let ch = &self.hchains[p][hid * p..(hid + 1) * p];
            let sigma1 = ch[0];
            let new_level = self.delta.map(sigma1).source_level;
            if let Some(new_vid) =
                self.push_vchain(level, new_level, q, vid, &self.pulls[sigma1 as usize])
            {
                let new_hid = if p == 1 {
                    new_level
                } else {
                    locate(&self.hchains[p - 1], p - 1, &ch[1..]) as usize
                };
                terms.push((self.index(lay_lo, p - 1, new_hid, new_vid), 1));
            }
            let mut key: Vec<u32> = Vec::with_capacity(p - 1);
            for j in 1..p {
                let comp = self.delta.compose(ch[j - 1], ch[j]);
                if !self.delta.map(comp).is_identity() {
                    key.clear();
                    key.extend_from_slice(&ch[..j - 1]);
                    key.push(comp);
                    key.extend_from_slice(&ch[j + 1..]);
                    let new_hid = locate(&self.hchains[p - 1], p - 1, &key) as usize;
                    terms.push((
                        self.index(lay_lo, p - 1, new_hid, vid),
                        if j % 2 == 0 { 1 } else { -1 },
                    ));
                }
            }
            let last_hid = if p == 1 {
                level
            } else {
                locate(&self.hchains[p - 1], p - 1, &ch[..p - 1]) as usize
            };
            terms.push((
                self.index(lay_lo, p - 1, last_hid, vid),
                if p % 2 == 0 { 1 } else { -1 },
            ));
        }
        if q >= 1 {
            let vsign = if p % 2 == 0 { 1i64 } else { -1 };
            for k in 0..=q {
                let f = self.nerves[level].face(q, vid, k);
                if f != DEGENERATE {
                    terms.push((
                        self.index(lay_lo, p, hid, f as usize),
                        vsign * if k % 2 == 0 { 1 } else { -1 },
                    ));
                }
            }
        }
        SparseVec::from_terms(terms)
    }
}

/// Integral homology of the homotopy colimit of the fiber nerves over the
/// truncated simplex category, in degrees `0..=max_degree`, via the
/// simplicial-replacement double complex. The complex is collapsed along
/// its cone pairing before any matrix is materialized (see [`morse`]);
/// projected matrix work on the collapsed complex is checked against
/// `budget` first. The uncollapsed total complex remains available through
/// [`hocolim_complex`] and has the same homology.
pub fn hocolim_homology(
    datum: &SimplicialGaloisDatum,
    max_degree: usize,
    budget: &MatrixBudget,
) -> Result<HomologyResult, ShapeError> {
    morse::hocolim_collapsed_homology(datum, max_degree, budget)
}

/// Materializes the total complex of the simplicial-replacement double
/// complex through total dimension `cap`, for validation and export.
pub fn hocolim_complex(datum: &SimplicialGaloisDatum, cap: usize) -> ChainComplex {
    let hc = HocolimShape::build(datum, cap);
    let layouts: Vec<Layout> = (0..=cap).map(|t| hc.layout(t)).collect();
    let dims: Vec<usize> = layouts.iter().map(|l| l.total() as usize).collect();
    let mut boundaries = Vec::with_capacity(cap);
    for t in 1..=cap {
        let mut m = SparseMatrix::empty(dims[t - 1]);
        hc.for_each_cell(t, |p, hid, vid| {
            m.push_column(&hc.boundary_column(&layouts[t - 1], t, p, hid, vid));
        });
        boundaries.push(m);
    }
    ChainComplex { dims, boundaries }
}

// ---------------------------------------------------------------------------
// Fundamental group
// ---------------------------------------------------------------------------

/// Spanning-tree presentation of the fundamental group of a nerve at one
/// component, with its order and abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Presentation {
    pub basepoint: usize,
    /// Objects of the basepoint's component, ascending.
    pub component_objects: Vec<usize>,
    /// Morphism ids of the spanning tree, in discovery order.
    pub tree_edges: Vec<usize>,
    /// Morphism ids of the generators: non-identity, non-tree edges of the
    /// component.
    pub generators: Vec<usize>,
    /// Relator words, one per composable pair of non-identity morphisms
    /// (deduplicated, freely reduced, empties dropped); letter `±(i+1)` is
    /// generator `i` or its inverse, read left to right.
    pub relators: Vec<Vec<i32>>,
    /// Group order, from coset enumeration of the Tietze-reduced
    /// presentation; `None` when the enumeration refuses (the order exceeds
    /// its cap or the cosets outgrow their limit).
    pub order: Option<u64>,
    /// The generators modulo relators, made commutative.
    pub abelianization: AbelianGroup,
}

/// Presentation of the fundamental group of the nerve of `c` at
/// `basepoint`: generators are non-tree 1-simplices of its component,
/// relators come from the 2-simplices.
pub fn pi1_presentation(c: &FiniteCategory, basepoint: usize) -> Pi1Presentation {
    assert!(basepoint < c.n_objects(), "basepoint must name an object");
    let n_obj = c.n_objects();
    let n_mor = c.n_morphisms();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_obj];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for m in 0..n_mor {
        if c.is_identity(m) {
            continue;
        }
        let (a, b) = (c.source(m), c.target(m));
        out[a].push(m);
        adj[a].push((b, m));
        if b != a {
            adj[b].push((a, m));
        }
    }

    let mut in_comp = vec![false; n_obj];
    let mut in_tree = vec![false; n_mor];
    let mut tree_edges = Vec::new();
    let mut queue = VecDeque::from([basepoint]);
    in_comp[basepoint] = true;
    while let Some(x) = queue.pop_front() {
        for &(y, m) in &adj[x] {
            if !in_comp[y] {
                in_comp[y] = true;
                in_tree[m] = true;
                tree_edges.push(m);
                queue.push_back(y);
            }
        }
    }
    let component_objects: Vec<usize> = (0..n_obj).filter(|&o| in_comp[o]).collect();

    let mut gen_of = vec![usize::MAX; n_mor];
    let mut generators = Vec::new();
    for m in 0..n_mor {
        if !c.is_identity(m) && !in_tree[m] && in_comp[c.source(m)] {
            gen_of[m] = generators.len();
            generators.push(m);
        }
    }

    let letter = |m: usize| -> Option<i32> {
        (gen_of[m] != usize::MAX).then(|| gen_of[m] as i32 + 1)
    };
    let mut rel_set: BTreeSet<Vec<i32>> = BTreeSet::new();
    for f in 0..n_mor {
        if c.is_identity(f) || !in_comp[c.source(f)] {
            continue;
        }
        for &g in &out[c.target(f)] {
            let mut word: Vec<i32> = Vec::with_capacity(3);
            if let Some(l) = letter(f) {
                word.push(l);
            }
            if let Some(l) = letter(g) {
                word.push(l);
            }
            let h = c.compose(g, f);
            if !c.is_identity(h) {
                if let Some(l) = letter(h) {
                    word.push(-l);
                }
            }
            let mut reduced: Vec<i32> = Vec::with_capacity(word.len());
            for l in word {
                if reduced.last() == Some(&(-l)) {
                    reduced.pop();
                } else {
                    reduced.push(l);
                }
            }
            if !reduced.is_empty() {
                rel_set.insert(reduced);
            }
        }
    }
    let relators: Vec<Vec<i32>> = rel_set.into_iter().collect();

    // The raw presentation can carry thousands of generators; enumerate the
    // Tietze-reduced presentation of the component instead.
    let order = {
        let (sub, _, _) = c.full_subcategory(&component_objects);
        fundamental_groupoid(&sub).ok().map(|g| g.components[0].order)
    };
    let abelianization = AbelianGroup::quotient(
        generators.len(),
        relators.iter().map(|w| {
            SparseVec::from_terms(
                w.iter().map(|&l| (l.unsigned_abs() - 1, if l > 0 { 1i64 } else { -1 })),
            )
        }),
    );

    Pi1Presentation {
        basepoint,
        component_objects,
        tree_edges,
        generators,
        relators,
        order,
        abelianization,
    }
}

// ---------------------------------------------------------------------------
// Bundled report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeVerdict {
    /// Both homology routes returned identical results degree by degree.
    pub routes_agree: bool,
    /// One component, trivial fundamental group, point homology.
    pub contractible: bool,
}

/// Everything the shape of a validated simplicial datum exposes at finite
/// level: components, fundamental groups, and homology by both routes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub n_components: usize,
    /// One presentation per component, based at its smallest object.
    pub components: Vec<Pi1Presentation>,
    /// Homology of the nerve of the total category.
    pub homology_total: HomologyResult,
    /// Homology of the homotopy colimit of the fiber nerves.
    pub homology_hocolim: HomologyResult,
    pub verdict: ShapeVerdict,
}

/// Computes both homology routes (concurrently), components, and one
/// fundamental-group presentation per component of the total category.
pub fn shape_report(
    datum: &SimplicialGaloisDatum,
    max_degree: usize,
    budget: &MatrixBudget,
) -> Result<ShapeReport, ShapeError> {
    let total = build_total(datum);
    let c = &total.underlying;
    let (route_total, route_hocolim) = rayon::join(
        || total_nerve_homology(&total, max_degree, budget),
        || hocolim_homology(datum, max_degree, budget),
    );
    let homology_total = route_total?;
    let homology_hocolim = route_hocolim?;

    let (labels, n_components) = c.components();
    let mut seen = vec![false; n_components];
    let mut components = Vec::with_capacity(n_components);
    for o in 0..c.n_objects() {
        if !seen[labels[o]] {
            seen[labels[o]] = true;
            components.push(pi1_presentation(c, o));
        }
    }

    let routes_agree = homology_total == homology_hocolim;
    let point_homology = homology_total.degrees.iter().enumerate().all(|(d, g)| {
        if d == 0 {
            g.free_rank == 1 && g.torsion.is_empty()
        } else {
            g.is_trivial()
        }
    });
    let contractible = routes_agree
        && n_components == 1
        && point_homology
        && components.iter().all(|p| p.order == Some(1));

    Ok(ShapeReport {
        n_components,
        components,
        homology_total,
        homology_hocolim,
        verdict: ShapeVerdict { routes_agree, contractible },
    })
}
