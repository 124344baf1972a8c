//! Cone-collapsed homology for level-graded categories.
//!
//! The nerve of a total category is far larger than its homology: every
//! object at a positive level receives a canonical edge from level zero (the
//! cartesian lift of the top-vertex inclusion), and pairing each chain with
//! the chain extended by that edge cancels almost everything. The pairing is
//! a valid unit-pivot schedule on the chain complex — each pair splits off an
//! acyclic two-term summand — so homology is preserved exactly.
//!
//! Writing `L(o)` for the canonical edge into `o`, a chain is *paired down*
//! when its first edge is an `L`, *paired up* with `(L(start), chain)` when
//! its start has positive level, and *critical* when it starts at level zero
//! by a non-canonical edge. Eliminating every pair leaves a complex on the
//! critical chains whose boundary has a closed form: faces that are critical
//! survive as themselves, faces beginning with an `L` die, and a face whose
//! start still has positive level retracts onto a single critical chain — the
//! one obtained by fusing its first edge with the canonical edge below it.
//! The retraction has depth one because every face of an extended chain
//! `(L, …)` other than the chain itself again begins with an `L` or starts
//! at level zero; no iteration is ever needed, and no fill-in occurs.
//!
//! The same collapse applies to the homotopy-colimit double complex, run on
//! the base-map chains from their free end (the fiber cell rides along
//! untouched); that version lives in [`hocolim_collapsed_homology`] with its
//! own cell bookkeeping so the two routes stay independently implemented.

use super::{
    locate, nerve_cell_counts, projected_work, rank_and_factors, HocolimShape, HomologyResult,
    Layout, MatrixBudget, ShapeError, DEGENERATE,
};
use crate::fincat::FiniteCategory;
use crate::simplex::{SimplexMap, SimplicialGaloisDatum};
use crate::snf::{AbelianGroup, SparseVec};
use crate::total::TotalCategory;

/// The top-vertex inclusion of level zero into level `m`.
fn top_vertex(m: usize) -> SimplexMap {
    SimplexMap::new(0, m, vec![m])
}

/// Binary search for `key` among lexicographically sorted windows of width
/// `stride`, failing loudly when absent: the collapse only ever looks up
/// cells it has proven critical, so a miss is a logic error.
fn locate_exact(flat: &[u32], stride: usize, key: &[u32]) -> u32 {
    debug_assert_eq!(key.len(), stride);
    let n = flat.len() / stride;
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if flat[mid * stride..(mid + 1) * stride] < *key {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    assert!(
        lo < n && flat[lo * stride..(lo + 1) * stride] == *key,
        "critical cell must be enumerated"
    );
    lo as u32
}

fn homology_from_ranks(
    dims: &[usize],
    ranks: &[usize],
    torsion: &[Vec<i64>],
    max_degree: usize,
) -> Vec<AbelianGroup> {
    (0..=max_degree)
        .map(|d| AbelianGroup {
            free_rank: dims[d] - ranks[d] - ranks[d + 1],
            torsion: torsion[d + 1].clone(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Nerve route
// ---------------------------------------------------------------------------

/// The critical chains of a total category's nerve under the cone pairing,
/// with everything needed to emit their collapsed boundary columns.
struct CollapsedNerve<'a> {
    cat: &'a FiniteCategory,
    level_of: &'a [usize],
    level0: usize,
    /// Canonical edge into each object; `None` at level zero.
    ell_into: Vec<Option<u32>>,
    /// Non-identity edges by source object, ascending.
    out: Vec<Vec<u32>>,
    /// `crit[d]` for `d >= 1`: critical chains flattened with stride `d`,
    /// lexicographic by edge ids.
    crit: Vec<Vec<u32>>,
}

impl<'a> CollapsedNerve<'a> {
    fn classify(total: &'a TotalCategory) -> CollapsedNerve<'a> {
        let cat = &total.underlying;
        let ell_into: Vec<Option<u32>> = (0..cat.n_objects())
            .map(|o| {
                let m = total.level_of[o];
                (m > 0).then(|| {
                    total.cartesian_lift(&top_vertex(m), total.fiber_object_of[o]) as u32
                })
            })
            .collect();
        let mut out = vec![Vec::new(); cat.n_objects()];
        for e in 0..cat.n_morphisms() {
            if !cat.is_identity(e) {
                out[cat.source(e)].push(e as u32);
            }
        }
        CollapsedNerve {
            cat,
            level_of: &total.level_of,
            level0: total.object_start[1] - total.object_start[0],
            ell_into,
            out,
            crit: Vec::new(),
        }
    }

    /// An edge out of level zero that is not a canonical cone edge.
    fn is_critical_start(&self, e: u32) -> bool {
        self.level_of[self.cat.source(e as usize)] == 0
            && self.ell_into[self.cat.target(e as usize)] != Some(e)
    }

    /// Number of critical chains per dimension, without materializing them.
    fn project_counts(&self, cap: usize) -> Vec<u64> {
        let mut counts = vec![self.level0 as u64];
        let mut ending = vec![0u64; self.cat.n_objects()];
        for o in 0..self.cat.n_objects() {
            for &e in &self.out[o] {
                if self.is_critical_start(e) {
                    ending[self.cat.target(e as usize)] += 1;
                }
            }
        }
        for _ in 1..=cap {
            counts.push(ending.iter().sum());
            let mut next = vec![0u64; self.cat.n_objects()];
            for (o, &n) in ending.iter().enumerate() {
                if n > 0 {
                    for &e in &self.out[o] {
                        next[self.cat.target(e as usize)] =
                            next[self.cat.target(e as usize)].saturating_add(n);
                    }
                }
            }
            ending = next;
        }
        counts
    }

    fn enumerate(&mut self, cap: usize) {
        let mut chains: Vec<u32> = Vec::new();
        for o in 0..self.cat.n_objects() {
            for &e in &self.out[o] {
                if self.is_critical_start(e) {
                    chains.push(e);
                }
            }
        }
        chains.sort_unstable();
        self.crit = vec![Vec::new(); cap + 1];
        self.crit[1] = chains;
        for d in 2..=cap {
            let prev = &self.crit[d - 1];
            let mut next = Vec::new();
            for window in prev.chunks_exact(d - 1) {
                let end = self.cat.target(window[d - 2] as usize);
                for &e in &self.out[end] {
                    next.extend_from_slice(window);
                    next.push(e);
                }
            }
            self.crit[d] = next;
        }
    }

    fn n_cells(&self, d: usize) -> usize {
        if d == 0 {
            self.level0
        } else {
            self.crit[d].len() / d.max(1)
        }
    }

    /// Retraction of a vertex onto the critical complex: level-zero objects
    /// are themselves critical, anything higher slides down its cone edge.
    fn retract_vertex(&self, o: usize) -> u32 {
        match self.ell_into[o] {
            None => o as u32,
            Some(l) => self.cat.source(l as usize) as u32,
        }
    }

    /// Retraction of a `(d-1)`-chain (given as edge ids) onto the critical
    /// complex: `None` for chains that die, otherwise the index of the one
    /// critical chain they retract to. The coefficient is always `+1`.
    fn retract_chain(&self, arrows: &mut Vec<u32>, dim: usize) -> Option<u32> {
        let first = arrows[0] as usize;
        let start = self.cat.source(first);
        if self.level_of[start] == 0 {
            if self.ell_into[self.cat.target(first)] == Some(arrows[0]) {
                return None;
            }
            return Some(locate_exact(&self.crit[dim], dim, arrows));
        }
        let ell = self.ell_into[start].expect("positive level has a cone edge") as usize;
        let fused = self.cat.compose(first, ell);
        if self.cat.is_identity(fused) {
            return None;
        }
        if self.ell_into[self.cat.target(fused)] == Some(fused as u32) {
            return None;
        }
        arrows[0] = fused as u32;
        Some(locate_exact(&self.crit[dim], dim, arrows))
    }

    /// Collapsed boundary column of critical chain `idx` in dimension `d`.
    fn column(&self, d: usize, idx: usize) -> SparseVec {
        let chain = &self.crit[d][idx * d..(idx + 1) * d];
        let mut terms: Vec<(u32, i64)> = Vec::with_capacity(d + 2);
        let mut scratch: Vec<u32> = Vec::with_capacity(d.max(1) - 1);
        if d == 1 {
            let e = chain[0] as usize;
            terms.push((self.retract_vertex(self.cat.target(e)), 1));
            terms.push((self.retract_vertex(self.cat.source(e)), -1));
            return SparseVec::from_terms(terms);
        }
        // Face 0 drops the first edge; the rest of the chain retracts.
        scratch.extend_from_slice(&chain[1..]);
        if let Some(row) = self.retract_chain(&mut scratch, d - 1) {
            terms.push((row, 1));
        }
        // Inner faces fuse consecutive edges; fusing at the front keeps the
        // start at level zero, so the face is critical unless it degenerates
        // to a cone edge or an identity.
        for j in 1..d {
            let fused = self.cat.compose(chain[j] as usize, chain[j - 1] as usize);
            if self.cat.is_identity(fused) {
                continue;
            }
            if j == 1 && self.ell_into[self.cat.target(fused)] == Some(fused as u32) {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(&chain[..j - 1]);
            scratch.push(fused as u32);
            scratch.extend_from_slice(&chain[j + 1..]);
            let row = locate_exact(&self.crit[d - 1], d - 1, &scratch);
            terms.push((row, if j % 2 == 0 { 1 } else { -1 }));
        }
        // The last face drops the final edge and is critical outright.
        let row = locate_exact(&self.crit[d - 1], d - 1, &chain[..d - 1]);
        terms.push((row, if d % 2 == 0 { 1 } else { -1 }));
        SparseVec::from_terms(terms)
    }
}

/// Integral homology of the nerve of a total category in degrees
/// `0..=max_degree`, via the cone collapse. Equals [`super::homology`] of
/// the underlying category wherever both are feasible; this route reduces
/// the complex before any matrix is materialized, so it stays cheap on
/// categories whose nerves are far too large to reduce directly.
pub fn total_nerve_homology(
    total: &TotalCategory,
    max_degree: usize,
    budget: &MatrixBudget,
) -> Result<HomologyResult, ShapeError> {
    assert!(max_degree >= 1, "degree cap must be at least 1");
    let cap = max_degree + 1;
    let mut cn = CollapsedNerve::classify(total);
    let counts = cn.project_counts(cap);
    let projected = projected_work(&counts);
    if projected > budget.entries {
        return Err(ShapeError::MatrixBudgetExceeded { projected, budget: budget.entries });
    }
    cn.enumerate(cap);
    let dims: Vec<usize> = (0..=cap).map(|d| cn.n_cells(d)).collect();
    let mut ranks = vec![0usize; cap + 2];
    let mut torsion: Vec<Vec<i64>> = vec![Vec::new(); cap + 2];
    for d in 1..=cap {
        let (r, t) = rank_and_factors(dims[d - 1], dims[d], |sink| {
            for idx in 0..dims[d] {
                sink(cn.column(d, idx));
            }
        });
        ranks[d] = r;
        torsion[d] = t;
    }
    Ok(HomologyResult { degrees: homology_from_ranks(&dims, &ranks, &torsion, max_degree) })
}

// ---------------------------------------------------------------------------
// Homotopy-colimit route
// ---------------------------------------------------------------------------

/// Binomial coefficients with saturation, for counting base maps without
/// materializing them: `Hom([s], [t])` in the simplex category has
/// `C(s + t + 1, s + 1)` monotone maps.
fn saturating_binomials(rows: usize) -> Vec<Vec<u64>> {
    let mut pas: Vec<Vec<u64>> = Vec::with_capacity(rows + 1);
    for r in 0..=rows {
        let mut row = vec![1u64; r + 1];
        for k in 1..r {
            row[k] = pas[r - 1][k - 1].saturating_add(pas[r - 1][k]);
        }
        pas.push(row);
    }
    pas
}

/// Number of critical cells of the homotopy-colimit double complex per
/// total dimension, from counting alone. Tracks chains of non-identity base
/// maps by their level (first target) and tail source, subtracting the
/// chains whose tail is a top-vertex inclusion (those are paired away along
/// with everything they extend).
fn hocolim_critical_counts(datum: &SimplicialGaloisDatum, cap: usize) -> Vec<u64> {
    let n = datum.truncation;
    let pas = saturating_binomials(2 * n + 2);
    let nonid = |s: usize, t: usize| -> u64 {
        let all = pas[s + t + 1][s + 1];
        all - u64::from(s == t)
    };
    let fiber_counts: Vec<Vec<u64>> =
        (0..=n).map(|m| nerve_cell_counts(&datum.fibers[m], cap)).collect();

    // by_tail[p][m][s]: chains of p non-identity maps at level m (first
    // target) whose tail (last map) has source s. A chain is critical when
    // its tail has source 0 and is not a top-vertex inclusion; the excluded
    // chains are the predecessors whose tail source is positive, extended by
    // their unique top-vertex inclusion.
    let mut by_tail: Vec<Vec<Vec<u64>>> = vec![vec![vec![0u64; n + 1]; n + 1]];
    for p in 1..=cap {
        let mut next: Vec<Vec<u64>> = vec![vec![0u64; n + 1]; n + 1];
        if p == 1 {
            for (m, row) in next.iter_mut().enumerate() {
                for (s, slot) in row.iter_mut().enumerate() {
                    *slot = nonid(s, m);
                }
            }
        } else {
            let prev = &by_tail[p - 1];
            for m in 0..=n {
                for s in 0..=n {
                    if prev[m][s] > 0 {
                        for (s2, slot) in next[m].iter_mut().enumerate() {
                            *slot = slot.saturating_add(prev[m][s].saturating_mul(nonid(s2, s)));
                        }
                    }
                }
            }
        }
        by_tail.push(next);
    }
    let crit_chains = |p: usize, m: usize| -> u64 {
        let mut c = by_tail[p][m][0];
        if p == 1 {
            c -= u64::from(m >= 1);
        } else {
            for s in 1..=n {
                c = c.saturating_sub(by_tail[p - 1][m][s]);
            }
        }
        c
    };

    (0..=cap)
        .map(|t| {
            let mut total = fiber_counts[0][t];
            for p in 1..=t {
                for m in 0..=n {
                    total = total
                        .saturating_add(crit_chains(p, m).saturating_mul(fiber_counts[m][t - p]));
                }
            }
            total
        })
        .collect()
}

/// Critical cells of the double complex under the cone pairing, run from the
/// free end of each base-map chain. A `(p, q)` cell is critical when its
/// chain's tail (last map) has source level 0 without being a top-vertex
/// inclusion — or, at `p = 0`, when it sits at level 0. The fiber-nerve cell
/// is inert throughout: pairing appends or drops tail maps, and only the
/// innermost face transports fiber cells.
struct CollapsedHocolim<'a, 'b> {
    hc: &'b HocolimShape<'a>,
    /// Top-vertex inclusion id into each level; `None` at level 0.
    ell_id: Vec<Option<u32>>,
    /// Per base map id: whether it is a top-vertex inclusion.
    is_ell: Vec<bool>,
    /// Per length `p >= 1`: hchain ids of the critical chains, ascending.
    crit_hids: Vec<Vec<u32>>,
}

impl<'a, 'b> CollapsedHocolim<'a, 'b> {
    fn classify(hc: &'b HocolimShape<'a>) -> CollapsedHocolim<'a, 'b> {
        let n = hc.datum.truncation;
        let ell_id: Vec<Option<u32>> =
            (0..=n).map(|j| (j > 0).then(|| hc.delta.locate(&top_vertex(j)))).collect();
        let is_ell: Vec<bool> = hc
            .delta
            .maps
            .iter()
            .map(|m| m.source_level == 0 && m.target_level >= 1 && m.values[0] == m.target_level)
            .collect();
        let cap = hc.hchains.len() - 1;
        let mut crit_hids: Vec<Vec<u32>> = vec![Vec::new()];
        for p in 1..=cap {
            let mut ids = Vec::new();
            for (hid, w) in hc.hchains[p].chunks_exact(p).enumerate() {
                let tail = w[p - 1];
                if hc.delta.map(tail).source_level == 0 && !is_ell[tail as usize] {
                    ids.push(hid as u32);
                }
            }
            crit_hids.push(ids);
        }
        CollapsedHocolim { hc, ell_id, is_ell, crit_hids }
    }

    /// Cell layout of one total dimension of the collapsed complex: block
    /// `p = 0` holds the level-0 fiber cells, block `p >= 1` one run of
    /// fiber cells per critical chain.
    fn layout(&self, t: usize) -> Layout {
        let mut block_off = Vec::with_capacity(t + 2);
        let mut prefix = Vec::with_capacity(t + 1);
        let mut off = 0u64;
        for p in 0..=t {
            block_off.push(off);
            let q = t - p;
            let mut pre;
            if p == 0 {
                pre = vec![0u64, self.hc.nerves[0].n_cells(q) as u64];
            } else {
                let ids = &self.crit_hids[p];
                pre = Vec::with_capacity(ids.len() + 1);
                let mut acc = 0u64;
                for &hid in ids {
                    pre.push(acc);
                    let level = self.hc.hlevels[p][hid as usize] as usize;
                    acc += self.hc.nerves[level].n_cells(q) as u64;
                }
                pre.push(acc);
            }
            off += *pre.last().unwrap();
            prefix.push(pre);
        }
        block_off.push(off);
        Layout { block_off, prefix }
    }

    fn index(&self, lay: &Layout, p: usize, pos: usize, vid: usize) -> u32 {
        let idx = lay.block_off[p] + lay.prefix[p][pos] + vid as u64;
        u32::try_from(idx).expect("cell index fits in 32 bits")
    }

    /// Position of a known-critical chain among the criticals of length `p`.
    fn crit_pos(&self, p: usize, hid: usize) -> usize {
        self.crit_hids[p]
            .binary_search(&(hid as u32))
            .expect("critical cell must be enumerated")
    }

    /// Visits the critical cells of total dimension `t` in layout order.
    fn for_each_cell(&self, t: usize, mut f: impl FnMut(usize, usize, usize)) {
        for p in 0..=t {
            let q = t - p;
            if p == 0 {
                for vid in 0..self.hc.nerves[0].n_cells(q) {
                    f(0, 0, vid);
                }
            } else {
                for (pos, &hid) in self.crit_hids[p].iter().enumerate() {
                    let level = self.hc.hlevels[p][hid as usize] as usize;
                    for vid in 0..self.hc.nerves[level].n_cells(q) {
                        f(p, pos, vid);
                    }
                }
            }
        }
    }

    /// Collapsed boundary column of the critical cell `(p, pos, vid)` of
    /// total dimension `t`, in the layout of dimension `t - 1`. Faces whose
    /// chain keeps its critical tail survive as themselves; dropping the
    /// tail retracts through the cone map below its source; every other
    /// face dies. Signs mirror the uncollapsed total complex.
    fn column(&self, lay_lo: &Layout, t: usize, p: usize, pos: usize, vid: usize) -> SparseVec {
        let hc = self.hc;
        let q = t - p;
        let mut terms: Vec<(u32, i64)> = Vec::with_capacity(t + 3);
        let mut level = 0usize;
        if p >= 1 {
            let hid = self.crit_hids[p][pos] as usize;
            let ch = &hc.hchains[p][hid * p..(hid + 1) * p];
            level = hc.hlevels[p][hid] as usize;
            // Innermost face: drop the first map and transport the fiber
            // cell along it. The tail is untouched, so the face is critical
            // (at p = 1 it lands in the level-0 block outright).
            let sigma1 = ch[0];
            let new_level = hc.delta.map(sigma1).source_level;
            if let Some(nv) = hc.push_vchain(level, new_level, q, vid, &hc.pulls[sigma1 as usize])
            {
                let row = if p == 1 {
                    self.index(lay_lo, 0, 0, nv)
                } else {
                    let nh = locate(&hc.hchains[p - 1], p - 1, &ch[1..]) as usize;
                    self.index(lay_lo, p - 1, self.crit_pos(p - 1, nh), nv)
                };
                terms.push((row, 1));
            }
            // Inner faces fuse consecutive maps; only the fusion at the tail
            // can change criticality, degenerating when the fused tail is a
            // cone map.
            let mut key: Vec<u32> = Vec::with_capacity(p - 1);
            for j in 1..p {
                let comp = hc.delta.compose(ch[j - 1], ch[j]);
                if hc.delta.map(comp).is_identity() {
                    continue;
                }
                if j == p - 1 && self.is_ell[comp as usize] {
                    continue;
                }
                key.clear();
                key.extend_from_slice(&ch[..j - 1]);
                key.push(comp);
                key.extend_from_slice(&ch[j + 1..]);
                let nh = locate(&hc.hchains[p - 1], p - 1, &key) as usize;
                terms.push((
                    self.index(lay_lo, p - 1, self.crit_pos(p - 1, nh), vid),
                    if j % 2 == 0 { 1 } else { -1 },
                ));
            }
            // Dropping the tail leaves a free end at its target; retract.
            let psign: i64 = if p % 2 == 0 { 1 } else { -1 };
            if p == 1 {
                if level == 0 {
                    terms.push((self.index(lay_lo, 0, 0, vid), psign));
                } else {
                    let ell = self.ell_id[level].expect("positive level has a cone map");
                    if let Some(nv) =
                        hc.push_vchain(level, 0, q, vid, &hc.pulls[ell as usize])
                    {
                        terms.push((self.index(lay_lo, 0, 0, nv), psign));
                    }
                }
            } else {
                let tail2 = ch[p - 2];
                if !self.is_ell[tail2 as usize] {
                    let s2 = hc.delta.map(tail2).source_level;
                    if s2 == 0 {
                        let nh = locate(&hc.hchains[p - 1], p - 1, &ch[..p - 1]) as usize;
                        terms.push((
                            self.index(lay_lo, p - 1, self.crit_pos(p - 1, nh), vid),
                            psign,
                        ));
                    } else {
                        let ell = self.ell_id[s2].expect("positive level has a cone map");
                        let comp2 = hc.delta.compose(tail2, ell);
                        if !hc.delta.map(comp2).is_identity() && !self.is_ell[comp2 as usize] {
                            key.clear();
                            key.extend_from_slice(&ch[..p - 2]);
                            key.push(comp2);
                            let nh = locate(&hc.hchains[p - 1], p - 1, &key) as usize;
                            terms.push((
                                self.index(lay_lo, p - 1, self.crit_pos(p - 1, nh), vid),
                                psign,
                            ));
                        }
                    }
                }
            }
        }
        if q >= 1 {
            // Fiber-nerve faces keep the chain, hence stay critical.
            let vsign: i64 = if p % 2 == 0 { 1 } else { -1 };
            for k in 0..=q {
                let f = hc.nerves[level].face(q, vid, k);
                if f != DEGENERATE {
                    terms.push((
                        self.index(lay_lo, p, pos, f as usize),
                        vsign * if k % 2 == 0 { 1 } else { -1 },
                    ));
                }
            }
        }
        SparseVec::from_terms(terms)
    }
}

/// Integral homology of the homotopy colimit of the fiber nerves in degrees
/// `0..=max_degree`, computed on the collapsed double complex. Equal to the
/// homology of the full total complex (see [`super::hocolim_complex`]); the
/// collapse happens before any matrix is materialized, so the budget is
/// checked against the critical cells only.
pub fn hocolim_collapsed_homology(
    datum: &SimplicialGaloisDatum,
    max_degree: usize,
    budget: &MatrixBudget,
) -> Result<HomologyResult, ShapeError> {
    assert!(max_degree >= 1, "degree cap must be at least 1");
    let cap = max_degree + 1;
    let counts = hocolim_critical_counts(datum, cap);
    let projected = projected_work(&counts);
    if projected > budget.entries {
        return Err(ShapeError::MatrixBudgetExceeded { projected, budget: budget.entries });
    }
    let hc = HocolimShape::build(datum, cap);
    let coll = CollapsedHocolim::classify(&hc);
    let layouts: Vec<Layout> = (0..=cap).map(|t| coll.layout(t)).collect();
    let dims: Vec<usize> = layouts.iter().map(|l| l.total() as usize).collect();
    for (t, &d) in dims.iter().enumerate() {
        assert_eq!(d as u64, counts[t], "projected and enumerated cell counts agree");
    }
    let mut ranks = vec![0usize; cap + 2];
    let mut torsion: Vec<Vec<i64>> = vec![Vec::new(); cap + 2];
    for t in 1..=cap {
        let (r, f) = rank_and_factors(dims[t - 1], dims[t], |sink| {
            coll.for_each_cell(t, |p, pos, vid| {
                sink(coll.column(&layouts[t - 1], t, p, pos, vid));
            });
        });
        ranks[t] = r;
        torsion[t] = f;
    }
    Ok(HomologyResult { degrees: homology_from_ranks(&dims, &ranks, &torsion, max_degree) })
}
