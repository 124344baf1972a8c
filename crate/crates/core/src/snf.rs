//! Exact integer linear algebra for chain complexes and group quotients.
//!
//! The entry point is [`ColumnSpace`]: columns of a large integer matrix are
//! streamed in one at a time and reduced against the pivots found so far, so
//! the full matrix never has to be materialized. Afterwards the accumulated
//! lattice yields the rank and the invariant factors (the diagonal of the
//! Smith normal form), which is everything quotient groups `Z^n / L` need.
//!
//! Values are stored as `i64` and combined through `i128`; overflow aborts
//! with a panic rather than returning wrong answers. The inputs handled here
//! (simplicial boundary matrices, relation matrices of small presentations)
//! keep entries tiny in practice.

use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

/// A sparse integer column: sorted `(row, value)` pairs with nonzero values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: Vec<(u32, i64)>,
}

impl SparseVec {
    pub fn zero() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    /// Builds a column from possibly unsorted, possibly repeated terms,
    /// summing duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> SparseVec {
        let mut v: Vec<(u32, i64)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|&(r, _)| r);
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
        for (r, val) in v {
            match out.last_mut() {
                Some(last) if last.0 == r => {
                    last.1 = add(last.1, val);
                }
                _ => out.push((r, val)),
            }
        }
        out.retain(|&(_, val)| val != 0);
        SparseVec { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in sparse vector arithmetic")
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in sparse vector arithmetic")
}

/// `x * u + y * v` as a sorted sparse merge.
fn combine(x: i64, u: &SparseVec, y: i64, v: &SparseVec) -> SparseVec {
    let (xa, ya) = (x as i128, y as i128);
    let mut out = Vec::with_capacity(u.entries.len() + v.entries.len());
    let (mut i, mut j) = (0, 0);
    while i < u.entries.len() || j < v.entries.len() {
        let ru = u.entries.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let rv = v.entries.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        let (row, val) = if ru < rv {
            i += 1;
            (ru, xa * u.entries[i - 1].1 as i128)
        } else if rv < ru {
            j += 1;
            (rv, ya * v.entries[j - 1].1 as i128)
        } else {
            i += 1;
            j += 1;
            (ru, xa * u.entries[i - 1].1 as i128 + ya * v.entries[j - 1].1 as i128)
        };
        if val != 0 {
            out.push((row, narrow(val)));
        }
    }
    SparseVec { entries: out }
}

/// Extended gcd: returns `(g, u, v)` with `u*a + v*b = g`, `g > 0`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (narrow(r0), narrow(s0), narrow(t0))
}

/// Streaming column-space accumulator over the integers.
///
/// Pivot columns are kept in reduced form, keyed by their leading row. Column
/// operations preserve the generated lattice, so the final pivot set has the
/// same rank and invariant factors as the original column family.
#[derive(Debug, Default)]
pub struct ColumnSpace {
    pivots: BTreeMap<u32, SparseVec>,
}

impl ColumnSpace {
    pub fn new() -> ColumnSpace {
        ColumnSpace::default()
    }

    /// Reduces `col` against the stored pivots; returns `true` when it was
    /// independent (the rank grew).
    pub fn insert(&mut self, mut col: SparseVec) -> bool {
        loop {
            let Some(&(lead, b)) = col.entries.first() else {
                return false;
            };
            match self.pivots.entry(lead) {
                Entry::Vacant(e) => {
                    if b < 0 {
                        col = combine(-1, &col, 0, &SparseVec::zero());
                    }
                    e.insert(col);
                    return true;
                }
                Entry::Occupied(mut e) => {
                    let a = e.get().entries[0].1;
                    if b % a == 0 {
                        col = combine(1, &col, -(b / a), e.get());
                    } else {
                        let (g, u, v) = egcd(a, b);
                        let new_pivot = combine(u, e.get(), v, &col);
                        let reduced = combine(a / g, &col, -(b / g), e.get());
                        debug_assert_eq!(new_pivot.entries[0], (lead, g));
                        *e.get_mut() = new_pivot;
                        col = reduced;
                    }
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Invariant factors of the accumulated lattice: `rank()` positive
    /// integers `d_1 | d_2 | ... | d_r`, the nonzero diagonal of the Smith
    /// normal form of any matrix whose columns generate the lattice.
    pub fn invariant_factors(&self) -> Vec<i64> {
        let cols: Vec<&SparseVec> = self.pivots.values().collect();
        if cols.is_empty() {
            return Vec::new();
        }
        // Fast path: a diagonal-like pivot set (each leading row appears in
        // exactly one column and each column is a single entry) is its own
        // Smith form up to ordering.
        if cols.iter().all(|c| c.entries.len() == 1) {
            let mut d: Vec<i64> = cols.iter().map(|c| c.entries[0].1.abs()).collect();
            return fix_divisibility(&mut d);
        }
        sparse_smith(&self.pivots)
    }
}

/// Sorts and repairs a diagonal into a divisibility chain without changing
/// the product structure: repeatedly replaces a violating pair `(a, b)` with
/// `(gcd, lcm)`.
fn fix_divisibility(d: &mut Vec<i64>) -> Vec<i64> {
    d.sort_unstable();
    loop {
        let mut changed = false;
        for i in 0..d.len().saturating_sub(1) {
            let (a, b) = (d[i], d[i + 1]);
            if b % a != 0 {
                let (g, _, _) = egcd(a, b);
                let l = narrow(a as i128 / g as i128 * b as i128);
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            d.sort_unstable();
            return std::mem::take(d);
        }
    }
}

/// Smith invariant factors of a reduced pivot family, by unit-pivot sparse
/// elimination followed by a dense sweep of whatever small block remains.
fn sparse_smith(pivots: &BTreeMap<u32, SparseVec>) -> Vec<i64> {
    // Compact the appearing rows.
    let mut row_ids: BTreeSet<u32> = BTreeSet::new();
    for col in pivots.values() {
        row_ids.extend(col.entries.iter().map(|&(r, _)| r));
    }
    let remap: BTreeMap<u32, u32> =
        row_ids.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    let n_rows = remap.len();
    let mut cols: Vec<BTreeMap<u32, i64>> = pivots
        .values()
        .map(|c| c.entries.iter().map(|&(r, v)| (remap[&r], v)).collect())
        .collect();
    let mut rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n_rows];
    for (ci, col) in cols.iter().enumerate() {
        for (&r, _) in col.iter() {
            rows[r as usize].insert(ci as u32);
        }
    }
    let mut live_cols: BTreeSet<u32> = (0..cols.len() as u32).collect();
    let mut ones = 0usize;

    // Lazily scored heap of unit entries; stale entries are re-validated on
    // pop. Score is the Markowitz fill bound (row degree - 1)(col degree - 1).
    let mut heap: BinaryHeap<(i64, u32, u32)> = BinaryHeap::new();
    let score = |rows: &Vec<BTreeSet<u32>>, cols: &Vec<BTreeMap<u32, i64>>, r: u32, c: u32| {
        -(((rows[r as usize].len() - 1) * (cols[c as usize].len() - 1)) as i64)
    };
    for &c in live_cols.iter() {
        for (&r, &v) in cols[c as usize].iter() {
            if v.abs() == 1 {
                heap.push((score(&rows, &cols, r, c), r, c));
            }
        }
    }

    while let Some((s, r, c)) = heap.pop() {
        if !live_cols.contains(&c) {
            continue;
        }
        let Some(&v) = cols[c as usize].get(&r) else { continue };
        if v.abs() != 1 {
            continue;
        }
        let cur = score(&rows, &cols, r, c);
        if cur < s {
            heap.push((cur, r, c));
            continue;
        }
        // Clear row r using column c (unimodular column operations), then
        // drop both: the row ops that would clear column c only touch column
        // c itself once its row is singleton, so the block splits off a 1.
        let pivot_col: Vec<(u32, i64)> =
            cols[c as usize].iter().map(|(&rr, &vv)| (rr, vv)).collect();
        let others: Vec<u32> = rows[r as usize].iter().copied().filter(|&x| x != c).collect();
        for oc in others {
            let w = cols[oc as usize][&r];
            // col_oc -= w * v * col_c  (v = ±1 so w*v*v = w, leading term cancels)
            let factor = -(w as i128) * (v as i128);
            for &(rr, vv) in &pivot_col {
                let cell = cols[oc as usize].entry(rr).or_insert(0);
                let new = *cell as i128 + factor * vv as i128;
                if new == 0 {
                    cols[oc as usize].remove(&rr);
                    rows[rr as usize].remove(&oc);
                } else {
                    *cell = narrow(new);
                    rows[rr as usize].insert(oc);
                    if new.abs() == 1 {
                        heap.push((score(&rows, &cols, rr, oc), rr, oc));
                    }
                }
            }
        }
        for &(rr, _) in &pivot_col {
            rows[rr as usize].remove(&c);
        }
        live_cols.remove(&c);
        ones += 1;
    }

    // Dense sweep on the remaining block.
    let remaining: Vec<u32> = live_cols.into_iter().collect();
    let mut d: Vec<i64> = vec![1; ones];
    if !remaining.is_empty() {
        let mut live_rows: BTreeSet<u32> = BTreeSet::new();
        for &c in &remaining {
            live_rows.extend(cols[c as usize].keys().copied());
        }
        let rmap: BTreeMap<u32, usize> =
            live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut dense = vec![vec![0i128; remaining.len()]; rmap.len()];
        for (j, &c) in remaining.iter().enumerate() {
            for (&r, &v) in cols[c as usize].iter() {
                dense[rmap[&r]][j] = v as i128;
            }
        }
        d.extend(dense_smith(&mut dense));
    }
    fix_divisibility(&mut d)
}

/// Textbook Smith elimination on a dense matrix; returns the nonzero
/// diagonal (not yet divisibility-sorted).
fn dense_smith(m: &mut Vec<Vec<i128>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut top = 0usize;
    while top < rows.min(cols) {
        // find a nonzero entry of minimal absolute value in the block
        let mut best: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if m[i][j] != 0
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(top, bi);
        for row in m.iter_mut() {
            row.swap(top, bj);
        }
        loop {
            let p = m[top][top];
            let mut clean = true;
            for i in top + 1..rows {
                let q = m[i][top] / p;
                if q != 0 {
                    for j in top..cols {
                        m[i][j] -= q * m[top][j];
                    }
                }
                if m[i][top] != 0 {
                    // remainder smaller than p: swap rows and restart
                    m.swap(top, i);
                    clean = false;
                    break;
                }
            }
            if !clean {
                continue;
            }
            for j in top + 1..cols {
                let q = m[top][j] / p;
                if q != 0 {
                    for i in top..rows {
                        m[i][j] -= q * m[i][top];
                    }
                }
                if m[top][j] != 0 {
                    for row in m.iter_mut() {
                        row.swap(top, j);
                    }
                    clean = false;
                    break;
                }
            }
            if !clean {
                continue;
            }
            // pivot divides everything below-right? if not, fold that column in
            let mut fixed = true;
            'scan: for i in top + 1..rows {
                for j in top + 1..cols {
                    if m[i][j] % p != 0 {
                        for r in top..rows {
                            m[r][top] += m[r][j];
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        out.push(narrow(m[top][top].abs() as i128));
        top += 1;
    }
    out
}

/// Rank and invariant factors of a sparse integer matrix delivered column by
/// column, built for matrices too large for [`ColumnSpace`].
///
/// [`ColumnSpace`] reduces every incoming column against pivots keyed by
/// leading row, so it has no say in pivot order, and structured boundary
/// matrices can fill in catastrophically under that discipline. This routine
/// materializes the matrix once and eliminates unit entries (value ±1) in
/// Markowitz order — smallest `(row degree - 1) * (column degree - 1)`
/// first. A unit entry alone in its row or column scores zero and splits off
/// by pure bookkeeping, without arithmetic on any other entry; on typical
/// boundary matrices elimination stays close to that regime, and the small
/// remainder without unit entries is finished by a dense Smith sweep.
///
/// A matrix much wider than tall is transposed on intake (rank and
/// invariant factors are transpose-invariant). The total merge volume is
/// about the same either way — Schur fill is symmetric — but with few long
/// columns the work lands in fat sequential merges instead of millions of
/// tiny ones, and the per-merge bookkeeping stops dominating.
///
/// Returns `(rank, d)` where `d` lists all `rank` invariant factors
/// `d_1 | d_2 | ... | d_r`, ones included.
pub fn rank_and_invariant_factors(
    n_rows: usize,
    n_cols: usize,
    columns: impl FnOnce(&mut dyn FnMut(SparseVec)),
) -> (usize, Vec<i64>) {
    let transpose = n_cols > n_rows.saturating_mul(2);
    let (height, stored) = if transpose {
        let mut bucket: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n_rows];
        let mut j: u32 = 0;
        columns(&mut |col: SparseVec| {
            for &(r, v) in &col.entries {
                bucket[r as usize].push((j, v));
            }
            j += 1;
        });
        let stored: Vec<SparseVec> =
            bucket.into_iter().map(|entries| SparseVec { entries }).collect();
        (n_cols, stored)
    } else {
        let mut stored: Vec<SparseVec> = Vec::with_capacity(n_cols);
        columns(&mut |col: SparseVec| {
            debug_assert!(col.entries.iter().all(|&(r, _)| (r as usize) < n_rows));
            stored.push(col);
        });
        (n_rows, stored)
    };
    Elimination::new(height, stored).run()
}

/// Working state for [`rank_and_invariant_factors`]: columns as sorted
/// sparse vectors, a static row-to-column index plus per-row overflow lists
/// for fill-in, and a heap holding at most one unit-entry candidate per
/// column, keyed by the Markowitz fill bound of the column's cheapest unit
/// entry.
struct Elimination {
    cols: Vec<SparseVec>,
    row_nnz: Vec<u32>,
    row_ptr: Vec<u32>,
    row_cols: Vec<u32>,
    fill: Vec<Vec<u32>>,
    pending: Vec<bool>,
    /// `(negated Markowitz bound, row, column)`; the max-heap pops the entry
    /// with the cheapest projected fill. Stale tuples are re-validated on
    /// pop.
    heap: BinaryHeap<(i64, u32, u32)>,
    scratch: Vec<(u32, i64)>,
    split: usize,
}

impl Elimination {
    fn new(height: usize, cols: Vec<SparseVec>) -> Elimination {
        let mut row_nnz = vec![0u32; height];
        let mut total = 0usize;
        for c in &cols {
            for &(r, _) in &c.entries {
                row_nnz[r as usize] += 1;
                total += 1;
            }
        }
        assert!(u32::try_from(total).is_ok(), "matrix too large for the row index");
        let mut row_ptr = vec![0u32; height + 1];
        for (r, &n) in row_nnz.iter().enumerate() {
            row_ptr[r + 1] = row_ptr[r] + n;
        }
        let mut cursor = row_ptr.clone();
        let mut row_cols = vec![0u32; total];
        for (j, c) in cols.iter().enumerate() {
            for &(r, _) in &c.entries {
                row_cols[cursor[r as usize] as usize] = j as u32;
                cursor[r as usize] += 1;
            }
        }
        let mut e = Elimination {
            pending: vec![false; cols.len()],
            cols,
            row_nnz,
            row_ptr,
            row_cols,
            fill: vec![Vec::new(); height],
            heap: BinaryHeap::new(),
            scratch: Vec::new(),
            split: 0,
        };
        for c in 0..e.cols.len() {
            e.enqueue(c as u32);
        }
        e
    }

    /// Negated Markowitz bound on the fill of eliminating entry `(r, c)`:
    /// zero means the split is free of arithmetic.
    fn score(&self, r: u32, c: u32) -> i64 {
        -((self.row_nnz[r as usize] as i64 - 1)
            * (self.cols[c as usize].entries.len() as i64 - 1))
    }

    /// Cheapest unit entry of column `c` under the current degrees, ties
    /// broken by the first row in storage order.
    fn best_unit(&self, c: u32) -> Option<(i64, u32, i64)> {
        let mut best: Option<(i64, u32, i64)> = None;
        for &(r, v) in &self.cols[c as usize].entries {
            if v == 1 || v == -1 {
                let s = self.score(r, c);
                if best.map_or(true, |(bs, _, _)| s > bs) {
                    best = Some((s, r, v));
                }
            }
        }
        best
    }

    /// Queues the cheapest unit entry of column `c` unless the column
    /// already has a tuple in the heap.
    fn enqueue(&mut self, c: u32) {
        if self.pending[c as usize] {
            return;
        }
        if let Some((s, r, _)) = self.best_unit(c) {
            self.heap.push((s, r, c));
            self.pending[c as usize] = true;
        }
    }

    fn run(mut self) -> (usize, Vec<i64>) {
        while let Some((s, _, c)) = self.heap.pop() {
            self.pending[c as usize] = false;
            // Degrees drift while tuples wait in the heap, so the column is
            // rescanned and its current cheapest unit entry is used; a free
            // split elsewhere in the column must not be passed over for a
            // fill-producing pivot that was queued earlier.
            let Some((cur, r, v)) = self.best_unit(c) else { continue };
            if cur < s {
                self.heap.push((cur, r, c));
                self.pending[c as usize] = true;
                continue;
            }
            self.eliminate(r, c, v);
        }
        self.finish()
    }

    /// Splits off the unit pivot at `(r, c)`: unimodular column operations
    /// clear row `r` from every other column, after which the row operations
    /// that would clear column `c` touch nothing outside it, so the pivot
    /// leaves as a direct summand contributing an invariant factor of one.
    fn eliminate(&mut self, r: u32, c: u32, v: i64) {
        let pivot = std::mem::take(&mut self.cols[c as usize]).entries;
        for &(rr, _) in &pivot {
            self.row_nnz[rr as usize] -= 1;
        }
        let lo = self.row_ptr[r as usize] as usize;
        let hi = self.row_ptr[r as usize + 1] as usize;
        let mut cands: Vec<u32> = Vec::with_capacity(hi - lo + 4);
        cands.extend_from_slice(&self.row_cols[lo..hi]);
        cands.extend_from_slice(&self.fill[r as usize]);
        for c2 in cands {
            if c2 == c {
                continue;
            }
            let w = {
                let e = &self.cols[c2 as usize].entries;
                match e.binary_search_by_key(&r, |x| x.0) {
                    Ok(i) => e[i].1,
                    Err(_) => continue,
                }
            };
            let hint = self.subtract(c2, narrow(w as i128 * v as i128), &pivot);
            self.enqueue_hint(c2, hint);
        }
        debug_assert_eq!(self.row_nnz[r as usize], 0);
        self.split += 1;
    }

    /// `column dst -= factor * pivot` as a sorted merge into a reused
    /// scratch buffer, keeping the row counts and the fill-in index in step
    /// with created and cancelled entries. Returns the unit entry of the
    /// result with the smallest row degree, so the caller can queue the
    /// column without scanning it a second time.
    fn subtract(
        &mut self,
        dst: u32,
        factor: i64,
        pivot: &[(u32, i64)],
    ) -> Option<(u32, u32)> {
        let Elimination { cols, scratch, row_nnz, fill, .. } = self;
        let f = factor as i128;
        scratch.clear();
        let old = &cols[dst as usize].entries;
        scratch.reserve(old.len() + pivot.len());
        let mut best: Option<(u32, u32)> = None;
        let mut note = |nnz: u32, row: u32| {
            if best.map_or(true, |(bn, _)| nnz < bn) {
                best = Some((nnz, row));
            }
        };
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot.len() {
            let ro = old.get(i).map(|e| e.0).unwrap_or(u32::MAX);
            let rp = pivot.get(j).map(|e| e.0).unwrap_or(u32::MAX);
            if ro < rp {
                let (row, val) = old[i];
                if val == 1 || val == -1 {
                    note(row_nnz[row as usize], row);
                }
                scratch.push(old[i]);
                i += 1;
            } else if rp < ro {
                let val = narrow(-f * pivot[j].1 as i128);
                row_nnz[rp as usize] += 1;
                if val == 1 || val == -1 {
                    note(row_nnz[rp as usize], rp);
                }
                scratch.push((rp, val));
                fill[rp as usize].push(dst);
                j += 1;
            } else {
                let val = old[i].1 as i128 - f * pivot[j].1 as i128;
                if val == 0 {
                    row_nnz[ro as usize] -= 1;
                } else {
                    if val == 1 || val == -1 {
                        note(row_nnz[ro as usize], ro);
                    }
                    scratch.push((ro, narrow(val)));
                }
                i += 1;
                j += 1;
            }
        }
        std::mem::swap(&mut cols[dst as usize].entries, scratch);
        best
    }

    /// Queues column `c` using the best-unit hint its last merge reported,
    /// skipping the rescan [`Elimination::enqueue`] would do. The hint may
    /// be slightly stale by pop time; the pop-side rescan is what keeps
    /// pivot choices sound.
    fn enqueue_hint(&mut self, c: u32, hint: Option<(u32, u32)>) {
        if self.pending[c as usize] {
            return;
        }
        let Some((nnz, r)) = hint else { return };
        let len = self.cols[c as usize].entries.len();
        let s = -((nnz as i64 - 1) * (len as i64 - 1));
        self.heap.push((s, r, c));
        self.pending[c as usize] = true;
    }

    /// Finishes the block that survived with no unit entries anywhere.
    fn finish(self) -> (usize, Vec<i64>) {
        let live: Vec<&SparseVec> =
            self.cols.iter().filter(|c| !c.entries.is_empty()).collect();
        let mut d = vec![1i64; self.split];
        if !live.is_empty() {
            let mut rows: BTreeSet<u32> = BTreeSet::new();
            for c in &live {
                rows.extend(c.entries.iter().map(|e| e.0));
            }
            // Every surviving value has magnitude at least two, and the
            // block carries exactly the torsion content, so it is expected
            // to be tiny; stream it instead if it is somehow large.
            if rows.len().saturating_mul(live.len()) <= 1 << 18 {
                let rmap: BTreeMap<u32, usize> =
                    rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
                let mut dense = vec![vec![0i128; live.len()]; rmap.len()];
                for (j, c) in live.iter().enumerate() {
                    for &(r, v) in &c.entries {
                        dense[rmap[&r]][j] = v as i128;
                    }
                }
                d.extend(dense_smith(&mut dense));
            } else {
                let mut cs = ColumnSpace::new();
                for c in live {
                    cs.insert(c.clone());
                }
                d.extend(cs.invariant_factors());
            }
        }
        let rank = d.len();
        (rank, fix_divisibility(&mut d))
    }
}

/// A finitely generated abelian group in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Orders of the finite cyclic factors: each at least 2, each dividing
    /// the next.
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `Z^n` modulo the lattice generated by the given relation columns.
    pub fn quotient(n: usize, relations: impl IntoIterator<Item = SparseVec>) -> AbelianGroup {
        let mut space = ColumnSpace::new();
        for r in relations {
            debug_assert!(r.entries.iter().all(|&(row, _)| (row as usize) < n));
            space.insert(r);
        }
        AbelianGroup::from_column_space(n, &space)
    }

    pub fn from_column_space(n: usize, space: &ColumnSpace) -> AbelianGroup {
        let rank = space.rank();
        assert!(rank <= n, "relation lattice larger than ambient rank");
        let torsion: Vec<i64> =
            space.invariant_factors().into_iter().filter(|&d| d > 1).collect();
        AbelianGroup { free_rank: n - rank, torsion }
    }

    /// Total order when finite, `None` otherwise.
    pub fn order(&self) -> Option<i64> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o: i128 = 1;
        for &t in &self.torsion {
            o *= t as i128;
        }
        Some(narrow(o))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for &t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
