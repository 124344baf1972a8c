//! Integral group homology via the inhomogeneous bar resolution.
//!
//! This is a deliberately self-contained oracle: it never touches nerves,
//! total categories, or double complexes, so classifying-space homology
//! computed elsewhere in the crate can be checked against an independent
//! derivation. Only the multiplication table of the group and exact
//! integer linear algebra enter.

use crate::simplex::FiniteGroup;
use crate::snf::{AbelianGroup, ColumnSpace, SparseVec};

/// `H_k(G; Z)` for `k = 0..=cap`, from the unnormalized bar complex
/// `C_k = Z[G^k]` with
///
/// ```text
/// ∂[g_1|…|g_k] = [g_2|…|g_k]
///             + Σ_{i=1}^{k-1} (−1)^i [g_1|…|g_i·g_{i+1}|…|g_k]
///             + (−1)^k [g_1|…|g_{k-1}]
/// ```
pub fn bar_homology(group: &FiniteGroup, cap: usize) -> Vec<AbelianGroup> {
    let og = group.order();
    let dim = |k: usize| og.checked_pow(k as u32).expect("bar complex dimension overflow");
    // Rank and invariant factors of ∂_k for k = 1..=cap+1.
    let mut ranks = vec![0usize; cap + 2];
    let mut torsion: Vec<Vec<i64>> = vec![Vec::new(); cap + 2];
    for k in 1..=cap + 1 {
        let mut cs = ColumnSpace::new();
        let mut tuple = vec![0usize; k];
        for idx in 0..dim(k) {
            decode(idx, og, &mut tuple);
            cs.insert(boundary_column(group, &tuple));
        }
        ranks[k] = cs.rank();
        torsion[k] = cs.invariant_factors().into_iter().filter(|&d| d > 1).collect();
    }
    (0..=cap)
        .map(|k| AbelianGroup {
            free_rank: dim(k) - ranks[k] - ranks[k + 1],
            torsion: torsion[k + 1].clone(),
        })
        .collect()
}

/// Big-endian digits of `idx` in base `og`.
fn decode(mut idx: usize, og: usize, tuple: &mut [usize]) {
    for slot in tuple.iter_mut().rev() {
        *slot = idx % og;
        idx /= og;
    }
}

fn encode(og: usize, tuple: &[usize]) -> u32 {
    let mut idx = 0usize;
    for &g in tuple {
        idx = idx * og + g;
    }
    u32::try_from(idx).expect("bar complex index exceeds row width")
}

fn boundary_column(group: &FiniteGroup, tuple: &[usize]) -> SparseVec {
    let og = group.order();
    let k = tuple.len();
    let mut terms: Vec<(u32, i64)> = Vec::with_capacity(k + 1);
    let mut face = vec![0usize; k - 1];
    // Drop the first entry.
    face.copy_from_slice(&tuple[1..]);
    terms.push((encode(og, &face), 1));
    // Multiply adjacent entries.
    for i in 1..k {
        face[..i - 1].copy_from_slice(&tuple[..i - 1]);
        face[i - 1] = group.mul[tuple[i - 1]][tuple[i]];
        face[i..].copy_from_slice(&tuple[i + 1..]);
        terms.push((encode(og, &face), if i % 2 == 0 { 1 } else { -1 }));
    }
    // Drop the last entry.
    face.copy_from_slice(&tuple[..k - 1]);
    terms.push((encode(og, &face), if k % 2 == 0 { 1 } else { -1 }));
    SparseVec::from_terms(terms)
}
