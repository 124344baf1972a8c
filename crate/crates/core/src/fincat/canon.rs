//! Canonical relabeling of a finite category.
//!
//! Two categories get identical encodings exactly when they are isomorphic,
//! so the encoding doubles as a deduplication key. Object labels and then
//! morphism labels are refined by iterated invariants (hom-set degrees, then
//! composition profiles); only the residual symmetry classes are searched
//! exhaustively, so the cost is factorial only in the size of classes that
//! genuine automorphisms leave indistinguishable.

use super::FiniteCategory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// position -> original object
    pub object_order: Vec<usize>,
    /// position -> original morphism
    pub morphism_order: Vec<usize>,
    /// Relabeled tables, fixed-width little-endian words; equal bytes iff
    /// isomorphic categories.
    pub bytes: Vec<u8>,
}

pub fn canonical_form(c: &FiniteCategory) -> CanonicalForm {
    let n = c.n_objects();
    let colors = refine_object_colors(c);
    let n_colors = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_colors];
    for o in 0..n {
        classes[colors[o]].push(o);
    }

    let mut best: Option<CanonicalForm> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for_each_class_order(&classes, 0, &mut order, &mut |order| {
        try_object_order(c, order, &mut best);
    });
    best.unwrap_or(CanonicalForm {
        object_order: Vec::new(),
        morphism_order: Vec::new(),
        bytes: encode_header(0, 0),
    })
}

fn refine_object_colors(c: &FiniteCategory) -> Vec<usize> {
    let n = c.n_objects();
    let mut colors = vec![0usize; n];
    loop {
        let mut keys: Vec<(Vec<u64>, usize)> = Vec::with_capacity(n);
        for a in 0..n {
            let mut key: Vec<u64> = vec![colors[a] as u64, c.hom(a, a).len() as u64];
            let mut profile: Vec<[u64; 3]> = (0..n)
                .filter(|&b| b != a)
                .map(|b| {
                    [
                        colors[b] as u64,
                        c.hom(a, b).len() as u64,
                        c.hom(b, a).len() as u64,
                    ]
                })
                .collect();
            profile.sort_unstable();
            for p in profile {
                key.extend_from_slice(&p);
            }
            keys.push((key, a));
        }
        let next = rank_keys(keys, n);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

/// Assigns dense ranks to keyed items; equal keys share a rank.
fn rank_keys(mut keys: Vec<(Vec<u64>, usize)>, n: usize) -> Vec<usize> {
    keys.sort();
    let mut out = vec![0usize; n];
    let mut rank = 0;
    for i in 0..keys.len() {
        if i > 0 && keys[i].0 != keys[i - 1].0 {
            rank += 1;
        }
        out[keys[i].1] = rank;
    }
    out
}

/// Runs `f` on every ordering that lists each class contiguously in class
/// order, permuting freely inside classes.
fn for_each_class_order(
    classes: &[Vec<usize>],
    class_idx: usize,
    order: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if class_idx == classes.len() {
        f(order);
        return;
    }
    let class = &classes[class_idx];
    let mut used = vec![false; class.len()];
    fn rec(
        classes: &[Vec<usize>],
        class_idx: usize,
        class: &[usize],
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if used.iter().all(|&u| u) {
            for_each_class_order(classes, class_idx + 1, order, f);
            return;
        }
        for i in 0..class.len() {
            if !used[i] {
                used[i] = true;
                order.push(class[i]);
                rec(classes, class_idx, class, used, order, f);
                order.pop();
                used[i] = false;
            }
        }
    }
    rec(classes, class_idx, class, &mut used, order, f);
}

/// Morphism colors under a fixed object relabeling: start from relabeled
/// endpoints and the identity flag, then refine by left and right
/// composition profiles until stable.
fn refine_morphism_colors(c: &FiniteCategory, obj_new: &[usize]) -> Vec<usize> {
    let n_mor = c.n_morphisms();
    let mut outs: Vec<Vec<u32>> = vec![Vec::new(); c.n_objects()];
    for m in 0..n_mor {
        outs[c.source(m)].push(m as u32);
    }
    let initial: Vec<(Vec<u64>, usize)> = (0..n_mor)
        .map(|m| {
            let key = vec![
                obj_new[c.source(m)] as u64,
                obj_new[c.target(m)] as u64,
                u64::from(!c.is_identity(m)),
            ];
            (key, m)
        })
        .collect();
    let mut colors = rank_keys(initial, n_mor);
    loop {
        let mut keys: Vec<(Vec<u64>, usize)> = Vec::with_capacity(n_mor);
        for f in 0..n_mor {
            let mut key: Vec<u64> = vec![colors[f] as u64];
            // composites with morphisms leaving the target of f
            let mut left: Vec<[u64; 2]> = outs[c.target(f)]
                .iter()
                .map(|&g| {
                    let gf = c.compose(g as usize, f);
                    [colors[g as usize] as u64, colors[gf] as u64]
                })
                .collect();
            left.sort_unstable();
            key.push(u64::MAX); // separator
            for p in left {
                key.extend_from_slice(&p);
            }
            // composites with morphisms entering the source of f
            let mut right: Vec<[u64; 2]> = c
                .into_object(c.source(f))
                .iter()
                .map(|&h| {
                    let fh = c.compose(f, h as usize);
                    [colors[h as usize] as u64, colors[fh] as u64]
                })
                .collect();
            right.sort_unstable();
            key.push(u64::MAX);
            for p in right {
                key.extend_from_slice(&p);
            }
            keys.push((key, f));
        }
        let next = rank_keys(keys, n_mor);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn try_object_order(c: &FiniteCategory, order: &[usize], best: &mut Option<CanonicalForm>) {
    let n = c.n_objects();
    let mut obj_new = vec![0usize; n];
    for (pos, &o) in order.iter().enumerate() {
        obj_new[o] = pos;
    }
    let colors = refine_morphism_colors(c, &obj_new);
    let n_colors = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_colors];
    for m in 0..c.n_morphisms() {
        classes[colors[m]].push(m);
    }
    let mut mor_order: Vec<usize> = Vec::with_capacity(c.n_morphisms());
    for_each_class_order(&classes, 0, &mut mor_order, &mut |mor_order| {
        finish(c, order, &obj_new, mor_order, best);
    });
}

fn finish(
    c: &FiniteCategory,
    order: &[usize],
    obj_new: &[usize],
    mor_order: &[usize],
    best: &mut Option<CanonicalForm>,
) {
    let n_mor = c.n_morphisms();
    let mut mor_new = vec![0usize; n_mor];
    for (pos, &m) in mor_order.iter().enumerate() {
        mor_new[m] = pos;
    }
    let mut bytes = encode_header(c.n_objects(), n_mor);
    for &m in mor_order {
        push32(&mut bytes, obj_new[c.source(m)]);
        push32(&mut bytes, obj_new[c.target(m)]);
    }
    for &o in order {
        push32(&mut bytes, mor_new[c.identity(o)]);
    }
    for &g in mor_order {
        for &f in mor_order {
            if c.composable(g, f) {
                push32(&mut bytes, mor_new[c.compose(g, f)]);
            }
        }
    }
    let better = match best {
        None => true,
        Some(b) => bytes < b.bytes,
    };
    if better {
        *best = Some(CanonicalForm {
            object_order: order.to_vec(),
            morphism_order: mor_order.to_vec(),
            bytes,
        });
    }
}

fn encode_header(objects: usize, morphisms: usize) -> Vec<u8> {
    let mut bytes = Vec::new();
    push32(&mut bytes, objects);
    push32(&mut bytes, morphisms);
    bytes
}

fn push32(bytes: &mut Vec<u8>, v: usize) {
    bytes.extend_from_slice(&(v as u32).to_le_bytes());
}
