//! Exhaustive classification of set-valued functors on a finite category.
//!
//! The search fixes value sets to canonical initial segments `{0..s-1}`,
//! enumerates size assignments compatible with the constraints, and then
//! backtracks over image tables with constraint propagation: whenever two
//! sides of a composable pair are known the third is derived (directly, or by
//! cancelling a known bijection), and contradictions prune the branch.
//!
//! Two structural reductions keep the search proportional to genuine
//! symmetry rather than raw functor counts:
//!
//! * edges required to become bijections force equal sizes on their
//!   endpoints, so sizes are enumerated per connected class of the
//!   "must-invert" graph rather than per object;
//! * a spanning forest of that graph is gauge-fixed to identity tables.
//!   Every functor is naturally isomorphic to one of that shape (transport
//!   the values along the forest), so restricting the search loses no
//!   isomorphism class while removing a factorial amount of relabeling
//!   freedom.
//!
//! Raw results are deduplicated up to natural isomorphism afterwards. The
//! root of the search (the size assignments) is partitioned across worker
//! threads; results are merged and sorted, so the output order is canonical
//! and independent of scheduling.

use super::ExodromyError;
use crate::fincat::FiniteCategory;
use crate::setfun::{dedup_iso_classes, permutations, SetFunctor};
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Node budget for the backtracking search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 10_000_000 }
    }
}

/// Classifies all functors from `c` to finite sets with every value set of
/// size at most `k` and every morphism with `invert[m]` sent to a bijection,
/// up to natural isomorphism. The empty functor is included. Output is
/// sorted, so two runs produce identical lists.
pub fn enumerate_sheaves(
    c: &FiniteCategory,
    k: usize,
    invert: &[bool],
    budget: &SearchBudget,
) -> Result<Vec<SetFunctor>, ExodromyError> {
    assert_eq!(
        invert.len(),
        c.n_morphisms(),
        "one invert flag per morphism"
    );
    let n_obj = c.n_objects();
    let n_mor = c.n_morphisms();

    // Union the endpoints of every must-invert edge; sizes are constant on
    // the resulting classes, and the joining edges form the gauge forest.
    let mut parent: Vec<usize> = (0..n_obj).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut forest: Vec<bool> = vec![false; n_mor];
    for m in 0..n_mor {
        if !invert[m] || c.is_identity(m) {
            continue;
        }
        let (a, b) = (find(&mut parent, c.source(m)), find(&mut parent, c.target(m)));
        if a != b {
            parent[a] = b;
            forest[m] = true;
        }
    }
    let mut class_of = vec![0usize; n_obj];
    let mut class_reps: Vec<usize> = Vec::new();
    for o in 0..n_obj {
        let r = find(&mut parent, o);
        if r == o {
            class_of[o] = class_reps.len();
            class_reps.push(o);
        }
    }
    for o in 0..n_obj {
        class_of[o] = class_of[find(&mut parent, o)];
    }
    let n_class = class_reps.len();

    // A function into an empty set exists only from an empty set, so a
    // morphism whose target class is empty forces its source class empty.
    let mut implications: Vec<(usize, usize)> = (0..n_mor)
        .map(|m| (class_of[c.source(m)], class_of[c.target(m)]))
        .filter(|&(a, b)| a != b)
        .collect();
    implications.sort_unstable();
    implications.dedup();

    // Composable pairs, bucketed by participating morphism so propagation
    // touches only the pairs a new assignment can affect.
    let mut out_list: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
    for m in 0..n_mor {
        out_list[c.source(m)].push(m as u32);
    }
    let mut pairs: Vec<(u32, u32, u32)> = Vec::new();
    for o in 0..n_obj {
        for &g in &out_list[o] {
            for &f in c.into_object(o) {
                let gf = c.compose(g as usize, f as usize) as u32;
                pairs.push((g, f, gf));
            }
        }
    }
    let mut pairs_of: Vec<Vec<u32>> = vec![Vec::new(); n_mor];
    for (pi, &(g, f, gf)) in pairs.iter().enumerate() {
        let pi = pi as u32;
        pairs_of[g as usize].push(pi);
        if f != g {
            pairs_of[f as usize].push(pi);
        }
        if gf != g && gf != f {
            pairs_of[gf as usize].push(pi);
        }
    }

    // Static branch order: morphisms that are not composites of two
    // non-identities first, so choices propagate as far as possible.
    let mut decomposable = vec![false; n_mor];
    for &(g, f, gf) in &pairs {
        if !c.is_identity(g as usize) && !c.is_identity(f as usize) {
            decomposable[gf as usize] = true;
        }
    }
    let mut branch_order: Vec<u32> = (0..n_mor as u32).collect();
    branch_order.sort_by_key(|&m| (decomposable[m as usize], m));

    // All size assignments per class, in lexicographic order.
    let mut size_vectors: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; n_class];
    'outer: loop {
        if implications
            .iter()
            .all(|&(a, b)| !(cur[a] > 0 && cur[b] == 0))
        {
            size_vectors.push(cur.clone());
        }
        for i in (0..n_class).rev() {
            if cur[i] < k {
                cur[i] += 1;
                cur[i + 1..].fill(0);
                continue 'outer;
            }
        }
        break;
    }
    if n_class == 0 {
        size_vectors = vec![Vec::new()];
    }

    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let shared = SearchShared {
        c,
        invert,
        forest: &forest,
        pairs: &pairs,
        pairs_of: &pairs_of,
        branch_order: &branch_order,
        nodes: &nodes,
        exhausted: &exhausted,
        budget: budget.nodes,
    };

    let per_vector: Vec<Vec<SetFunctor>> = size_vectors
        .par_iter()
        .map(|vector| {
            let sizes: Vec<usize> = (0..n_obj).map(|o| vector[class_of[o]]).collect();
            shared.search(sizes)
        })
        .collect();

    if exhausted.load(Ordering::Relaxed) {
        return Err(ExodromyError::SearchBudgetExceeded {
            explored: nodes.load(Ordering::Relaxed),
            budget: budget.nodes,
        });
    }
    let raw: Vec<SetFunctor> = per_vector.into_iter().flatten().collect();
    Ok(dedup_iso_classes(c, raw))
}

struct SearchShared<'a> {
    c: &'a FiniteCategory,
    invert: &'a [bool],
    forest: &'a [bool],
    pairs: &'a [(u32, u32, u32)],
    pairs_of: &'a [Vec<u32>],
    branch_order: &'a [u32],
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
    budget: u64,
}

struct SearchState<'a, 'b> {
    shared: &'b SearchShared<'a>,
    sizes: Vec<usize>,
    images: Vec<Option<Vec<usize>>>,
    trail: Vec<u32>,
    out: Vec<SetFunctor>,
}

fn is_permutation(t: &[usize], codomain: usize) -> bool {
    if t.len() != codomain {
        return false;
    }
    let mut seen = vec![false; codomain];
    for &y in t {
        if seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

fn invert_table(t: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; t.len()];
    for (x, &y) in t.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// All functions `{0..dom} -> {0..cod}` in lexicographic table order.
fn all_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    if dom == 0 {
        return vec![Vec::new()];
    }
    if cod == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = vec![0usize; dom];
    loop {
        out.push(t.clone());
        let mut i = dom;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if t[i] + 1 < cod {
                t[i] += 1;
                t[i + 1..].fill(0);
                break;
            }
        }
    }
}

impl<'a> SearchShared<'a> {
    fn search(&self, sizes: Vec<usize>) -> Vec<SetFunctor> {
        let mut state = SearchState {
            shared: self,
            sizes,
            images: vec![None; self.c.n_morphisms()],
            trail: Vec::new(),
            out: Vec::new(),
        };
        // Seed: identities, empty-domain tables, and the gauge forest.
        let mut ok = true;
        for o in 0..self.c.n_objects() {
            let id = self.c.identity(o);
            ok = ok && state.assign(id, (0..state.sizes[o]).collect());
        }
        for m in 0..self.c.n_morphisms() {
            if !ok {
                break;
            }
            if state.images[m].is_none() && state.sizes[self.c.source(m)] == 0 {
                ok = state.assign(m, Vec::new());
            }
            if ok && state.images[m].is_none() && self.forest[m] {
                let s = state.sizes[self.c.source(m)];
                ok = state.assign(m, (0..s).collect());
            }
        }
        if ok {
            state.dfs();
        }
        state.out
    }
}

impl SearchState<'_, '_> {
    /// Sets the image of a morphism and closes under composition; returns
    /// false on any contradiction. All effects are recorded on the trail.
    fn assign(&mut self, m0: usize, t0: Vec<usize>) -> bool {
        let mut queue: Vec<(usize, Vec<usize>)> = vec![(m0, t0)];
        while let Some((m, t)) = queue.pop() {
            if let Some(existing) = &self.images[m] {
                if *existing != t {
                    return false;
                }
                continue;
            }
            let codomain = self.sizes[self.shared.c.target(m)];
            if self.shared.invert[m] && !is_permutation(&t, codomain) {
                return false;
            }
            self.images[m] = Some(t);
            self.trail.push(m as u32);
            for &pi in &self.shared.pairs_of[m] {
                let (g, f, gf) = self.shared.pairs[pi as usize];
                let (g, f, gf) = (g as usize, f as usize, gf as usize);
                let kg = self.images[g].is_some();
                let kf = self.images[f].is_some();
                let kgf = self.images[gf].is_some();
                if kg && kf {
                    let tg = self.images[g].as_ref().unwrap();
                    let tf = self.images[f].as_ref().unwrap();
                    let comp: Vec<usize> = tf.iter().map(|&x| tg[x]).collect();
                    match &self.images[gf] {
                        Some(existing) => {
                            if *existing != comp {
                                return false;
                            }
                        }
                        None => queue.push((gf, comp)),
                    }
                } else if kgf && kg && !kf {
                    let tg = self.images[g].as_ref().unwrap();
                    if is_permutation(tg, self.sizes[self.shared.c.target(g)]) {
                        let inv = invert_table(tg);
                        let tgf = self.images[gf].as_ref().unwrap();
                        let derived: Vec<usize> = tgf.iter().map(|&x| inv[x]).collect();
                        queue.push((f, derived));
                    }
                } else if kgf && kf && !kg {
                    let tf = self.images[f].as_ref().unwrap();
                    if is_permutation(tf, self.sizes[self.shared.c.target(f)]) {
                        let inv = invert_table(tf);
                        let tgf = self.images[gf].as_ref().unwrap();
                        let mut derived = vec![0usize; self.sizes[self.shared.c.target(f)]];
                        for y in 0..derived.len() {
                            derived[y] = tgf[inv[y]];
                        }
                        queue.push((g, derived));
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        for m in self.trail.drain(mark..) {
            self.images[m as usize] = None;
        }
    }

    fn dfs(&mut self) {
        if self.shared.exhausted.load(Ordering::Relaxed) {
            return;
        }
        let next = self
            .shared
            .branch_order
            .iter()
            .map(|&m| m as usize)
            .find(|&m| self.images[m].is_none());
        let m = match next {
            None => {
                let images: Vec<Vec<usize>> =
                    self.images.iter().map(|t| t.clone().unwrap()).collect();
                self.out.push(SetFunctor {
                    sizes: self.sizes.clone(),
                    images,
                });
                return;
            }
            Some(m) => m,
        };
        let dom = self.sizes[self.shared.c.source(m)];
        let cod = self.sizes[self.shared.c.target(m)];
        let candidates: Vec<Vec<usize>> = if self.shared.invert[m] {
            debug_assert_eq!(dom, cod);
            permutations(dom)
        } else {
            all_tables(dom, cod)
        };
        self.try_candidates(m, candidates);
    }

    fn try_candidates(&mut self, m: usize, candidates: Vec<Vec<usize>>) {
        for t in candidates {
            let spent = self.shared.nodes.fetch_add(1, Ordering::Relaxed);
            if spent >= self.shared.budget {
                self.shared.exhausted.store(true, Ordering::Relaxed);
                return;
            }
            let mark = self.trail.len();
            if self.assign(m, t) {
                self.dfs();
            }
            self.undo_to(mark);
            if self.shared.exhausted.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}
