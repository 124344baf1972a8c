//! Fundamental groupoids of finite categories, by presentation.
//!
//! Inverting every morphism of a finite category yields a groupoid whose
//! components are the connected components of the underlying graph. Per
//! component this module produces a group presentation — one generator per
//! non-tree morphism of a spanning tree, one relator per composable pair —
//! then simplifies it (length-one relators delete generators, length-two
//! relators merge them through a sign-tracking union-find) and determines
//! the group order by coset enumeration. Orders are capped: these are
//! desk-scale computations, and anything past the cap reports
//! [`ExodromyError::OrderTooLarge`] rather than grinding.

use super::ExodromyError;
use crate::fincat::FiniteCategory;
use crate::simplex::FiniteGroup;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// Largest component group order the enumeration will report.
pub const MAX_GROUP_ORDER: usize = 24;
/// Hard cap on simultaneously live cosets during enumeration.
const MAX_COSETS: usize = 100_000;

/// Presentation of one connected component of a localized category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPresentation {
    /// Smallest object id in the component.
    pub representative: usize,
    /// Morphism ids naming the surviving generators.
    pub generators: Vec<usize>,
    /// Relator words; letter `±(i+1)` is generator `i` or its inverse.
    pub relators: Vec<Vec<i32>>,
    /// Group order, from coset enumeration.
    pub order: u64,
}

/// Presentations of every component of the fundamental groupoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidPresentation {
    pub components: Vec<ComponentPresentation>,
}

/// Sign-tracking union-find over generator letters. `find` returns the root
/// and the sign relating the letter to it; killed roots stand for the
/// identity.
struct LetterClasses {
    parent: Vec<usize>,
    sign: Vec<i8>,
    killed: Vec<bool>,
}

impl LetterClasses {
    fn new(n: usize) -> LetterClasses {
        LetterClasses {
            parent: (0..n).collect(),
            sign: vec![1; n],
            killed: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Repoint the path at the root top-down, so each node's parent has
        // already had its sign accumulated relative to the root.
        for &v in path.iter().rev() {
            let p = self.parent[v];
            if p != root {
                self.sign[v] *= self.sign[p];
                self.parent[v] = root;
            }
        }
        let s = if x == root { 1 } else { self.sign[x] };
        (root, s)
    }

    fn is_killed(&mut self, x: usize) -> bool {
        let (root, _) = self.find(x);
        self.killed[root]
    }

    fn kill(&mut self, x: usize) -> bool {
        let (root, _) = self.find(x);
        if self.killed[root] {
            false
        } else {
            self.killed[root] = true;
            true
        }
    }

    /// Records `a = b^rel`. Returns `(changed, involution)`: `involution` is
    /// set when the relation collapses to `a = a^{-1}`.
    fn merge(&mut self, a: usize, b: usize, rel: i8) -> (bool, bool) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        // a = b^rel with a = ra^sa, b = rb^sb gives ra = rb^{sa*rel*sb}.
        let s = sa * rel * sb;
        if ra == rb {
            return (false, s == -1);
        }
        self.parent[ra] = rb;
        self.sign[ra] = s;
        if self.killed[ra] && !self.killed[rb] {
            self.killed[rb] = true;
            return (true, false);
        }
        (true, false)
    }
}

/// Builds the presentation of every component of `c` localized at all
/// morphisms, with group orders from coset enumeration.
pub fn fundamental_groupoid(c: &FiniteCategory) -> Result<GroupoidPresentation, ExodromyError> {
    let n_obj = c.n_objects();
    let n_mor = c.n_morphisms();
    let (labels, n_comp) = c.components();

    // Spanning forest by breadth-first search from each component's
    // smallest object, walking morphisms in either direction.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_obj];
    for m in 0..n_mor {
        if c.is_identity(m) {
            continue;
        }
        let (a, b) = (c.source(m), c.target(m));
        adj[a].push((b, m));
        if a != b {
            adj[b].push((a, m));
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    let mut representative = vec![usize::MAX; n_comp];
    for o in 0..n_obj {
        let comp = labels[o];
        if representative[comp] == usize::MAX {
            representative[comp] = o;
        }
    }
    let mut tree = vec![false; n_mor];
    let mut visited = vec![false; n_obj];
    for comp in 0..n_comp {
        let root = representative[comp];
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(o) = queue.pop_front() {
            for &(nb, m) in &adj[o] {
                if !visited[nb] {
                    visited[nb] = true;
                    tree[m] = true;
                    queue.push_back(nb);
                }
            }
        }
    }

    // One letter per non-tree, non-identity morphism.
    let mut letter_of: Vec<Option<usize>> = vec![None; n_mor];
    let mut letter_morphism: Vec<usize> = Vec::new();
    let mut letter_comp: Vec<usize> = Vec::new();
    for m in 0..n_mor {
        if !c.is_identity(m) && !tree[m] {
            letter_of[m] = Some(letter_morphism.len());
            letter_morphism.push(m);
            letter_comp.push(labels[c.source(m)]);
        }
    }
    let mut classes = LetterClasses::new(letter_morphism.len());

    // Normalizes a signed-letter word against the current classes and
    // free-reduces it.
    fn normalize(classes: &mut LetterClasses, word: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::with_capacity(word.len());
        for &l in word {
            let idx = (l.unsigned_abs() - 1) as usize;
            if classes.is_killed(idx) {
                continue;
            }
            let (root, s) = classes.find(idx);
            let mapped = (root as i32 + 1) * l.signum() * s as i32;
            if out.last() == Some(&-mapped) {
                out.pop();
            } else {
                out.push(mapped);
            }
        }
        out
    }

    // Applies one normalized word: empty words vanish, length-one words kill
    // a generator, mixed length-two words merge two, and everything else is
    // kept. Returns whether the classes changed.
    fn apply_word(
        classes: &mut LetterClasses,
        word: Vec<i32>,
        keep: &mut BTreeSet<Vec<i32>>,
    ) -> bool {
        match word.len() {
            0 => false,
            1 => classes.kill((word[0].unsigned_abs() - 1) as usize),
            2 => {
                let a = (word[0].unsigned_abs() - 1) as usize;
                let b = (word[1].unsigned_abs() - 1) as usize;
                if a == b {
                    // Same letter, same sign (opposite signs would have
                    // cancelled): an involution relation, kept as a relator.
                    keep.insert(vec![a as i32 + 1, a as i32 + 1]);
                    false
                } else {
                    // a^p b^q = 1, so a = b^{-pq}.
                    let rel = -(word[0].signum() * word[1].signum()) as i8;
                    let (changed, involution) = classes.merge(a, b, rel);
                    if involution {
                        keep.insert(vec![a as i32 + 1, a as i32 + 1]);
                    }
                    changed
                }
            }
            _ => {
                keep.insert(word);
                false
            }
        }
    }

    // First pass: stream every composable pair. The relator of a pair
    // (g, f) says "f then g equals their composite".
    let mut out_list: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
    for m in 0..n_mor {
        out_list[c.source(m)].push(m as u32);
    }
    let word_of = |m: usize, sign: i32| -> Option<i32> {
        letter_of[m].map(|l| (l as i32 + 1) * sign)
    };
    let mut store: BTreeSet<Vec<i32>> = BTreeSet::new();
    for o in 0..n_obj {
        for &g in &out_list[o] {
            for &f in c.into_object(o) {
                let (g, f) = (g as usize, f as usize);
                let gf = c.compose(g, f);
                let raw: Vec<i32> = [word_of(f, 1), word_of(g, 1), word_of(gf, -1)]
                    .into_iter()
                    .flatten()
                    .collect();
                if raw.is_empty() {
                    continue;
                }
                let w = normalize(&mut classes, &raw);
                apply_word(&mut classes, w, &mut store);
            }
        }
    }

    // Fixpoint: reductions invalidate earlier normalizations, so re-run the
    // kept relators until a full pass changes nothing. The kept set shrinks
    // towards the essential relations, so these passes are cheap.
    loop {
        let mut changed = false;
        let mut next: BTreeSet<Vec<i32>> = BTreeSet::new();
        for w in std::mem::take(&mut store) {
            let w = normalize(&mut classes, &w);
            changed |= apply_word(&mut classes, w, &mut next);
        }
        store = next;
        if !changed {
            break;
        }
    }

    // Collect surviving generators and relators per component.
    let n_letters = letter_morphism.len();
    let mut gen_index: Vec<Option<usize>> = vec![None; n_letters];
    let mut components: Vec<ComponentPresentation> = (0..n_comp)
        .map(|comp| ComponentPresentation {
            representative: representative[comp],
            generators: Vec::new(),
            relators: Vec::new(),
            order: 0,
        })
        .collect();
    for l in 0..n_letters {
        let (root, _) = classes.find(l);
        if root == l && !classes.killed[root] {
            let comp = letter_comp[l];
            gen_index[l] = Some(components[comp].generators.len());
            components[comp].generators.push(letter_morphism[l]);
        }
    }
    for w in &store {
        let comp = letter_comp[(w[0].unsigned_abs() - 1) as usize];
        let local: Vec<i32> = w
            .iter()
            .map(|&l| {
                let idx = (l.unsigned_abs() - 1) as usize;
                let li = gen_index[idx].expect("kept relators use surviving roots") as i32;
                (li + 1) * l.signum()
            })
            .collect();
        components[comp].relators.push(local);
    }
    for comp in components.iter_mut() {
        let order = coset_enumeration(comp.generators.len(), &comp.relators)
            .ok_or(ExodromyError::OrderTooLarge {
                limit: MAX_GROUP_ORDER,
            })?
            .order;
        if order > MAX_GROUP_ORDER {
            return Err(ExodromyError::OrderTooLarge {
                limit: MAX_GROUP_ORDER,
            });
        }
        comp.order = order as u64;
    }
    Ok(GroupoidPresentation { components })
}

const UNDEF: u32 = u32::MAX;

/// A completed coset enumeration: the order and, per generator, the
/// right-action permutation on `0..order` with coset 0 the identity.
pub struct EnumeratedGroup {
    pub order: usize,
    pub action: Vec<Vec<usize>>,
}

/// Union-find over cosets used while processing coincidences.
fn find_coset(rep: &mut Vec<u32>, mut x: u32) -> u32 {
    while rep[x as usize] != x {
        rep[x as usize] = rep[rep[x as usize] as usize];
        x = rep[x as usize];
    }
    x
}

/// Coset enumeration of the trivial subgroup in `<x_1..x_n | relators>`:
/// the classic scan-and-fill strategy with coincidence handling. Returns
/// `None` if the live-coset cap is exceeded.
pub fn coset_enumeration(n_gen: usize, relators: &[Vec<i32>]) -> Option<EnumeratedGroup> {
    if n_gen == 0 {
        return Some(EnumeratedGroup {
            order: 1,
            action: Vec::new(),
        });
    }
    let width = 2 * n_gen;
    let col = |l: i32| -> usize {
        let g = (l.unsigned_abs() - 1) as usize;
        2 * g + usize::from(l < 0)
    };
    let inv = |c: usize| c ^ 1;

    let mut tab: Vec<Vec<u32>> = vec![vec![UNDEF; width]];
    let mut rep: Vec<u32> = vec![0];
    let mut live: usize = 1;

    // Merges two cosets, queueing the dead one for row transfer.
    fn merge(
        rep: &mut Vec<u32>,
        live: &mut usize,
        queue: &mut VecDeque<u32>,
        a: u32,
        b: u32,
    ) {
        let (a, b) = (find_coset(rep, a), find_coset(rep, b));
        if a == b {
            return;
        }
        let (sv, mv) = if a < b { (a, b) } else { (b, a) };
        rep[mv as usize] = sv;
        *live -= 1;
        queue.push_back(mv);
    }

    let process = |tab: &mut Vec<Vec<u32>>,
                       rep: &mut Vec<u32>,
                       live: &mut usize,
                       a: u32,
                       b: u32| {
        let mut queue: VecDeque<u32> = VecDeque::new();
        merge(rep, live, &mut queue, a, b);
        while let Some(dead) = queue.pop_front() {
            for c in 0..width {
                let d = tab[dead as usize][c];
                if d == UNDEF {
                    continue;
                }
                // Remove the mirrored entry, then reconnect on survivors.
                tab[d as usize][inv(c)] = UNDEF;
                let s = find_coset(rep, dead);
                let d1 = find_coset(rep, d);
                let existing = tab[s as usize][c];
                if existing != UNDEF {
                    merge(rep, live, &mut queue, d1, existing);
                } else {
                    let back = tab[d1 as usize][inv(c)];
                    if back != UNDEF {
                        merge(rep, live, &mut queue, s, back);
                    } else {
                        tab[s as usize][c] = d1;
                        tab[d1 as usize][inv(c)] = s;
                    }
                }
            }
        }
    };

    let mut alpha: usize = 0;
    while alpha < tab.len() {
        if find_coset(&mut rep, alpha as u32) != alpha as u32 {
            alpha += 1;
            continue;
        }
        for r in relators {
            if find_coset(&mut rep, alpha as u32) != alpha as u32 {
                break;
            }
            // Scan the relator cycle at alpha, filling the last gap.
            'rescan: loop {
                let mut fwd = alpha as u32;
                let mut i = 0;
                while i < r.len() {
                    let nxt = tab[fwd as usize][col(r[i])];
                    if nxt == UNDEF {
                        break;
                    }
                    fwd = nxt;
                    i += 1;
                }
                if i == r.len() {
                    if fwd != alpha as u32 {
                        process(&mut tab, &mut rep, &mut live, fwd, alpha as u32);
                    }
                    break 'rescan;
                }
                let mut bwd = alpha as u32;
                let mut j = r.len();
                while j > i {
                    let nxt = tab[bwd as usize][inv(col(r[j - 1]))];
                    if nxt == UNDEF {
                        break;
                    }
                    bwd = nxt;
                    j -= 1;
                }
                if j == i {
                    if fwd != bwd {
                        process(&mut tab, &mut rep, &mut live, fwd, bwd);
                    }
                    break 'rescan;
                } else if j == i + 1 {
                    tab[fwd as usize][col(r[i])] = bwd;
                    tab[bwd as usize][inv(col(r[i]))] = fwd;
                    break 'rescan;
                } else {
                    // Gap longer than one: define a coset and rescan.
                    if live >= MAX_COSETS {
                        return None;
                    }
                    let beta = tab.len() as u32;
                    tab.push(vec![UNDEF; width]);
                    rep.push(beta);
                    live += 1;
                    tab[fwd as usize][col(r[i])] = beta;
                    tab[beta as usize][inv(col(r[i]))] = fwd;
                    continue 'rescan;
                }
            }
        }
        if find_coset(&mut rep, alpha as u32) == alpha as u32 {
            for c in 0..width {
                if tab[alpha][c] == UNDEF {
                    if live >= MAX_COSETS {
                        return None;
                    }
                    let beta = tab.len() as u32;
                    tab.push(vec![UNDEF; width]);
                    rep.push(beta);
                    live += 1;
                    tab[alpha][c] = beta;
                    tab[beta as usize][inv(c)] = alpha as u32;
                }
            }
        }
        alpha += 1;
    }

    // Compact live cosets to 0..order.
    let mut compact: Vec<u32> = vec![UNDEF; tab.len()];
    let mut order = 0;
    for x in 0..tab.len() as u32 {
        if find_coset(&mut rep, x) == x {
            compact[x as usize] = order as u32;
            order += 1;
        }
    }
    let mut action = vec![vec![0usize; order]; n_gen];
    for x in 0..tab.len() as u32 {
        if find_coset(&mut rep, x) != x {
            continue;
        }
        for g in 0..n_gen {
            let y = tab[x as usize][2 * g];
            debug_assert_ne!(y, UNDEF, "completed tables have no gaps");
            let y = find_coset(&mut rep, y);
            action[g][compact[x as usize] as usize] = compact[y as usize] as usize;
        }
    }
    Some(EnumeratedGroup { order, action })
}

/// Rebuilds the multiplication table of the presented group: cosets become
/// elements, and the product `a·b` traces `b`'s defining word starting from
/// `a`. Fails with `OrderTooLarge` past the supported order cap.
pub fn reconstruct_group(
    presentation: &ComponentPresentation,
) -> Result<FiniteGroup, ExodromyError> {
    let enumerated = coset_enumeration(presentation.generators.len(), &presentation.relators)
        .ok_or(ExodromyError::OrderTooLarge {
            limit: MAX_GROUP_ORDER,
        })?;
    let order = enumerated.order;
    if order > MAX_GROUP_ORDER {
        return Err(ExodromyError::OrderTooLarge {
            limit: MAX_GROUP_ORDER,
        });
    }
    // Breadth-first words for every element from the identity coset.
    let mut word: Vec<Option<Vec<usize>>> = vec![None; order];
    word[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (g, act) in enumerated.action.iter().enumerate() {
            let y = act[x];
            if word[y].is_none() {
                let mut w = word[x].clone().unwrap();
                w.push(g);
                word[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    let mut mul = vec![vec![0usize; order]; order];
    for a in 0..order {
        for b in 0..order {
            let mut x = a;
            for &g in word[b].as_ref().expect("coset graph is connected") {
                x = enumerated.action[g][x];
            }
            mul[a][b] = x;
        }
    }
    FiniteGroup::from_table("reconstructed", mul).map_err(|_| ExodromyError::EquivalenceFailure {
        detail: "reconstructed multiplication table is not a group".to_string(),
    })
}

/// Order of an element in a multiplication table.
fn element_order(g: &FiniteGroup, x: usize) -> usize {
    let mut y = x;
    let mut n = 1;
    while y != g.identity {
        y = g.mul[y][x];
        n += 1;
    }
    n
}

/// Brute-force isomorphism test on multiplication tables: pick a generating
/// sequence of `a`, try order-preserving images in `b`, extend by closure,
/// and verify multiplicativity and bijectivity.
pub fn tables_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    let n = a.order();
    if n != b.order() {
        return false;
    }
    if n <= 1 {
        return true;
    }
    let orders_a: Vec<usize> = (0..n).map(|x| element_order(a, x)).collect();
    let orders_b: Vec<usize> = (0..n).map(|x| element_order(b, x)).collect();
    {
        let mut sa = orders_a.clone();
        let mut sb = orders_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
    }
    // Greedy generating sequence: repeatedly adjoin the smallest element
    // outside the closure of what we have.
    let mut gens: Vec<usize> = Vec::new();
    let mut closure = vec![false; n];
    closure[a.identity] = true;
    let close = |closure: &mut Vec<bool>, gens: &[usize], a: &FiniteGroup| {
        let mut queue: Vec<usize> = (0..n).filter(|&x| closure[x]).collect();
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = a.mul[x][g];
                if !closure[y] {
                    closure[y] = true;
                    queue.push(y);
                }
            }
        }
    };
    loop {
        match (0..n).find(|&x| !closure[x]) {
            None => break,
            Some(x) => {
                gens.push(x);
                close(&mut closure, &gens, a);
            }
        }
    }

    // Elements of `a` as words in the generating sequence.
    let mut word: Vec<Option<Vec<usize>>> = vec![None; n];
    word[a.identity] = Some(Vec::new());
    let mut queue = VecDeque::from([a.identity]);
    while let Some(x) = queue.pop_front() {
        for (gi, &g) in gens.iter().enumerate() {
            let y = a.mul[x][g];
            if word[y].is_none() {
                let mut w = word[x].clone().unwrap();
                w.push(gi);
                word[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    let words: Vec<Vec<usize>> = word.into_iter().map(|w| w.unwrap()).collect();

    fn search(
        depth: usize,
        gens: &[usize],
        images: &mut Vec<usize>,
        a: &FiniteGroup,
        b: &FiniteGroup,
        orders_a: &[usize],
        orders_b: &[usize],
        words: &[Vec<usize>],
    ) -> bool {
        if depth == gens.len() {
            let n = a.order();
            let phi: Vec<usize> = (0..n)
                .map(|x| {
                    let mut y = b.identity;
                    for &gi in &words[x] {
                        y = b.mul[y][images[gi]];
                    }
                    y
                })
                .collect();
            let mut seen = vec![false; n];
            for &y in &phi {
                if seen[y] {
                    return false;
                }
                seen[y] = true;
            }
            return (0..n).all(|x| (0..n).all(|y| phi[a.mul[x][y]] == b.mul[phi[x]][phi[y]]));
        }
        let want = orders_a[gens[depth]];
        for cand in 0..b.order() {
            if orders_b[cand] != want {
                continue;
            }
            images.push(cand);
            if search(depth + 1, gens, images, a, b, orders_a, orders_b, words) {
                return true;
            }
            images.pop();
        }
        false
    }
    search(
        0,
        &gens,
        &mut Vec::new(),
        a,
        b,
        &orders_a,
        &orders_b,
        &words,
    )
}

/// Whether two presentations describe equivalent groupoids: equal component
/// counts and a matching of components with isomorphic groups.
pub fn groupoid_equivalent(
    p: &GroupoidPresentation,
    q: &GroupoidPresentation,
) -> Result<bool, ExodromyError> {
    if p.components.len() != q.components.len() {
        return Ok(false);
    }
    let groups_p: Vec<FiniteGroup> = p
        .components
        .iter()
        .map(reconstruct_group)
        .collect::<Result<_, _>>()?;
    let groups_q: Vec<FiniteGroup> = q
        .components
        .iter()
        .map(reconstruct_group)
        .collect::<Result<_, _>>()?;
    // Isomorphism is an equivalence relation, so multiset comparison of
    // isomorphism classes decides the existence of a matching.
    fn classify<'a>(g: &'a FiniteGroup, reps: &mut Vec<&'a FiniteGroup>) -> usize {
        for (i, r) in reps.iter().enumerate() {
            if tables_isomorphic(r, g) {
                return i;
            }
        }
        reps.push(g);
        reps.len() - 1
    }
    let mut reps: Vec<&FiniteGroup> = Vec::new();
    let mut count_p: Vec<usize> = Vec::new();
    let mut count_q: Vec<usize> = Vec::new();
    for g in &groups_p {
        let i = classify(g, &mut reps);
        if i == count_p.len() {
            count_p.push(0);
            count_q.push(0);
        }
        count_p[i] += 1;
    }
    for g in &groups_q {
        let i = classify(g, &mut reps);
        if i == count_p.len() {
            count_p.push(0);
            count_q.push(0);
        }
        count_q[i] += 1;
    }
    Ok(count_p == count_q)
}
