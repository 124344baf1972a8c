//! Finite groups given by multiplication tables, and finite right actions.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("multiplication table is not square: {rows} rows, row {row} has {got} entries")]
    TableShape { rows: usize, row: usize, got: usize },
    #[error("table entry ({a}, {b}) = {got} is out of range {size}")]
    EntryOutOfRange { a: usize, b: usize, got: usize, size: usize },
    #[error("no two-sided identity element in the table")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("action table has {rows} rows for carrier size {size}")]
    ActionShape { rows: usize, size: usize },
    #[error("identity fails to fix point {point}")]
    IdentityMoves { point: usize },
    #[error("action is not compatible with multiplication at point {point}, elements ({g}, {h})")]
    NotAnAction { point: usize, g: usize, h: usize },
}

/// A finite group as a validated multiplication table.
///
/// `mul[a][b]` is "a then b": composing left to right, so that `x·g = g(x)`
/// defines a right action when elements are maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub label: String,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn from_table(label: &str, mul: Vec<Vec<usize>>) -> Result<FiniteGroup, ActionError> {
        let n = mul.len();
        for (row, r) in mul.iter().enumerate() {
            if r.len() != n {
                return Err(ActionError::TableShape { rows: n, row, got: r.len() });
            }
            for (b, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(ActionError::EntryOutOfRange { a: row, b, got: v, size: n });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or(ActionError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(ActionError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or(ActionError::NoInverse { element: a })?;
        }
        Ok(FiniteGroup { label: label.to_string(), mul, identity, inv })
    }

    /// The cyclic group of the given order, written additively.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&format!("z{n}"), mul).expect("cyclic table is a group")
    }

    /// The full symmetric group on `{0..n}`, elements in lexicographic
    /// one-line order, composed left to right.
    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!((1..=5).contains(&n), "symmetric group size out of supported range");
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        // next_permutation enumeration in lexicographic order
        loop {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        let index = |p: &Vec<usize>| perms.binary_search(p).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // "a then b" on points: x -> b(a(x))
                        let composed: Vec<usize> = (0..n).map(|x| b[a[x]]).collect();
                        index(&composed)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&format!("s{n}"), mul).expect("permutation table is a group")
    }

    /// One-line notation of a symmetric-group element (only meaningful for
    /// groups built by [`FiniteGroup::symmetric`]).
    pub fn permutation(&self, degree: usize, element: usize) -> Vec<usize> {
        let mut perms: Vec<Vec<usize>> = vec![(0..degree).collect()];
        for _ in 1..self.order() {
            let mut p = perms.last().unwrap().clone();
            let Some(i) = (0..degree - 1).rev().find(|&i| p[i] < p[i + 1]) else { break };
            let j = (i + 1..degree).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
            perms.push(p);
        }
        perms[element].clone()
    }
}

/// A finite right action: `act[x][g]` is `x·g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    pub label: String,
    pub size: usize,
    pub act: Vec<Vec<usize>>,
}

impl GSet {
    pub fn from_table(
        label: &str,
        group: &FiniteGroup,
        act: Vec<Vec<usize>>,
    ) -> Result<GSet, ActionError> {
        let size = act.len();
        let n = group.order();
        for (x, row) in act.iter().enumerate() {
            if row.len() != n {
                return Err(ActionError::ActionShape { rows: row.len(), size: n });
            }
            for (g, &y) in row.iter().enumerate() {
                if y >= size {
                    return Err(ActionError::EntryOutOfRange { a: x, b: g, got: y, size });
                }
            }
        }
        for x in 0..size {
            if act[x][group.identity] != x {
                return Err(ActionError::IdentityMoves { point: x });
            }
        }
        for x in 0..size {
            for g in 0..n {
                for h in 0..n {
                    if act[act[x][g]][h] != act[x][group.mul[g][h]] {
                        return Err(ActionError::NotAnAction { point: x, g, h });
                    }
                }
            }
        }
        Ok(GSet { label: label.to_string(), size, act })
    }

    /// The one-point action.
    pub fn point(group: &FiniteGroup) -> GSet {
        GSet::from_table("pt", group, vec![(0..group.order()).map(|_| 0).collect()])
            .expect("trivial action on a point")
    }

    /// The group acting on itself by right multiplication.
    pub fn regular(group: &FiniteGroup) -> GSet {
        GSet::from_table("free", group, group.mul.clone()).expect("right regular action")
    }

    /// The action fixing every point of a set of the given size.
    pub fn trivial(group: &FiniteGroup, size: usize) -> GSet {
        let act = (0..size).map(|x| vec![x; group.order()]).collect();
        GSet::from_table(&format!("fix{size}"), group, act).expect("trivial action")
    }

    /// Side-by-side union of two actions of the same group.
    pub fn disjoint_union(a: &GSet, b: &GSet) -> GSet {
        let mut act = a.act.clone();
        act.extend(
            b.act
                .iter()
                .map(|row| row.iter().map(|&y| y + a.size).collect::<Vec<_>>()),
        );
        GSet {
            label: format!("{}+{}", a.label, b.label),
            size: a.size + b.size,
            act,
        }
    }

    pub fn apply(&self, x: usize, g: usize) -> usize {
        self.act[x][g]
    }

    /// Orbit labels (`orbit[x]` is the orbit index of `x`) and the orbit count.
    pub fn orbits(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.size];
        let mut next = 0;
        for start in 0..self.size {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(x) = stack.pop() {
                for &y in &self.act[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        (label, next)
    }

    /// Elements fixing the given point, in increasing order.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.act[x].len()).filter(|&g| self.act[x][g] == x).collect()
    }
}
