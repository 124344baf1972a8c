//! Sets of size at most a fixed bound, materialized as a finite category.
//!
//! Objects are the sizes `0..=bound`; the morphisms from `a` to `b` are all
//! `b^a` functions `{0..a} -> {0..b}`, stored in lexicographic table order.
//! This gives set-valued functors a home inside [`crate::fincat`] so that
//! functor validation and natural-isomorphism search apply to them without
//! special cases.

use crate::fincat::FiniteCategory;

/// The category of sets `{0}, {0}, {0,1}, ..., {0,..,bound-1}` and all
/// functions between them, with explicit lookup tables.
pub struct FinSetCat {
    pub bound: usize,
    pub cat: FiniteCategory,
    /// `block_start[a][b]` is the morphism id of the lexicographically first
    /// function `a -> b` (the constant-0 one, or the empty one).
    block_start: Vec<Vec<u32>>,
    tables: Vec<Vec<usize>>,
}

impl FinSetCat {
    /// Materializes the category. The size is exponential in the bound, so
    /// bounds above 5 are refused outright.
    pub fn new(bound: usize) -> FinSetCat {
        assert!(
            bound <= 5,
            "function category on sets of size <= {bound} is too large to materialize"
        );
        let n_obj = bound + 1;
        let mut block_start = vec![vec![0u32; n_obj]; n_obj];
        let mut src: Vec<u32> = Vec::new();
        let mut tgt: Vec<u32> = Vec::new();
        let mut tables: Vec<Vec<usize>> = Vec::new();
        for a in 0..n_obj {
            for b in 0..n_obj {
                block_start[a][b] = src.len() as u32;
                if a == 0 {
                    src.push(0);
                    tgt.push(b as u32);
                    tables.push(Vec::new());
                } else if b > 0 {
                    for idx in 0..b.pow(a as u32) {
                        let mut t = vec![0usize; a];
                        let mut r = idx;
                        for slot in t.iter_mut().rev() {
                            *slot = r % b;
                            r /= b;
                        }
                        src.push(a as u32);
                        tgt.push(b as u32);
                        tables.push(t);
                    }
                }
            }
        }
        let ident: Vec<u32> = (0..n_obj)
            .map(|a| {
                let id_table: Vec<usize> = (0..a).collect();
                encode_raw(&block_start, a, a, &id_table)
            })
            .collect();
        let (src_c, tgt_c) = (src.clone(), tgt.clone());
        let cat = FiniteCategory::from_parts(n_obj, src, tgt, ident, |g, f| {
            let ft = &tables[f as usize];
            let gt = &tables[g as usize];
            let composed: Vec<usize> = ft.iter().map(|&x| gt[x]).collect();
            encode_raw(
                &block_start,
                src_c[f as usize] as usize,
                tgt_c[g as usize] as usize,
                &composed,
            )
        });
        FinSetCat {
            bound,
            cat,
            block_start,
            tables,
        }
    }

    /// Morphism id of the function `from -> to` with the given value table.
    pub fn encode(&self, from: usize, to: usize, table: &[usize]) -> usize {
        assert_eq!(table.len(), from);
        assert!(table.iter().all(|&v| v < to) || from == 0);
        encode_raw(&self.block_start, from, to, table) as usize
    }

    /// The value table of a morphism; its length is the source size.
    pub fn table(&self, m: usize) -> &[usize] {
        &self.tables[m]
    }

    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.tables[m][x]
    }

    pub fn source_size(&self, m: usize) -> usize {
        self.cat.source(m)
    }

    pub fn target_size(&self, m: usize) -> usize {
        self.cat.target(m)
    }
}

fn encode_raw(block_start: &[Vec<u32>], from: usize, to: usize, table: &[usize]) -> u32 {
    let mut idx = 0usize;
    for &v in table {
        idx = idx * to + v;
    }
    block_start[from][to] + idx as u32
}
