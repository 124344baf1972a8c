//! The total category of a simplicial datum.
//!
//! Objects are pairs `(m, x)` of a level and an object of the level-`m`
//! fiber; a morphism `(m, v) -> (n, y)` is a pair of a monotone map
//! `sigma: m -> n` and a fiber morphism `v -> sigma*(y)` in `C_m`. Composing
//! `(sigma, f)` then `(tau, g)` gives `(tau after sigma, sigma*(g) after f)`.
//! An edge is cartesian exactly when its fiber part is invertible, and every
//! edge factors uniquely as a fiber morphism followed by a cartesian lift.

use crate::fincat::{validate_category, CategoryData, FiniteCategory, Functor};
use crate::simplex::{
    compose_maps, hom_delta, sigma_star, SimplexMap, SimplicialGaloisDatum,
};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TotalError {
    #[error("level {level} exceeds truncation {truncation}")]
    LevelOutOfRange { level: usize, truncation: usize },
    #[error("projected morphism count {projected} exceeds the build budget {budget}")]
    SizeBudgetExceeded { projected: usize, budget: usize },
}

/// The materialized total category, with every morphism decomposed into its
/// base map and fiber part.
#[derive(Debug, Clone)]
pub struct TotalCategory {
    pub truncation: usize,
    pub underlying: FiniteCategory,
    pub fibers: Vec<FiniteCategory>,
    /// Level of each object.
    pub level_of: Vec<usize>,
    /// Fiber object underlying each object.
    pub fiber_object_of: Vec<usize>,
    /// First object id of each level (one trailing entry with the total).
    pub object_start: Vec<usize>,
    /// Base map of each morphism, as an index into `maps`.
    pub sigma_of: Vec<u32>,
    /// Fiber part of each morphism, a morphism of the source-level fiber.
    pub fiber_mor_of: Vec<u32>,
    /// Cartesian flag per morphism.
    pub cartesian: Vec<bool>,
    /// All monotone maps within truncation, ordered by (source level,
    /// target level, lexicographic values).
    pub maps: Vec<SimplexMap>,
    map_index: BTreeMap<Vec<usize>, usize>,
    /// Pullback functor per base map.
    pullback: Vec<Functor>,
    /// `block_start[map][target fiber object]`: first morphism id of the
    /// block holding all edges with that base map and target.
    block_start: Vec<Vec<u32>>,
    /// `in_offset[level][target][v]`: how many morphisms into `target` come
    /// from fiber objects before `v`.
    in_offset: Vec<Vec<Vec<u32>>>,
    /// Position of each fiber morphism inside its hom list, per level.
    hom_pos: Vec<Vec<u32>>,
}

fn map_key(s: &SimplexMap) -> Vec<usize> {
    let mut k = vec![s.source_level, s.target_level];
    k.extend(&s.values);
    k
}

/// Objects and morphisms the total category would have, without building it.
pub fn project_total_size(datum: &SimplicialGaloisDatum) -> (usize, usize) {
    let n = datum.truncation;
    let objects: usize = datum.fibers.iter().map(|c| c.n_objects()).sum();
    let mut morphisms = 0usize;
    for a in 0..=n {
        for b in 0..=n {
            for sigma in hom_delta(a, b) {
                let pb = sigma_star(datum, &sigma).expect("levels within truncation");
                for xi in 0..datum.fibers[b].n_objects() {
                    morphisms += datum.fibers[a].into_object(pb.object_map[xi]).len();
                }
            }
        }
    }
    (objects, morphisms)
}

pub fn build_total_guarded(
    datum: &SimplicialGaloisDatum,
    budget_morphisms: usize,
) -> Result<TotalCategory, TotalError> {
    let (_, projected) = project_total_size(datum);
    if projected > budget_morphisms {
        return Err(TotalError::SizeBudgetExceeded { projected, budget: budget_morphisms });
    }
    Ok(build_total(datum))
}

pub fn build_total(datum: &SimplicialGaloisDatum) -> TotalCategory {
    let n = datum.truncation;
    let fibers = datum.fibers.clone();

    // Object layout: levels in order.
    let mut object_start = Vec::with_capacity(n + 2);
    let mut level_of = Vec::new();
    let mut fiber_object_of = Vec::new();
    let mut acc = 0usize;
    for (m, fib) in fibers.iter().enumerate() {
        object_start.push(acc);
        for x in 0..fib.n_objects() {
            level_of.push(m);
            fiber_object_of.push(x);
        }
        acc += fib.n_objects();
    }
    object_start.push(acc);
    let n_objects = acc;

    // All base maps, their pullbacks, and their composition table.
    let mut maps = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            maps.extend(hom_delta(a, b));
        }
    }
    let map_index: BTreeMap<Vec<usize>, usize> =
        maps.iter().enumerate().map(|(i, s)| (map_key(s), i)).collect();
    let pullback: Vec<Functor> = maps
        .iter()
        .map(|s| sigma_star(datum, s).expect("levels within truncation"))
        .collect();
    let n_maps = maps.len();
    let mut comp_map = vec![u32::MAX; n_maps * n_maps];
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            if f.target_level == g.source_level {
                let c = compose_maps(g, f);
                comp_map[j * n_maps + i] = map_index[&map_key(&c)] as u32;
            }
        }
    }

    // Hom bookkeeping inside each fiber.
    let hom_pos: Vec<Vec<u32>> = fibers
        .iter()
        .map(|c| {
            let mut pos = vec![0u32; c.n_morphisms()];
            for s in 0..c.n_objects() {
                for t in 0..c.n_objects() {
                    for (p, &m) in c.hom(s, t).iter().enumerate() {
                        pos[m as usize] = p as u32;
                    }
                }
            }
            pos
        })
        .collect();
    let in_offset: Vec<Vec<Vec<u32>>> = fibers
        .iter()
        .map(|c| {
            (0..c.n_objects())
                .map(|t| {
                    let mut cum = Vec::with_capacity(c.n_objects());
                    let mut run = 0u32;
                    for v in 0..c.n_objects() {
                        cum.push(run);
                        run += c.hom(v, t).len() as u32;
                    }
                    cum
                })
                .collect()
        })
        .collect();

    // Morphism layout: for each base map, for each target fiber object, the
    // incoming fiber morphisms of the pulled-back object in fiber order.
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut sigma_of: Vec<u32> = Vec::new();
    let mut fiber_mor_of: Vec<u32> = Vec::new();
    let mut block_start: Vec<Vec<u32>> = Vec::with_capacity(n_maps);
    for (mi, sigma) in maps.iter().enumerate() {
        let (a, b) = (sigma.source_level, sigma.target_level);
        let mut starts = Vec::with_capacity(fibers[b].n_objects());
        for xi in 0..fibers[b].n_objects() {
            starts.push(src.len() as u32);
            let pulled = pullback[mi].object_map[xi];
            for v in 0..fibers[a].n_objects() {
                for &f in fibers[a].hom(v, pulled) {
                    src.push((object_start[a] + v) as u32);
                    tgt.push((object_start[b] + xi) as u32);
                    sigma_of.push(mi as u32);
                    fiber_mor_of.push(f);
                }
            }
        }
        block_start.push(starts);
    }

    let locate = |map_id: usize, xi: usize, fiber_mor: usize| -> u32 {
        let level = maps[map_id].source_level;
        let pulled = pullback[map_id].object_map[xi];
        let v = fibers[level].source(fiber_mor);
        debug_assert_eq!(fibers[level].target(fiber_mor), pulled);
        block_start[map_id][xi] + in_offset[level][pulled][v] + hom_pos[level][fiber_mor]
    };

    let ident: Vec<u32> = (0..n_objects)
        .map(|o| {
            let m = level_of[o];
            let x = fiber_object_of[o];
            let id_map = map_index[&map_key(&SimplexMap::identity(m))];
            locate(id_map, x, fibers[m].identity(x))
        })
        .collect();

    let underlying = FiniteCategory::from_parts(
        n_objects,
        src,
        tgt.clone(),
        ident,
        |g, f| {
            let sf = sigma_of[f as usize] as usize;
            let sg = sigma_of[g as usize] as usize;
            let sc = comp_map[sg * n_maps + sf] as usize;
            let a = maps[sf].source_level;
            let pulled_g =
                pullback[sf].morphism_map[fiber_mor_of[g as usize] as usize];
            let fiber = fibers[a].compose(pulled_g, fiber_mor_of[f as usize] as usize);
            let xi = fiber_object_of[tgt[g as usize] as usize];
            locate(sc, xi, fiber)
        },
    );

    let cartesian: Vec<bool> = (0..underlying.n_morphisms())
        .map(|e| {
            let level = maps[sigma_of[e] as usize].source_level;
            fibers[level].is_iso(fiber_mor_of[e] as usize)
        })
        .collect();

    TotalCategory {
        truncation: n,
        underlying,
        fibers,
        level_of,
        fiber_object_of,
        object_start,
        sigma_of,
        fiber_mor_of,
        cartesian,
        maps,
        map_index,
        pullback,
        block_start,
        in_offset,
        hom_pos,
    }
}

impl TotalCategory {
    /// Global object id of `(level, fiber object)`.
    pub fn object_id(&self, level: usize, x: usize) -> usize {
        self.object_start[level] + x
    }

    /// Index of a base map in `maps`; panics on maps outside truncation.
    pub fn map_id(&self, sigma: &SimplexMap) -> usize {
        self.map_index[&map_key(sigma)]
    }

    /// Global morphism id of `(sigma, fiber_mor)` into `(target level, xi)`.
    pub fn morphism_id(&self, sigma: &SimplexMap, xi: usize, fiber_mor: usize) -> usize {
        let mi = self.map_id(sigma);
        let level = sigma.source_level;
        let pulled = self.pullback[mi].object_map[xi];
        let v = self.fibers[level].source(fiber_mor);
        assert_eq!(self.fibers[level].target(fiber_mor), pulled, "fiber part must land on the pullback");
        (self.block_start[mi][xi]
            + self.in_offset[level][pulled][v]
            + self.hom_pos[level][fiber_mor]) as usize
    }

    /// The `(base map, fiber morphism)` pair of a morphism.
    pub fn decompose(&self, e: usize) -> (&SimplexMap, usize) {
        (&self.maps[self.sigma_of[e] as usize], self.fiber_mor_of[e] as usize)
    }

    pub fn is_cartesian(&self, e: usize) -> bool {
        self.cartesian[e]
    }

    /// Pullback functor of a base map.
    pub fn pullback_of(&self, sigma: &SimplexMap) -> &Functor {
        &self.pullback[self.map_id(sigma)]
    }

    /// The edge `(sigma, identity)` from `(m, sigma*(xi))` to `(n, xi)`.
    pub fn cartesian_lift(&self, sigma: &SimplexMap, xi: usize) -> usize {
        let mi = self.map_id(sigma);
        let pulled = self.pullback[mi].object_map[xi];
        let id = self.fibers[sigma.source_level].identity(pulled);
        self.morphism_id(sigma, xi, id)
    }

    /// Splits `e = (sigma, f)` into the fiber edge `(id, f)` followed by the
    /// cartesian lift `(sigma, id)`; the pair composes back to `e` and is
    /// the unique such factorization.
    pub fn factor(&self, e: usize) -> (usize, usize) {
        let (sigma, f) = self.decompose(e);
        let m = sigma.source_level;
        let xi = self.fiber_object_of[self.underlying.target(e)];
        let pulled = self.pullback[self.sigma_of[e] as usize].object_map[xi];
        let fiber_edge = self.morphism_id(&SimplexMap::identity(m), pulled, f);
        let lift = self.cartesian_lift(sigma, xi);
        (fiber_edge, lift)
    }

    /// The level-`m` slice: a copy of the fiber category, the identity
    /// isomorphism onto `C_m`, and the embeddings of its objects and
    /// morphisms into the total category.
    pub fn fiber_of(&self, m: usize) -> Result<FiberSlice, TotalError> {
        if m > self.truncation {
            return Err(TotalError::LevelOutOfRange { level: m, truncation: self.truncation });
        }
        let fib = &self.fibers[m];
        let id_map = SimplexMap::identity(m);
        let object_embedding: Vec<usize> =
            (0..fib.n_objects()).map(|x| self.object_id(m, x)).collect();
        let morphism_embedding: Vec<usize> = (0..fib.n_morphisms())
            .map(|f| self.morphism_id(&id_map, fib.target(f), f))
            .collect();
        Ok(FiberSlice {
            category: fib.clone(),
            iso_to_fiber: Functor::identity(fib),
            iso_from_fiber: Functor::identity(fib),
            object_embedding,
            morphism_embedding,
        })
    }

    /// The truncated simplex category and the projection onto it.
    pub fn projection_functor(&self) -> (FiniteCategory, Functor) {
        let n = self.truncation;
        let base_index = &self.map_index;
        let morphisms: Vec<(usize, usize)> = self
            .maps
            .iter()
            .map(|s| (s.source_level, s.target_level))
            .collect();
        let identity: Vec<usize> = (0..=n)
            .map(|m| base_index[&map_key(&SimplexMap::identity(m))])
            .collect();
        let mut compose = Vec::new();
        for (i, f) in self.maps.iter().enumerate() {
            for (j, g) in self.maps.iter().enumerate() {
                if f.target_level == g.source_level {
                    let c = compose_maps(g, f);
                    compose.push((j, i, base_index[&map_key(&c)]));
                }
            }
        }
        let base = validate_category(&CategoryData {
            objects: n + 1,
            morphisms,
            identity,
            compose,
        })
        .expect("the truncated simplex category is a category");
        let functor = Functor {
            object_map: self.level_of.clone(),
            morphism_map: self.sigma_of.iter().map(|&s| s as usize).collect(),
        };
        (base, functor)
    }

    /// DOT rendering: cartesian edges solid, other edges dashed; identity
    /// loops are omitted for readability.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph total {\n  rankdir=BT;\n");
        for o in 0..self.underlying.n_objects() {
            let _ = writeln!(
                out,
                "  o{o} [label=\"({}, {})\"];",
                self.level_of[o], self.fiber_object_of[o]
            );
        }
        for e in 0..self.underlying.n_morphisms() {
            if self.underlying.is_identity(e) {
                continue;
            }
            let (sigma, f) = self.decompose(e);
            let style = if self.cartesian[e] { "solid" } else { "dashed" };
            let values: Vec<String> = sigma.values.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "  o{} -> o{} [style={style}, label=\"[{}] f{}\"];",
                self.underlying.source(e),
                self.underlying.target(e),
                values.join(","),
                f
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A fiber of the total category together with its identification with the
/// generating category and its embedding into the total category.
#[derive(Debug, Clone)]
pub struct FiberSlice {
    pub category: FiniteCategory,
    pub iso_to_fiber: Functor,
    pub iso_from_fiber: Functor,
    pub object_embedding: Vec<usize>,
    pub morphism_embedding: Vec<usize>,
}

#[cfg(test)]
mod tests;
