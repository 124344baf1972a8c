//! Towers of finite layered categories linked by transition functors, a
//! finite-stage stand-in for inverse systems of symmetry categories.
//!
//! A functor out of the tower is *continuous* when it is defined at some
//! finite stage; [`continuity_stage`] normalizes such a functor to the
//! earliest stage it factors through, up to natural isomorphism.

use thiserror::Error;

use crate::exodromy::{enumerate_sheaves, SearchBudget};
use crate::fincat::{
    compose_functors, stock, validate_functor, FiniteCategory, Functor, FunctorError,
    LayeredWitness,
};
use crate::finset::FinSetCat;
use crate::setfun::{natural_iso, SetFunctor};
use crate::simplex::FiniteGroup;

/// Failures of tower construction and validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfinError {
    #[error("a tower needs at least one stage")]
    EmptyTower,
    #[error("{got} transitions supplied for {expected} consecutive stage pairs")]
    TransitionCount { expected: usize, got: usize },
    #[error("stage {stage} is not layered: endomorphism {endo} has no inverse")]
    NotLayered { stage: usize, endo: usize },
    #[error("transition {index} is not a functor into the previous stage: {reason}")]
    BadTransition { index: usize, reason: FunctorError },
    #[error("modulus {next} at position {index} is not a positive multiple of {prev}")]
    NotDivisibilityChain { index: usize, prev: usize, next: usize },
}

/// A finite chain of layered categories. `transitions[k]` maps stage `k+1`
/// to stage `k`, so stage `0` is the coarsest quotient.
#[derive(Debug, Clone)]
pub struct Tower {
    pub stages: Vec<FiniteCategory>,
    /// Endomorphism inverses certifying that each stage is layered.
    pub witnesses: Vec<LayeredWitness>,
    pub transitions: Vec<Functor>,
}

impl Tower {
    pub fn n_stages(&self) -> usize {
        self.stages.len()
    }

    /// The composite transition from stage `from` down to stage `to`.
    pub fn composite_transition(&self, from: usize, to: usize) -> Functor {
        assert!(to <= from && from < self.stages.len());
        let mut acc = Functor::identity(&self.stages[from]);
        for k in (to..from).rev() {
            acc = compose_functors(&self.stages[k + 1], &acc, &self.transitions[k])
                .expect("validated transitions always compose");
        }
        acc
    }
}

/// Checks the tower invariants: at least one stage, every stage layered,
/// and one valid transition functor per consecutive pair.
pub fn validate_tower(
    stages: Vec<FiniteCategory>,
    transitions: Vec<Functor>,
) -> Result<Tower, ProfinError> {
    if stages.is_empty() {
        return Err(ProfinError::EmptyTower);
    }
    if transitions.len() != stages.len() - 1 {
        return Err(ProfinError::TransitionCount {
            expected: stages.len() - 1,
            got: transitions.len(),
        });
    }
    let mut witnesses = Vec::with_capacity(stages.len());
    for (stage, c) in stages.iter().enumerate() {
        match c.is_layered() {
            Ok(w) => witnesses.push(w),
            Err(endo) => return Err(ProfinError::NotLayered { stage, endo }),
        }
    }
    for (index, t) in transitions.iter().enumerate() {
        validate_functor(&stages[index + 1], &stages[index], t)
            .map_err(|reason| ProfinError::BadTransition { index, reason })?;
    }
    Ok(Tower {
        stages,
        witnesses,
        transitions,
    })
}

/// A tower of one-object categories on cyclic groups with the reduction
/// homomorphisms as transitions, together with the distinguished generator
/// of each stage.
#[derive(Debug, Clone)]
pub struct FiniteFieldTower {
    pub tower: Tower,
    /// Morphism id of the distinguished generator in each stage (the
    /// identity at a trivial stage).
    pub frobenius: Vec<usize>,
}

/// Builds the cyclic-quotient tower of a divisibility chain
/// `m_1 | m_2 | … | m_r`: stage `i` is the one-object category on the
/// cyclic group of order `m_i`, and each transition reduces modulo the
/// smaller order.
pub fn finite_field_tower(moduli: &[usize]) -> Result<FiniteFieldTower, ProfinError> {
    if moduli.is_empty() {
        return Err(ProfinError::EmptyTower);
    }
    for (i, pair) in moduli.windows(2).enumerate() {
        let (prev, next) = (pair[0], pair[1]);
        if prev == 0 || next == 0 || next % prev != 0 {
            return Err(ProfinError::NotDivisibilityChain {
                index: i + 1,
                prev,
                next,
            });
        }
    }
    if moduli[0] == 0 {
        return Err(ProfinError::NotDivisibilityChain {
            index: 0,
            prev: moduli[0],
            next: moduli[0],
        });
    }
    let stages: Vec<FiniteCategory> = moduli
        .iter()
        .map(|&m| {
            stock::one_object(&FiniteGroup::cyclic(m).mul, 0)
                .expect("cyclic multiplication tables are valid categories")
        })
        .collect();
    let transitions: Vec<Functor> = moduli
        .windows(2)
        .map(|pair| Functor {
            object_map: vec![0],
            morphism_map: (0..pair[1]).map(|g| g % pair[0]).collect(),
        })
        .collect();
    let tower = validate_tower(stages, transitions)?;
    let frobenius = moduli.iter().map(|&m| 1 % m).collect();
    Ok(FiniteFieldTower { tower, frobenius })
}

/// A functor out of the tower, recorded at the stage it is defined on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuousFunctorStage {
    pub stage_index: usize,
    /// Functor from that stage into the ambient finite-set category.
    pub functor: Functor,
}

fn set_functor_of(fs: &FinSetCat, f: &Functor) -> SetFunctor {
    SetFunctor {
        sizes: f.object_map.clone(),
        images: f.morphism_map.iter().map(|&m| fs.table(m).to_vec()).collect(),
    }
}

fn pull_back(t: &Functor, g: &SetFunctor) -> SetFunctor {
    SetFunctor {
        sizes: t.object_map.iter().map(|&o| g.sizes[o]).collect(),
        images: t.morphism_map.iter().map(|&m| g.images[m].clone()).collect(),
    }
}

/// Normalizes a stage functor to the earliest stage it factors through, up
/// to natural isomorphism, by exhaustively classifying functors on each
/// earlier stage and testing their pullbacks along the composite
/// transitions. The input must be a valid functor from the named stage into
/// `fs`; the earliest-stage representative is returned in `fs` as well.
pub fn continuity_stage(
    tower: &Tower,
    fs: &FinSetCat,
    input: &ContinuousFunctorStage,
) -> ContinuousFunctorStage {
    let j = input.stage_index;
    assert!(j < tower.n_stages(), "stage index out of range");
    validate_functor(&tower.stages[j], &fs.cat, &input.functor)
        .expect("input must be a functor from its named stage");
    let f_set = set_functor_of(fs, &input.functor);
    let bound = f_set.sizes.iter().copied().max().unwrap_or(0);
    for i in 0..j {
        let stage = &tower.stages[i];
        let invert = vec![false; stage.n_morphisms()];
        let classes = enumerate_sheaves(stage, bound, &invert, &SearchBudget { nodes: u64::MAX })
            .expect("an effectively unbounded search cannot exhaust its budget");
        let t = tower.composite_transition(j, i);
        for g in classes {
            if natural_iso(&tower.stages[j], &pull_back(&t, &g), &f_set).is_some() {
                return ContinuousFunctorStage {
                    stage_index: i,
                    functor: g.to_functor(stage, fs),
                };
            }
        }
    }
    input.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::natural_iso_check;

    fn b_z(m: usize) -> FiniteCategory {
        stock::one_object(&FiniteGroup::cyclic(m).mul, 0).unwrap()
    }

    #[test]
    fn single_stage_tower_is_valid() {
        let tower = validate_tower(vec![b_z(2)], vec![]).unwrap();
        assert_eq!(tower.n_stages(), 1);
        assert_eq!(tower.witnesses[0].endo_inverses.len(), 2);
    }

    #[test]
    fn cyclic_reduction_chain_is_valid() {
        let chain = finite_field_tower(&[1, 2, 4]).unwrap();
        let sizes: Vec<usize> = chain
            .tower
            .stages
            .iter()
            .map(|c| c.n_morphisms())
            .collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert_eq!(chain.frobenius, vec![0, 1, 1]);
        // The transition out of the deepest stage reduces modulo two.
        assert_eq!(chain.tower.transitions[1].morphism_map, vec![0, 1, 0, 1]);
        // Composite transition collapses everything to the point.
        let all = chain.tower.composite_transition(2, 0);
        assert_eq!(all.morphism_map, vec![0, 0, 0, 0]);
    }

    #[test]
    fn trivial_chain_is_the_terminal_category() {
        let chain = finite_field_tower(&[1]).unwrap();
        assert_eq!(chain.tower.stages[0].n_morphisms(), 1);
        assert_eq!(chain.frobenius, vec![0]);
    }

    #[test]
    fn non_divisible_moduli_are_rejected() {
        let err = finite_field_tower(&[2, 3]).unwrap_err();
        assert_eq!(
            err,
            ProfinError::NotDivisibilityChain {
                index: 1,
                prev: 2,
                next: 3
            }
        );
        assert_eq!(finite_field_tower(&[]).unwrap_err(), ProfinError::EmptyTower);
        assert!(matches!(
            finite_field_tower(&[0, 4]).unwrap_err(),
            ProfinError::NotDivisibilityChain { .. }
        ));
    }

    #[test]
    fn idempotent_stages_are_rejected() {
        // The two-element monoid with an absorbing idempotent.
        let idem = stock::one_object(&vec![vec![0, 1], vec![1, 1]], 0).unwrap();
        let err = validate_tower(vec![b_z(2), idem], vec![Functor::identity(&b_z(2))]).unwrap_err();
        assert_eq!(err, ProfinError::NotLayered { stage: 1, endo: 1 });
    }

    #[test]
    fn broken_transitions_are_rejected() {
        // Sends the identity to the generator: not a functor.
        let bad = Functor {
            object_map: vec![0],
            morphism_map: vec![1, 0],
        };
        let err = validate_tower(vec![b_z(2), b_z(2)], vec![bad]).unwrap_err();
        assert!(matches!(err, ProfinError::BadTransition { index: 0, .. }));
        let err = validate_tower(vec![b_z(2), b_z(2)], vec![]).unwrap_err();
        assert_eq!(
            err,
            ProfinError::TransitionCount {
                expected: 1,
                got: 0
            }
        );
        assert_eq!(validate_tower(vec![], vec![]).unwrap_err(), ProfinError::EmptyTower);
    }

    fn swap_at_stage(tower: &Tower, fs: &FinSetCat, stage: usize, period: usize) -> ContinuousFunctorStage {
        // The set {0,1} where the stage generator acts with the given
        // period (1 = trivially, 2 = by the swap).
        let order = tower.stages[stage].n_morphisms();
        let swap = fs.encode(2, 2, &[1, 0]);
        let idm = fs.encode(2, 2, &[0, 1]);
        ContinuousFunctorStage {
            stage_index: stage,
            functor: Functor {
                object_map: vec![2],
                morphism_map: (0..order)
                    .map(|g| if g % period == 0 { idm } else { swap })
                    .collect(),
            },
        }
    }

    #[test]
    fn constants_normalize_to_the_earliest_stage() {
        let chain = finite_field_tower(&[1, 2, 4]).unwrap();
        let fs = FinSetCat::new(3);
        let constant = ContinuousFunctorStage {
            stage_index: 2,
            functor: Functor {
                object_map: vec![1],
                morphism_map: vec![fs.encode(1, 1, &[0]); 4],
            },
        };
        let normalized = continuity_stage(&chain.tower, &fs, &constant);
        assert_eq!(normalized.stage_index, 0);
    }

    #[test]
    fn period_two_orbit_descends_one_stage() {
        let chain = finite_field_tower(&[1, 2, 4]).unwrap();
        let fs = FinSetCat::new(3);
        let input = swap_at_stage(&chain.tower, &fs, 2, 2);
        let normalized = continuity_stage(&chain.tower, &fs, &input);
        assert_eq!(normalized.stage_index, 1);
        // Re-expansion along the composite transition is naturally
        // isomorphic to the input.
        let t = chain.tower.composite_transition(2, 1);
        let expanded = compose_functors(&chain.tower.stages[1], &t, &normalized.functor).unwrap();
        assert!(natural_iso_check(
            &chain.tower.stages[2],
            &fs.cat,
            &expanded,
            &input.functor
        )
        .is_some());
    }

    #[test]
    fn faithful_orbit_stays_deep() {
        let chain = finite_field_tower(&[1, 2, 4]).unwrap();
        let fs = FinSetCat::new(4);
        // The free orbit of the full cyclic group of order four.
        let cycle = fs.encode(4, 4, &[1, 2, 3, 0]);
        let square = fs.encode(4, 4, &[2, 3, 0, 1]);
        let cube = fs.encode(4, 4, &[3, 0, 1, 2]);
        let idm = fs.encode(4, 4, &[0, 1, 2, 3]);
        let input = ContinuousFunctorStage {
            stage_index: 2,
            functor: Functor {
                object_map: vec![4],
                morphism_map: vec![idm, cycle, square, cube],
            },
        };
        let normalized = continuity_stage(&chain.tower, &fs, &input);
        assert_eq!(normalized.stage_index, 2);
        assert_eq!(normalized.functor, input.functor);
    }

    #[test]
    fn stage_zero_inputs_are_returned_unchanged() {
        let chain = finite_field_tower(&[2, 4]).unwrap();
        let fs = FinSetCat::new(2);
        let input = swap_at_stage(&chain.tower, &fs, 0, 2);
        let normalized = continuity_stage(&chain.tower, &fs, &input);
        assert_eq!(normalized, input);
    }
}
