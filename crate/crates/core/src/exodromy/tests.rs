use super::*;
use crate::fincat::{canonical_form, stock};
use crate::simplex::{FiniteGroup, GSet};
use crate::simplex::bar_datum;
use crate::total::build_total;

fn z2() -> FiniteGroup {
    FiniteGroup::cyclic(2)
}

fn swap_set(group: &FiniteGroup) -> GSet {
    GSet::from_table("swap", group, vec![vec![0, 1], vec![1, 0]]).unwrap()
}

fn fixed2(group: &FiniteGroup) -> GSet {
    GSet::trivial(group, 2)
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

// ---- action groupoid ----------------------------------------------------

#[test]
fn trivial_group_gives_discrete_groupoid() {
    let g = FiniteGroup::cyclic(1);
    let x = GSet::trivial(&g, 3);
    let c = action_groupoid(&g, &x);
    assert_eq!(c.n_objects(), 3);
    assert_eq!(c.n_morphisms(), 3);
    assert!((0..3).all(|m| c.is_identity(m)));
    c.validate().unwrap();
}

#[test]
fn point_action_gives_one_object_group() {
    let g = z2();
    let c = action_groupoid(&g, &GSet::point(&g));
    c.validate().unwrap();
    assert_eq!(c.n_objects(), 1);
    assert_eq!(c.n_morphisms(), 2);
    let direct = stock::one_object(&g.mul, g.identity).unwrap();
    assert_eq!(
        canonical_form(&c).bytes,
        canonical_form(&direct).bytes,
        "action groupoid of a point is the one-object group"
    );
}

#[test]
fn swap_action_groupoid_is_contractible() {
    let g = z2();
    let c = action_groupoid(&g, &swap_set(&g));
    c.validate().unwrap();
    c.is_layered().unwrap();
    assert_eq!(c.n_objects(), 2);
    assert_eq!(c.n_morphisms(), 4);
    // Every hom set is a singleton: free transitive action.
    for a in 0..2 {
        for b in 0..2 {
            assert_eq!(c.hom(a, b).len(), 1);
        }
    }
    let pres = fundamental_groupoid(&c).unwrap();
    assert_eq!(pres.components.len(), 1);
    assert_eq!(pres.components[0].order, 1);
}

#[test]
fn action_groupoid_morphisms_are_all_isos() {
    let g = FiniteGroup::symmetric(3);
    let x = GSet::from_table(
        "defining",
        &g,
        (0..3)
            .map(|p| (0..6).map(|e| g.permutation(3, e)[p]).collect())
            .collect(),
    )
    .unwrap();
    let c = action_groupoid(&g, &x);
    c.validate().unwrap();
    assert_eq!(c.n_morphisms(), 18);
    assert!((0..18).all(|m| c.is_iso(m)));
}

// ---- enumeration --------------------------------------------------------

#[test]
fn terminal_category_sheaves_are_sets() {
    let c = stock::terminal();
    let invert = vec![true; 1];
    let classes = enumerate_sheaves(&c, 2, &invert, &budget()).unwrap();
    assert_eq!(classes.len(), 3);
    let sizes: Vec<usize> = classes.iter().map(|f| f.sizes[0]).collect();
    assert_eq!(sizes, vec![0, 1, 2]);
}

#[test]
fn involution_classes_at_bound_two() {
    let g = z2();
    let c = action_groupoid(&g, &GSet::point(&g));
    let invert = vec![true; c.n_morphisms()];
    let classes = enumerate_sheaves(&c, 2, &invert, &budget()).unwrap();
    // Empty, one fixed point, two fixed points, free orbit.
    assert_eq!(classes.len(), 4);
    for f in &classes {
        f.validate(&c).unwrap();
        assert!(f.first_non_bijection(&c, 0..c.n_morphisms()).is_none());
    }
}

#[test]
fn arrow_with_nothing_inverted() {
    let c = stock::poset(2, &[(0, 1)]).unwrap();
    let invert = vec![false; c.n_morphisms()];
    let classes = enumerate_sheaves(&c, 1, &invert, &budget()).unwrap();
    // Value sizes (0,0), (0,1), (1,1); (1,0) admits no function.
    assert_eq!(classes.len(), 3);
}

#[test]
fn tiny_budget_is_reported() {
    // A free action needs no search at all (everything propagates from the
    // spanning forest), so use the one-object groupoid where the loops must
    // genuinely be branched over.
    let g = FiniteGroup::symmetric(3);
    let c = action_groupoid(&g, &GSet::point(&g));
    let invert = vec![true; c.n_morphisms()];
    let err = enumerate_sheaves(&c, 3, &invert, &SearchBudget { nodes: 3 }).unwrap_err();
    assert!(matches!(err, ExodromyError::SearchBudgetExceeded { budget: 3, .. }));
}

#[test]
fn free_actions_need_no_search_nodes() {
    let g = FiniteGroup::symmetric(3);
    let c = action_groupoid(&g, &GSet::regular(&g));
    let invert = vec![true; c.n_morphisms()];
    // Even a zero-node budget succeeds: the spanning forest plus
    // propagation determines every image, and the classes are the sets of
    // size at most three.
    let classes = enumerate_sheaves(&c, 3, &invert, &SearchBudget { nodes: 0 }).unwrap();
    assert_eq!(classes.len(), 4);
}

#[test]
fn groupoid_class_counts_match_orbit_theory() {
    let z2 = z2();
    let z3 = FiniteGroup::cyclic(3);
    let s3 = FiniteGroup::symmetric(3);
    let defining = GSet::from_table(
        "defining",
        &s3,
        (0..3)
            .map(|p| (0..6).map(|e| s3.permutation(3, e)[p]).collect())
            .collect(),
    )
    .unwrap();
    let cases: Vec<(&FiniteGroup, GSet, [usize; 3])> = vec![
        (&z2, GSet::point(&z2), [2, 4, 6]),
        (&z3, GSet::point(&z3), [2, 3, 5]),
        (&z2, swap_set(&z2), [2, 3, 4]),
        (&z2, fixed2(&z2), [4, 16, 36]),
        (&s3, defining, [2, 4, 6]),
    ];
    for (group, xset, expected) in cases {
        let c = action_groupoid(group, &xset);
        let invert = vec![true; c.n_morphisms()];
        for (ki, &want) in expected.iter().enumerate() {
            let classes = enumerate_sheaves(&c, ki + 1, &invert, &budget()).unwrap();
            assert_eq!(
                classes.len(),
                want,
                "classes for {} acting on {} at bound {}",
                group.label,
                xset.label,
                ki + 1
            );
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let g = FiniteGroup::cyclic(3);
    let c = action_groupoid(&g, &GSet::point(&g));
    let invert = vec![true; c.n_morphisms()];
    let a = enumerate_sheaves(&c, 3, &invert, &budget()).unwrap();
    let b = enumerate_sheaves(&c, 3, &invert, &budget()).unwrap();
    assert_eq!(a, b);
}

// ---- descend / assemble -------------------------------------------------

#[test]
fn constant_singleton_descends_to_trivial_sheaf() {
    let g = z2();
    let x = GSet::point(&g);
    let total = build_total(&bar_datum(&g, &x, 2));
    let f = SheafFunctor {
        functor: crate::setfun::SetFunctor::constant(&total.underlying, 1),
    };
    f.validate(&total).unwrap();
    let s = descend(&g, &x, &total, &f).unwrap();
    assert_eq!(s.sizes, vec![1]);
    assert_eq!(s.action[0][0], vec![0]);
    assert_eq!(s.action[0][1], vec![0]);
}

#[test]
fn free_orbit_round_trips_exactly() {
    let g = z2();
    let x = GSet::point(&g);
    let total = build_total(&bar_datum(&g, &x, 2));
    let free = EquivariantSheaf {
        sizes: vec![2],
        action: vec![vec![vec![0, 1], vec![1, 0]]],
    };
    free.validate(&g, &x).unwrap();
    let assembled = assemble(&g, &x, &free, &total);
    assembled.validate(&total).unwrap();
    assembled.check_cartesian_inverting(&total).unwrap();
    // All values have size two and some edge genuinely swaps.
    assert!(assembled.functor.sizes.iter().all(|&s| s == 2));
    assert!(assembled
        .functor
        .images
        .iter()
        .any(|t| t == &vec![1, 0]));
    let back = descend(&g, &x, &total, &assembled).unwrap();
    assert_eq!(back, free, "descend inverts assemble on the nose");
}

#[test]
fn non_inverting_functor_is_rejected() {
    let g = z2();
    let x = GSet::point(&g);
    let total = build_total(&bar_datum(&g, &x, 2));
    let free = EquivariantSheaf {
        sizes: vec![2],
        action: vec![vec![vec![0, 1], vec![1, 0]]],
    };
    let mut broken = assemble(&g, &x, &free, &total);
    let delta0 = crate::simplex::SimplexMap::coface(1, 0);
    let edge = total.cartesian_lift(&delta0, 0);
    broken.functor.images[edge] = vec![0, 0];
    let err = descend(&g, &x, &total, &broken).unwrap_err();
    assert_eq!(err, ExodromyError::NotCartesianInverting { edge });
}

#[test]
fn equivariant_validation_rejects_broken_multiplication() {
    let g = FiniteGroup::cyclic(3);
    let x = GSet::point(&g);
    let bad = EquivariantSheaf {
        sizes: vec![3],
        // Sends the generator to a transposition: its square should then be
        // a 3-cycle's square, but a transposition squares to the identity,
        // contradicting the table for the second power.
        action: vec![vec![
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![1, 2, 0],
        ]],
    };
    assert!(bad.validate(&g, &x).is_err());
}

// ---- verification -------------------------------------------------------

#[test]
fn involution_on_a_point_matches_with_four_classes() {
    let g = z2();
    let x = GSet::point(&g);
    let report = verify_exodromy(&g, &x, 2, 2, Route::Auto, &budget()).unwrap();
    assert_eq!(report.route_taken, Route::Direct);
    assert_eq!(report.n_classes(), 4);
    assert_eq!(report.sheaf_side.len(), 4);
    assert_eq!(report.descent_side.len(), 4);
    let mut hit: Vec<usize> = report.matched.iter().map(|&(_, j)| j).collect();
    hit.sort_unstable();
    assert_eq!(hit, vec![0, 1, 2, 3]);
}

#[test]
fn trivial_group_on_two_points_has_four_classes() {
    let g = FiniteGroup::cyclic(1);
    let x = GSet::trivial(&g, 2);
    let report = verify_exodromy(&g, &x, 1, 2, Route::Auto, &budget()).unwrap();
    assert_eq!(report.n_classes(), 4);
}

#[test]
fn swap_action_has_three_classes() {
    let g = z2();
    let x = swap_set(&g);
    let report = verify_exodromy(&g, &x, 2, 2, Route::Auto, &budget()).unwrap();
    assert_eq!(report.n_classes(), 3);
}

#[test]
fn groupoid_route_agrees_with_direct_route() {
    let g = z2();
    let x = GSet::point(&g);
    let direct = verify_exodromy(&g, &x, 2, 2, Route::Direct, &budget()).unwrap();
    let via_groupoid = verify_exodromy(&g, &x, 2, 2, Route::Groupoid, &budget()).unwrap();
    assert_eq!(direct.n_classes(), via_groupoid.n_classes());
    assert_eq!(direct.descent_side, via_groupoid.descent_side);
}

#[test]
fn small_verification_matrix() {
    let z2g = z2();
    let z3 = FiniteGroup::cyclic(3);
    let cases: Vec<(&FiniteGroup, GSet, usize, usize)> = vec![
        (&z2g, GSet::point(&z2g), 1, 2),
        (&z2g, swap_set(&z2g), 1, 2),
        (&z2g, fixed2(&z2g), 1, 4),
        (&z3, GSet::point(&z3), 2, 3),
    ];
    for (group, xset, k, expected) in cases {
        for n in [2, 3] {
            let report = verify_exodromy(group, &xset, k, n, Route::Auto, &budget()).unwrap();
            assert_eq!(
                report.n_classes(),
                expected,
                "classes for {} on {} at bound {k}, truncation {n}",
                group.label,
                xset.label
            );
        }
    }
}

#[test]
#[ignore = "heavyweight: the deep symmetric-group case, exercised by the acceptance suite"]
fn symmetric_group_deep_truncation_via_groupoid() {
    let s3 = FiniteGroup::symmetric(3);
    let defining = GSet::from_table(
        "defining",
        &s3,
        (0..3)
            .map(|p| (0..6).map(|e| s3.permutation(3, e)[p]).collect())
            .collect(),
    )
    .unwrap();
    let report = verify_exodromy(&s3, &defining, 3, 3, Route::Auto, &budget()).unwrap();
    assert_eq!(report.route_taken, Route::Groupoid);
    assert_eq!(report.n_classes(), 6);
}

// ---- fundamental groupoid ----------------------------------------------

#[test]
fn terminal_category_has_trivial_group() {
    let pres = fundamental_groupoid(&stock::terminal()).unwrap();
    assert_eq!(pres.components.len(), 1);
    assert_eq!(pres.components[0].order, 1);
    assert!(pres.components[0].generators.is_empty());
}

#[test]
fn cyclic_three_loops_have_order_three() {
    let g = FiniteGroup::cyclic(3);
    let c = stock::one_object(&g.mul, 0).unwrap();
    let pres = fundamental_groupoid(&c).unwrap();
    assert_eq!(pres.components.len(), 1);
    assert_eq!(pres.components[0].order, 3);
}

#[test]
fn total_category_of_involution_bar_has_order_two() {
    let g = z2();
    let total = build_total(&bar_datum(&g, &GSet::point(&g), 2));
    let pres = fundamental_groupoid(&total.underlying).unwrap();
    assert_eq!(pres.components.len(), 1);
    assert_eq!(pres.components[0].order, 2);
}

#[test]
fn total_category_matches_action_groupoid() {
    let g = z2();
    let x = GSet::point(&g);
    let total = build_total(&bar_datum(&g, &x, 2));
    let p = fundamental_groupoid(&total.underlying).unwrap();
    let q = fundamental_groupoid(&action_groupoid(&g, &x)).unwrap();
    assert!(groupoid_equivalent(&p, &q).unwrap());
    assert!(groupoid_equivalent(&p, &p).unwrap());
}

#[test]
fn mismatched_orders_are_inequivalent() {
    let z2c = stock::one_object(&z2().mul, 0).unwrap();
    let z3c = stock::one_object(&FiniteGroup::cyclic(3).mul, 0).unwrap();
    let p = fundamental_groupoid(&z2c).unwrap();
    let q = fundamental_groupoid(&z3c).unwrap();
    assert!(!groupoid_equivalent(&p, &q).unwrap());
}

#[test]
fn components_follow_orbits_and_groups_follow_stabilizers() {
    let g = z2();
    // Two fixed points: two components, each with the full stabilizer.
    let c = action_groupoid(&g, &fixed2(&g));
    let pres = fundamental_groupoid(&c).unwrap();
    assert_eq!(pres.components.len(), 2);
    assert!(pres.components.iter().all(|comp| comp.order == 2));
    // Defining action of the symmetric group: one orbit, stabilizer of
    // order two.
    let s3 = FiniteGroup::symmetric(3);
    let defining = GSet::from_table(
        "defining",
        &s3,
        (0..3)
            .map(|p| (0..6).map(|e| s3.permutation(3, e)[p]).collect())
            .collect(),
    )
    .unwrap();
    let pres = fundamental_groupoid(&action_groupoid(&s3, &defining)).unwrap();
    assert_eq!(pres.components.len(), 1);
    assert_eq!(pres.components[0].order, 2);
}

#[test]
fn oversized_groups_are_refused() {
    let g = FiniteGroup::cyclic(25);
    let c = stock::one_object(&g.mul, 0).unwrap();
    let err = fundamental_groupoid(&c).unwrap_err();
    assert_eq!(err, ExodromyError::OrderTooLarge { limit: MAX_GROUP_ORDER });
}

#[test]
fn relators_evaluate_to_identity_in_reconstruction() {
    let g = FiniteGroup::symmetric(3);
    let c = stock::one_object(&g.mul, 0).unwrap();
    let pres = fundamental_groupoid(&c).unwrap();
    let comp = &pres.components[0];
    assert_eq!(comp.order, 6);
    let rebuilt = reconstruct_group(comp).unwrap();
    assert_eq!(rebuilt.order(), 6);
    // The reconstructed elements are cosets; generator i corresponds to the
    // element reached from the identity coset by generator i.
    let enumerated = coset_enumeration(comp.generators.len(), &comp.relators).unwrap();
    for rel in &comp.relators {
        let mut x = rebuilt.identity;
        for &l in rel {
            let gen = (l.unsigned_abs() - 1) as usize;
            let img = enumerated.action[gen][0];
            let img = if l > 0 { img } else { rebuilt.inv[img] };
            x = rebuilt.mul[x][img];
        }
        assert_eq!(x, rebuilt.identity, "relator must evaluate to identity");
    }
    assert!(tables_isomorphic(&rebuilt, &g));
}

// ---- coset enumeration and table isomorphism ----------------------------

#[test]
fn coset_enumeration_known_orders() {
    // <a | a^3> has order three.
    assert_eq!(coset_enumeration(1, &[vec![1, 1, 1]]).unwrap().order, 3);
    // <a, b | a^2, b^2, (ab)^3> is the symmetric group on three letters.
    let s3 = coset_enumeration(2, &[vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]).unwrap();
    assert_eq!(s3.order, 6);
    // <a | a^3, a^5> collapses to the trivial group via coincidences.
    assert_eq!(
        coset_enumeration(1, &[vec![1, 1, 1], vec![1, 1, 1, 1, 1]])
            .unwrap()
            .order,
        1
    );
    // <a, b | a^2 = b, b^3> is cyclic of order six.
    assert_eq!(
        coset_enumeration(2, &[vec![1, 1, -2], vec![2, 2, 2]])
            .unwrap()
            .order,
        6
    );
    // No generators: the trivial group.
    assert_eq!(coset_enumeration(0, &[]).unwrap().order, 1);
}

#[test]
fn table_isomorphism_distinguishes_known_groups() {
    let z4 = FiniteGroup::cyclic(4);
    let klein = FiniteGroup::from_table(
        "klein",
        vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ],
    )
    .unwrap();
    assert!(!tables_isomorphic(&z4, &klein));
    assert!(tables_isomorphic(&z4, &z4));
    let s3 = FiniteGroup::symmetric(3);
    let z6 = FiniteGroup::cyclic(6);
    assert!(!tables_isomorphic(&s3, &z6));
    // Relabeled copy of the symmetric group: swap element labels 0 and 5.
    let mut relabeled = s3.mul.clone();
    let perm = |x: usize| match x {
        0 => 5,
        5 => 0,
        other => other,
    };
    let mut table = vec![vec![0usize; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            table[perm(a)][perm(b)] = perm(relabeled[a][b]);
        }
    }
    relabeled = table;
    let shuffled = FiniteGroup::from_table("shuffled", relabeled).unwrap();
    assert!(tables_isomorphic(&s3, &shuffled));
}
