use super::*;
use crate::fincat::{canonical_form, stock, validate_functor};
use crate::simplex::{
    bar_datum, validate_simplicial_datum, FiniteGroup, GSet, RawSimplicialDatum,
};

fn constant_datum(c: &FiniteCategory, n: usize) -> SimplicialGaloisDatum {
    let id = Functor::identity(c);
    let raw = RawSimplicialDatum {
        truncation: n,
        fibers: vec![c.to_data(); n + 1],
        face_functors: (0..=n)
            .map(|m| if m == 0 { vec![] } else { vec![id.clone(); m + 1] })
            .collect(),
        degeneracy_functors: (0..=n)
            .map(|m| if m == n { vec![] } else { vec![id.clone(); m + 1] })
            .collect(),
    };
    validate_simplicial_datum(&raw).unwrap()
}

#[test]
fn trivial_fibers_recover_the_base() {
    let datum = constant_datum(&stock::terminal(), 2);
    let total = build_total(&datum);
    assert_eq!(total.underlying.n_objects(), 3);
    total.underlying.validate().unwrap();
    let (base, proj) = total.projection_functor();
    assert_eq!(base.n_morphisms(), total.underlying.n_morphisms());
    validate_functor(&total.underlying, &base, &proj).unwrap();
    // with terminal fibers the projection is an isomorphism of categories
    assert_eq!(
        canonical_form(&total.underlying).bytes,
        canonical_form(&base).bytes
    );
}

#[test]
fn bar_totals_have_the_expected_size() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::point(&z2), 2);
    let total = build_total(&datum);
    assert_eq!(total.underlying.n_objects(), 7);
    total.underlying.validate().unwrap();
    let (objects, morphisms) = project_total_size(&datum);
    assert_eq!(objects, 7);
    assert_eq!(morphisms, total.underlying.n_morphisms());
    // morphisms from level 0 to level 1: two base maps, two targets, one
    // fiber hom each
    let count = (0..total.underlying.n_morphisms())
        .filter(|&e| {
            total.level_of[total.underlying.source(e)] == 0
                && total.level_of[total.underlying.target(e)] == 1
        })
        .count();
    assert_eq!(count, 4);
}

#[test]
fn build_budget_is_enforced() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::point(&z2), 2);
    match build_total_guarded(&datum, 10).unwrap_err() {
        TotalError::SizeBudgetExceeded { projected, budget: 10 } => {
            assert!(projected > 10)
        }
        other => panic!("expected SizeBudgetExceeded, got {other}"),
    }
    assert!(build_total_guarded(&datum, 1_000_000).is_ok());
}

#[test]
fn bar_edges_are_all_cartesian() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::regular(&z2), 2);
    let total = build_total(&datum);
    for e in 0..total.underlying.n_morphisms() {
        assert!(total.is_cartesian(e));
    }
}

#[test]
fn poset_fibers_have_non_cartesian_edges() {
    let datum = constant_datum(&stock::arrow(), 2);
    let total = build_total(&datum);
    total.underlying.validate().unwrap();
    let arrow_edge = total.morphism_id(&SimplexMap::identity(0), 1, 2);
    assert!(!total.is_cartesian(arrow_edge));
    // identities are always cartesian
    for o in 0..total.underlying.n_objects() {
        assert!(total.is_cartesian(total.underlying.identity(o)));
    }
    // some cartesian edge over a non-identity base map exists
    assert!((0..total.underlying.n_morphisms())
        .any(|e| total.is_cartesian(e) && !total.underlying.is_identity(e)));
}

#[test]
fn fiber_slices_embed_functorially() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::point(&z2), 2);
    let total = build_total(&datum);
    for m in 0..=2 {
        let slice = total.fiber_of(m).unwrap();
        assert_eq!(slice.category.n_objects(), total.fibers[m].n_objects());
        let embed = Functor {
            object_map: slice.object_embedding.clone(),
            morphism_map: slice.morphism_embedding.clone(),
        };
        validate_functor(&slice.category, &total.underlying, &embed).unwrap();
        // the slice-to-fiber isomorphism and its inverse compose to nothing
        assert_eq!(slice.iso_to_fiber.object_map, slice.iso_from_fiber.object_map);
    }
    assert_eq!(
        total.fiber_of(5).unwrap_err(),
        TotalError::LevelOutOfRange { level: 5, truncation: 2 }
    );
    let over_one = total.fiber_of(1).unwrap();
    assert_eq!(over_one.category.n_objects(), 2);
    assert_eq!(over_one.category.n_morphisms(), 2);
}

#[test]
fn lifts_start_at_the_pulled_back_object() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::point(&z2), 2);
    let total = build_total(&datum);
    // identity base maps lift to identity edges
    for o in 0..total.underlying.n_objects() {
        let m = total.level_of[o];
        let lift = total.cartesian_lift(&SimplexMap::identity(m), total.fiber_object_of[o]);
        assert_eq!(lift, total.underlying.identity(o));
    }
    // the bottom face lift into (1, g) starts at the unique level-0 object
    for g in 0..2 {
        let lift = total.cartesian_lift(&SimplexMap::new(0, 1, vec![1]), g);
        assert_eq!(total.underlying.source(lift), total.object_id(0, 0));
        assert_eq!(total.underlying.target(lift), total.object_id(1, g));
        assert!(total.is_cartesian(lift));
    }
}

#[test]
fn every_edge_factors_uniquely_through_its_lift() {
    let datum = constant_datum(&stock::arrow(), 2);
    let total = build_total(&datum);
    for e in 0..total.underlying.n_morphisms() {
        let (fiber_edge, lift) = total.factor(e);
        assert!(total.is_cartesian(lift));
        let (id_part, _) = total.decompose(fiber_edge);
        assert!(id_part.is_identity());
        assert_eq!(total.underlying.compose(lift, fiber_edge), e);
        // uniqueness: no other fiber edge composes with the lift to e
        let alternatives = (0..total.underlying.n_morphisms())
            .filter(|&h| {
                let (s, _) = total.decompose(h);
                s.is_identity()
                    && total.underlying.composable(lift, h)
                    && total.underlying.compose(lift, h) == e
            })
            .count();
        assert_eq!(alternatives, 1, "edge {e}");
    }
}

#[test]
fn cartesian_edges_compose_to_cartesian_edges() {
    let datum = constant_datum(&stock::arrow(), 1);
    let total = build_total(&datum);
    let n = total.underlying.n_morphisms();
    for g in 0..n {
        for f in 0..n {
            if total.underlying.composable(g, f) && total.is_cartesian(g) && total.is_cartesian(f)
            {
                assert!(total.is_cartesian(total.underlying.compose(g, f)));
            }
        }
    }
}

#[test]
fn decomposition_round_trips_through_morphism_id() {
    let z3 = FiniteGroup::cyclic(3);
    let datum = bar_datum(&z3, &GSet::point(&z3), 2);
    let total = build_total(&datum);
    for e in 0..total.underlying.n_morphisms() {
        let (sigma, f) = total.decompose(e);
        let xi = total.fiber_object_of[total.underlying.target(e)];
        assert_eq!(total.morphism_id(&sigma.clone(), xi, f), e);
    }
}

#[test]
fn projection_is_a_functor_for_bar_data() {
    let z2 = FiniteGroup::cyclic(2);
    let datum = bar_datum(&z2, &GSet::trivial(&z2, 2), 2);
    let total = build_total(&datum);
    let (base, proj) = total.projection_functor();
    base.validate().unwrap();
    validate_functor(&total.underlying, &base, &proj).unwrap();
}

#[test]
fn dot_export_styles_cartesian_edges() {
    let datum = constant_datum(&stock::arrow(), 1);
    let total = build_total(&datum);
    let dot = total.to_dot();
    assert!(dot.starts_with("digraph total {"));
    assert!(dot.contains("style=solid"));
    assert!(dot.contains("style=dashed"));
    // deterministic rendering
    assert_eq!(dot, total.to_dot());
    // identity loops are omitted: no self-edge on object 0 with empty label
    let lines: Vec<&str> = dot.lines().collect();
    let edge_count = lines.iter().filter(|l| l.contains("->")).count();
    let expected = (0..total.underlying.n_morphisms())
        .filter(|&e| !total.underlying.is_identity(e))
        .count();
    assert_eq!(edge_count, expected);
}
