use super::stock::*;
use super::*;

fn z2_category() -> FiniteCategory {
    one_object(&[vec![0, 1], vec![1, 0]], 0).unwrap()
}

fn z_mod(n: usize) -> FiniteCategory {
    let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    one_object(&mul, 0).unwrap()
}

/// Two objects, all four hom sets singletons; every morphism invertible.
fn contractible_pair() -> CategoryData {
    CategoryData {
        objects: 2,
        // id0, id1, u: 0->1, v: 1->0
        morphisms: vec![(0, 0), (1, 1), (0, 1), (1, 0)],
        identity: vec![0, 1],
        compose: vec![
            (0, 0, 0),
            (1, 1, 1),
            (2, 0, 2),
            (1, 2, 2),
            (3, 1, 3),
            (0, 3, 3),
            (3, 2, 0),
            (2, 3, 1),
        ],
    }
}

#[test]
fn empty_category_is_valid() {
    let c = validate_category(&CategoryData {
        objects: 0,
        morphisms: vec![],
        identity: vec![],
        compose: vec![],
    })
    .unwrap();
    assert_eq!(c.n_objects(), 0);
    assert_eq!(c.n_morphisms(), 0);
}

#[test]
fn terminal_and_monoid_tables_validate() {
    let t = terminal();
    assert_eq!(t.n_morphisms(), 1);
    assert!(t.is_identity(0));
    let z2 = z2_category();
    assert_eq!(z2.compose(1, 1), 0);
    assert!(z2.is_iso(1));
}

#[test]
fn ill_typed_composite_is_rejected() {
    // arrow category tables plus a bogus entry composing two parallel
    // morphisms that do not line up.
    let mut data = arrow().to_data();
    data.compose.push((2, 2, 2)); // target(2) = 1 != 0 = source(2)
    assert_eq!(
        validate_category(&data).unwrap_err(),
        CategoryError::MissingComposite { g: 2, f: 2 }
    );
}

#[test]
fn missing_entry_is_rejected() {
    let mut data = arrow().to_data();
    data.compose.retain(|&(g, f, _)| !(g == 2 && f == 0));
    assert_eq!(
        validate_category(&data).unwrap_err(),
        CategoryError::MissingComposite { g: 2, f: 0 }
    );
}

#[test]
fn duplicate_entry_is_rejected() {
    let mut data = arrow().to_data();
    data.compose.push((2, 0, 2));
    assert_eq!(
        validate_category(&data).unwrap_err(),
        CategoryError::MissingComposite { g: 2, f: 0 }
    );
}

#[test]
fn broken_identity_is_rejected() {
    // Z/2 table with the unit pointing at the involution.
    let data = CategoryData {
        objects: 1,
        morphisms: vec![(0, 0), (0, 0)],
        identity: vec![1],
        compose: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
    };
    match validate_category(&data) {
        Err(CategoryError::BadIdentity { object: 0, .. }) => {}
        other => panic!("expected BadIdentity, got {other:?}"),
    }
}

#[test]
fn non_associative_table_is_rejected() {
    // Three parallel endomorphisms with a deliberately twisted table:
    // start from Z/3 addition and swap one entry pair to break
    // associativity while keeping unit laws intact.
    let mut mul: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
    mul[1][1] = 0;
    mul[2][1] = 2; // keep row/col unit laws: only non-unit entries touched
    let r = one_object(&mul, 0);
    match r {
        Err(CategoryError::NonAssociative { .. }) => {}
        other => panic!("expected NonAssociative, got {other:?}"),
    }
}

#[test]
fn iso_matches_brute_force_search() {
    for c in [terminal(), arrow(), z2_category(), z_mod(4)] {
        for m in 0..c.n_morphisms() {
            // independent brute-force inverse scan
            let mut found = None;
            for g in 0..c.n_morphisms() {
                if c.source(g) == c.target(m)
                    && c.target(g) == c.source(m)
                    && c.compose(g, m) == c.identity(c.source(m))
                    && c.compose(m, g) == c.identity(c.target(m))
                {
                    found = Some(g);
                    break;
                }
            }
            assert_eq!(c.is_iso(m), found.is_some(), "morphism {m}");
            if let Some(g) = found {
                assert_eq!(c.inverse(m), Some(g));
            }
        }
    }
}

#[test]
fn group_category_is_layered_idempotent_monoid_is_not() {
    let w = z2_category().is_layered().unwrap();
    assert_eq!(w.endo_inverses, vec![(0, 0), (1, 1)]);
    // free idempotent: {id, e} with e after e = e
    let m = one_object(&[vec![0, 1], vec![1, 1]], 0).unwrap();
    assert_eq!(m.is_layered(), Err(1));
    // posets are layered: endomorphisms are identities only
    assert!(arrow().is_layered().is_ok());
}

#[test]
fn reduction_functor_validates_and_twist_fails() {
    let z4 = z_mod(4);
    let z2 = z2_category();
    let f = Functor {
        object_map: vec![0],
        morphism_map: vec![0, 1, 0, 1], // k mod 2
    };
    validate_functor(&z4, &z2, &f).unwrap();
    let mut bad = f.clone();
    bad.morphism_map[2] = 1; // 2 no longer maps to 1+1
    match validate_functor(&z4, &z2, &bad) {
        Err(FunctorError::NotFunctorial { .. }) => {}
        other => panic!("expected NotFunctorial, got {other:?}"),
    }
}

#[test]
fn functor_composition_checks_middle() {
    let z4 = z_mod(4);
    let z2 = z2_category();
    let t = terminal();
    let f = Functor {
        object_map: vec![0],
        morphism_map: vec![0, 1, 0, 1],
    };
    let g = Functor {
        object_map: vec![0],
        morphism_map: vec![0, 0],
    };
    let gf = compose_functors(&z2, &f, &g).unwrap();
    validate_functor(&z4, &t, &gf).unwrap();
    // middle category of the wrong size
    assert_eq!(
        compose_functors(&z4, &f, &g),
        Err(FunctorError::SourceTargetMismatch)
    );
}

#[test]
fn natural_iso_on_group_functors() {
    // Both functors pick out the unique object of B(Z/2); the identity and
    // the involution are both natural automorphisms of the identity functor
    // here, so a witness must exist, and inverting it gives another witness.
    let z2 = z2_category();
    let f = Functor::identity(&z2);
    let g = Functor::identity(&z2);
    let nt = natural_iso_check(&z2, &z2, &f, &g).expect("identity functors are isomorphic");
    assert!(validate_natural_iso(&z2, &z2, &f, &g, &nt));
    let inv = nt.invert(&z2).unwrap();
    assert!(validate_natural_iso(&z2, &z2, &g, &f, &inv));
}

#[test]
fn natural_iso_rejects_mismatched_shapes() {
    // Functors from the discrete two-object category into the arrow poset
    // hitting different objects cannot be naturally isomorphic: the only
    // candidate components are non-invertible.
    let disc = poset(2, &[]).unwrap();
    let ar = arrow();
    let f = Functor {
        object_map: vec![0, 0],
        morphism_map: vec![0, 0],
    };
    let g = Functor {
        object_map: vec![1, 1],
        morphism_map: vec![1, 1],
    };
    assert!(natural_iso_check(&disc, &ar, &f, &g).is_none());
}

fn relabel(data: &CategoryData, obj_perm: &[usize], mor_perm: &[usize]) -> CategoryData {
    // perm[i] = new index of old i
    let morphisms = {
        let mut v = vec![(0usize, 0usize); data.morphisms.len()];
        for (m, &(s, t)) in data.morphisms.iter().enumerate() {
            v[mor_perm[m]] = (obj_perm[s], obj_perm[t]);
        }
        v
    };
    let mut identity = vec![0usize; data.identity.len()];
    for (o, &m) in data.identity.iter().enumerate() {
        identity[obj_perm[o]] = mor_perm[m];
    }
    let compose = data
        .compose
        .iter()
        .map(|&(g, f, gf)| (mor_perm[g], mor_perm[f], mor_perm[gf]))
        .collect();
    CategoryData {
        objects: data.objects,
        morphisms,
        identity,
        compose,
    }
}

/// Exhaustive isomorphism-of-categories search, independent of the
/// canonical-form implementation. Only for very small inputs.
fn brute_force_isomorphic(a: &FiniteCategory, b: &FiniteCategory) -> bool {
    if a.n_objects() != b.n_objects() || a.n_morphisms() != b.n_morphisms() {
        return false;
    }
    let n = a.n_objects();
    let mut perm: Vec<usize> = (0..n).collect();
    fn perms(k: usize, perm: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if k == perm.len() {
            return f(perm);
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            if perms(k + 1, perm, f) {
                perm.swap(k, i);
                return true;
            }
            perm.swap(k, i);
        }
        false
    }
    let mut check = |obj: &[usize]| -> bool {
        // try to extend obj bijection to a morphism bijection hom set by hom set
        let mut mor_map = vec![usize::MAX; a.n_morphisms()];
        fn fill(
            a: &FiniteCategory,
            b: &FiniteCategory,
            obj: &[usize],
            cells: &[(usize, usize)],
            idx: usize,
            mor_map: &mut Vec<usize>,
        ) -> bool {
            if idx == cells.len() {
                // full check: identities and composition
                for o in 0..a.n_objects() {
                    if mor_map[a.identity(o)] != b.identity(obj[o]) {
                        return false;
                    }
                }
                for g in 0..a.n_morphisms() {
                    for f in 0..a.n_morphisms() {
                        if a.composable(g, f)
                            && mor_map[a.compose(g, f)] != b.compose(mor_map[g], mor_map[f])
                        {
                            return false;
                        }
                    }
                }
                return true;
            }
            let (x, y) = cells[idx];
            let ha: Vec<usize> = a.hom(x, y).iter().map(|&m| m as usize).collect();
            let hb: Vec<usize> = b.hom(obj[x], obj[y]).iter().map(|&m| m as usize).collect();
            if ha.len() != hb.len() {
                return false;
            }
            let mut assign: Vec<usize> = (0..ha.len()).collect();
            fn go(
                k: usize,
                assign: &mut Vec<usize>,
                ha: &[usize],
                hb: &[usize],
                a: &FiniteCategory,
                b: &FiniteCategory,
                obj: &[usize],
                cells: &[(usize, usize)],
                idx: usize,
                mor_map: &mut Vec<usize>,
            ) -> bool {
                if k == assign.len() {
                    for (i, &j) in assign.iter().enumerate() {
                        mor_map[ha[i]] = hb[j];
                    }
                    if fill(a, b, obj, cells, idx + 1, mor_map) {
                        return true;
                    }
                    for &h in ha.iter() {
                        mor_map[h] = usize::MAX;
                    }
                    return false;
                }
                for i in k..assign.len() {
                    assign.swap(k, i);
                    if go(k + 1, assign, ha, hb, a, b, obj, cells, idx, mor_map) {
                        return true;
                    }
                    assign.swap(k, i);
                }
                false
            }
            go(0, &mut assign, &ha, &hb, a, b, obj, cells, idx, mor_map)
        }
        let cells: Vec<(usize, usize)> = (0..a.n_objects())
            .flat_map(|x| (0..a.n_objects()).map(move |y| (x, y)))
            .collect();
        fill(a, b, obj, &cells, 0, &mut mor_map)
    };
    perms(0, &mut perm, &mut check)
}

#[test]
fn canonical_form_separates_and_joins() {
    let corpus: Vec<CategoryData> = vec![
        terminal().to_data(),
        arrow().to_data(),
        z2_category().to_data(),
        z_mod(3).to_data(),
        poset(3, &[(0, 1), (0, 2)]).unwrap().to_data(),
        poset(3, &[(0, 2), (1, 2)]).unwrap().to_data(),
        poset(2, &[]).unwrap().to_data(),
        contractible_pair(),
    ];
    let cats: Vec<FiniteCategory> = corpus.iter().map(|d| validate_category(d).unwrap()).collect();
    for i in 0..cats.len() {
        for j in 0..cats.len() {
            let same = canonical_form(&cats[i]).bytes == canonical_form(&cats[j]).bytes;
            let iso = brute_force_isomorphic(&cats[i], &cats[j]);
            assert_eq!(same, iso, "corpus entries {i} and {j}");
        }
    }
}

#[test]
fn canonical_form_is_relabeling_invariant() {
    // two presentations of the contractible two-object groupoid
    let a = validate_category(&contractible_pair()).unwrap();
    let b = validate_category(&relabel(&contractible_pair(), &[1, 0], &[2, 3, 1, 0])).unwrap();
    assert_eq!(canonical_form(&a).bytes, canonical_form(&b).bytes);

    let data = poset(3, &[(0, 1), (1, 2)]).unwrap().to_data();
    let shuffled = relabel(&data, &[2, 0, 1], &[5, 3, 0, 4, 1, 2]);
    let c1 = validate_category(&data).unwrap();
    let c2 = validate_category(&shuffled).unwrap();
    assert_eq!(canonical_form(&c1).bytes, canonical_form(&c2).bytes);
}

#[test]
fn canonical_form_applies_its_own_relabeling() {
    for c in [arrow(), z2_category(), validate_category(&contractible_pair()).unwrap()] {
        let form = canonical_form(&c);
        assert_eq!(form.object_order.len(), c.n_objects());
        assert_eq!(form.morphism_order.len(), c.n_morphisms());
        // applying the relabeling and re-canonicalizing is stable
        let mut obj_perm = vec![0usize; c.n_objects()];
        for (pos, &o) in form.object_order.iter().enumerate() {
            obj_perm[o] = pos;
        }
        let mut mor_perm = vec![0usize; c.n_morphisms()];
        for (pos, &m) in form.morphism_order.iter().enumerate() {
            mor_perm[m] = pos;
        }
        let relabeled = validate_category(&relabel(&c.to_data(), &obj_perm, &mor_perm)).unwrap();
        assert_eq!(canonical_form(&relabeled).bytes, form.bytes);
    }
}

#[test]
fn subcategory_extraction() {
    let p = poset(3, &[(0, 1), (1, 2)]).unwrap();
    let (sub, objs, mors) = p.full_subcategory(&[0, 2]);
    assert_eq!(sub.n_objects(), 2);
    assert_eq!(sub.n_morphisms(), 3); // two identities and 0 <= 2
    sub.validate().unwrap();
    assert_eq!(objs, vec![0, 2]);
    assert_eq!(mors.len(), 3);
}

#[test]
fn component_count() {
    let p = poset(4, &[(0, 1), (2, 3)]).unwrap();
    let (comp, n) = p.components();
    assert_eq!(n, 2);
    assert_eq!(comp[0], comp[1]);
    assert_eq!(comp[2], comp[3]);
    assert_ne!(comp[0], comp[2]);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_poset() -> impl Strategy<Value = FiniteCategory> {
        (1usize..5, proptest::collection::vec((0usize..5, 0usize..5), 0..6)).prop_map(|(n, raw)| {
            let covers: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(a, b)| a < b)
                .map(|(a, b)| (a % n, b % n))
                .filter(|&(a, b)| a < b)
                .collect();
            poset(n, &covers).unwrap()
        })
    }

    proptest! {
        #[test]
        fn posets_always_validate_and_are_layered(c in arb_poset()) {
            c.validate().unwrap();
            prop_assert!(c.is_layered().is_ok());
        }

        #[test]
        fn canonical_form_survives_random_object_relabeling(
            c in arb_poset(),
            seed in proptest::array::uniform8(0u8..),
        ) {
            // derive a permutation from the seed
            let n = c.n_objects();
            let mut obj_perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (seed[i % 8] as usize) % (i + 1);
                obj_perm.swap(i, j);
            }
            let m = c.n_morphisms();
            let mut mor_perm: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                let j = (seed[(i + 3) % 8] as usize) % (i + 1);
                mor_perm.swap(i, j);
            }
            let data = c.to_data();
            let shuffled = validate_category(&relabel(&data, &obj_perm, &mor_perm)).unwrap();
            prop_assert_eq!(canonical_form(&c).bytes, canonical_form(&shuffled).bytes);
        }
    }
}
