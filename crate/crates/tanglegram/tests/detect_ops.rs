//! Integration tests for obstruction detection: agreement with the
//! definition-level brute force, associated-graph planarity against an
//! independent rotation-system oracle, and the structural scar rules that
//! hold around a unique obstruction.

mod common;

use common::{brute_cross_responsible, rotation_planar};
use tanglegram::detect::{
    associated_graph, cross_responsible_sets, is_planar_graph, scar_type,
    validate_obstruction_lemmas, CrossResponsibleSet, Kind, K2_ALLOWED_SCAR_TYPES,
};
use tanglegram::gen::{build_family, enumerate_tanglegrams, random_tanglegram, Family};
use tanglegram::model::{scar_of, Tanglegram};

#[test]
fn associated_graph_planarity_matches_the_rotation_oracle() {
    for n in 1..=5 {
        for tg in enumerate_tanglegrams(n).unwrap().iter() {
            let g = associated_graph(&tg);
            assert_eq!(is_planar_graph(&g), rotation_planar(&g), "size {n}");
        }
    }
    for i in 0..60u64 {
        let n = 6 + (i as usize) % 2;
        let tg = random_tanglegram(n, 0xD0_u64.wrapping_add(i)).unwrap();
        let g = associated_graph(&tg);
        assert_eq!(is_planar_graph(&g), rotation_planar(&g), "size {n} seed {i}");
    }
}

#[test]
fn obstructions_exist_exactly_when_the_associated_graph_is_nonplanar() {
    for n in 1..=5 {
        for tg in enumerate_tanglegrams(n).unwrap().iter() {
            let planar = is_planar_graph(&associated_graph(&tg));
            assert_eq!(planar, cross_responsible_sets(&tg).is_empty(), "size {n}");
        }
    }
    for i in 0..200u64 {
        let n = 6 + (i as usize) % 5;
        let tg = random_tanglegram(n, 0x7A57_u64.wrapping_add(i)).unwrap();
        let planar = is_planar_graph(&associated_graph(&tg));
        assert_eq!(
            planar,
            cross_responsible_sets(&tg).is_empty(),
            "size {n} seed {i}"
        );
    }
}

#[test]
fn enumeration_matches_the_definition_level_brute_force() {
    let compare = |tg: &Tanglegram, context: &str| {
        let found: Vec<Vec<usize>> = cross_responsible_sets(tg)
            .iter()
            .map(|x| x.edges.to_vec())
            .collect();
        assert_eq!(found, brute_cross_responsible(tg), "{context}");
    };
    for tg in enumerate_tanglegrams(4).unwrap().iter() {
        compare(&tg, "size 4");
    }
    for i in 0..40u64 {
        let n = 5 + (i as usize) % 5;
        let tg = random_tanglegram(n, 0xB127_u64.wrapping_add(i)).unwrap();
        compare(&tg, &format!("size {n} seed {i}"));
    }
}

/// Draws random tanglegrams of the given sizes until `want` of them have a
/// unique cross-responsible set of the requested kind, and hands each to
/// `check`. Size 8 favors the balanced kind; 7 through 10 all yield the
/// caterpillar kind readily.
fn hunt_unique(
    kind: Kind,
    sizes: &[usize],
    want: usize,
    mut check: impl FnMut(&Tanglegram, &CrossResponsibleSet),
) {
    let mut found = 0;
    for i in 0..4000u64 {
        if found >= want {
            return;
        }
        let n = sizes[(i as usize) % sizes.len()];
        let tg = random_tanglegram(n, 0x4B1D_u64.wrapping_add(i)).unwrap();
        let sets = cross_responsible_sets(&tg);
        if sets.len() != 1 || sets[0].kind != kind {
            continue;
        }
        found += 1;
        check(&tg, &sets[0]);
    }
    assert!(found >= want, "only {found} unique copies of {kind:?} found");
}

#[test]
fn unique_balanced_copies_scar_root_edges_and_never_leaf_edges() {
    let check = |tg: &Tanglegram, x: &CrossResponsibleSet| {
        assert!(validate_obstruction_lemmas(tg, x).is_empty());
        for m in 0..tg.size() {
            if x.edges.contains(&m) {
                continue;
            }
            let rec = scar_of(tg, &x.induced, m).unwrap();
            assert!(
                rec.left_outside || rec.right_outside,
                "edge {m} avoids both root edges"
            );
            assert!(!x.induced.left.contracted.is_leaf(rec.left_scar));
            assert!(!x.induced.right.contracted.is_leaf(rec.right_scar));
        }
    };
    for m in 1..=3 {
        let tg = build_family(Family::T1, m).unwrap();
        let sets = cross_responsible_sets(&tg);
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].kind, Kind::K1);
        check(&tg, &sets[0]);
    }
    hunt_unique(Kind::K1, &[5, 6], 25, check);
}

#[test]
fn unique_caterpillar_copies_obey_the_scar_table() {
    hunt_unique(Kind::K2, &[7, 8, 9, 10], 25, |tg, x| {
        assert!(validate_obstruction_lemmas(tg, x).is_empty());
        let mut on_d1 = 0;
        let mut on_d2 = 0;
        for m in 0..tg.size() {
            if x.edges.contains(&m) {
                continue;
            }
            let (l, r) = scar_type(tg, x, m).unwrap();
            let ty = (l.as_str(), r.as_str());
            assert!(
                K2_ALLOWED_SCAR_TYPES.contains(&ty),
                "edge {m} has forbidden scar type {ty:?}"
            );
            match ty {
                ("d1", "f2") => on_d1 += 1,
                ("f1", "d2") => on_d2 += 1,
                _ => {}
            }
        }
        assert!(
            on_d1 == 0 || on_d2 == 0,
            "both middle edges carry scars ({on_d1} and {on_d2})"
        );
    });
}
