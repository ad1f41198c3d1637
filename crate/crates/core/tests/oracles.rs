mod common;

use std::collections::BTreeSet;

use bicyclic_core::catalog::shipped_catalog;
use bicyclic_core::construct::construct;
use bicyclic_core::invariants::{is_bicyclic, is_bicyclic_exhaustive};
use bicyclic_core::normal::normal_subgroups;
use bicyclic_core::series::{chief_factor_orders, is_nilpotent};
use bicyclic_core::{GroupHandle, Permutation};
use common::{closure, elements, group, is_cyclic};

type Set = BTreeSet<Permutation>;

fn normal_closure(x: &Permutation, g: &Set, degree: usize) -> Set {
    let conj: Vec<Permutation> = g.iter().map(|y| x.conjugate_by(y)).collect();
    closure(degree, &conj)
}

fn join(a: &Set, b: &Set, degree: usize) -> Set {
    let gens: Vec<Permutation> = a.iter().chain(b).cloned().collect();
    closure(degree, &gens)
}

/// Every normal subgroup, as a join of normal closures of single elements.
fn brute_normal_subgroups(g: &GroupHandle) -> BTreeSet<Set> {
    let elems = elements(g);
    let d = g.degree();
    let atoms: BTreeSet<Set> = elems.iter().map(|x| normal_closure(x, &elems, d)).collect();
    let mut all: BTreeSet<Set> = BTreeSet::from([Set::from([Permutation::identity(d)])]);
    loop {
        let mut next = all.clone();
        for n in &all {
            for a in &atoms {
                next.insert(join(n, a, d));
            }
        }
        if next.len() == all.len() {
            return all;
        }
        all = next;
    }
}

fn brute_is_bicyclic(g: &GroupHandle) -> bool {
    let elems = elements(g);
    let cyclics: BTreeSet<Set> = elems
        .iter()
        .map(|x| closure(g.degree(), std::slice::from_ref(x)))
        .collect();
    cyclics.iter().any(|a| {
        cyclics.iter().any(|b| {
            let meet = a.intersection(b).count();
            a.len() * b.len() == elems.len() * meet
        })
    })
}

#[test]
fn normal_subgroups_match_brute_force() {
    for e in shipped_catalog().entries {
        let g = construct(&e.spec).unwrap();
        if g.order() > 200 {
            continue;
        }
        let ours: BTreeSet<Set> = normal_subgroups(&g)
            .unwrap()
            .members()
            .iter()
            .map(elements)
            .collect();
        assert_eq!(ours, brute_normal_subgroups(&g), "{}", e.id);
    }
}

#[test]
fn bicyclic_matches_brute_force() {
    for e in shipped_catalog().entries {
        let g = construct(&e.spec).unwrap();
        if g.order() > 200 {
            continue;
        }
        let expected = brute_is_bicyclic(&g);
        assert_eq!(is_bicyclic(&g).unwrap().is_some(), expected, "{}", e.id);
        assert_eq!(is_bicyclic_exhaustive(&g).unwrap(), expected, "{}", e.id);
    }
}

#[test]
fn frozen_normal_subgroup_counts() {
    let cases = [
        ("symmetric(4)", 4),
        ("dihedral(8)", 6),
        ("quaternion8", 6),
        ("alternating(4)", 3),
        ("alternating(5)", 2),
        ("direct_product(symmetric(3), symmetric(3))", 10),
        ("elementary_abelian(2, 3)", 16),
        ("cyclic(12)", 6),
    ];
    for (spec, count) in cases {
        assert_eq!(
            normal_subgroups(&group(spec)).unwrap().len(),
            count,
            "{spec}"
        );
    }
}

#[test]
fn frozen_chief_factors() {
    assert_eq!(
        chief_factor_orders(&group("symmetric(4)")).unwrap(),
        vec![4, 3, 2]
    );
    assert_eq!(
        chief_factor_orders(&group("matrix_group(2, 3, SL)")).unwrap(),
        vec![2, 4, 3]
    );
    let d8 = group("dihedral(8)");
    assert!(is_nilpotent(&d8).unwrap());
    assert_eq!(chief_factor_orders(&d8).unwrap(), vec![2, 2, 2]);
}

#[test]
fn cyclic_oracle_agrees_on_named_groups() {
    for (spec, cyclic) in [
        ("cyclic(8)", true),
        ("elementary_abelian(3, 2)", false),
        ("direct_product(cyclic(3), cyclic(5))", true),
    ] {
        assert_eq!(is_cyclic(&elements(&group(spec))), cyclic, "{spec}");
    }
}
