mod common;

use std::collections::BTreeMap;

use bicyclic_core::bsn::has_bsn_property;
use bicyclic_core::construct::{construct, GroupSpec};
use bicyclic_core::error::GroupError;
use bicyclic_core::group::build_group;
use bicyclic_core::lattice::subgroup_lattice;
use bicyclic_core::normal::{normal_subgroups, sylow};
use bicyclic_core::series::{chief_factor_orders, chief_series, derived_series, is_solvable};
use bicyclic_core::{GroupHandle, Permutation};
use common::{closure, derived_series_orders, elements, is_normal, p_part};
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn perms(degree: usize, count: usize) -> impl Strategy<Value = Vec<Permutation>> {
    prop::collection::vec(perm(degree), count)
}

/// Groups on at most six points generated by one to three random permutations.
fn group() -> impl Strategy<Value = GroupHandle> {
    (2usize..=6, 1usize..=3)
        .prop_flat_map(|(d, k)| perms(d, k).prop_map(move |gens| build_group(d, gens).unwrap()))
}

/// A random maximal chain of normal subgroups; every one is a chief series.
fn random_chief_orders(g: &GroupHandle, picks: &[usize]) -> Vec<u64> {
    let ns = normal_subgroups(g).unwrap();
    let mut cur = ns.trivial();
    let mut out = Vec::new();
    let mut i = 0;
    while cur != ns.full() {
        let covers = ns.covers(cur);
        let next = covers[picks[i % picks.len()] % covers.len()];
        out.push(ns.order(next) / ns.order(cur));
        cur = next;
        i += 1;
    }
    out
}

fn multiset(v: &[u64]) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for &x in v {
        *m.entry(x).or_default() += 1;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_a_group_law(p in perms(7, 3)) {
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        prop_assert_eq!(a.then(b).then(c), a.then(&b.then(c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order() as i64).is_identity());
        prop_assert_eq!(a.pow(-1), a.inverse());
        prop_assert_eq!(a.pow(3), a.then(a).then(a));
        prop_assert_eq!(Permutation::commutator(a, b), a.inverse().then(&b.inverse()).then(a).then(b));
        prop_assert_eq!(b.conjugate_by(a), a.inverse().then(b).then(a));
        prop_assert_eq!(a.then(b).image(0), b.image(a.image(0)));
    }

    #[test]
    fn chain_order_matches_closure(g in group()) {
        let elems = closure(g.degree(), g.generators());
        prop_assert_eq!(elems.len() as u64, g.order());
        prop_assert_eq!(g.closure_count().unwrap(), g.order());
        for x in elems.iter().take(20) {
            prop_assert!(g.contains(x).unwrap());
        }
    }

    #[test]
    fn membership_rejects_outsiders(g in group(), x in perm(6)) {
        let x = Permutation::from_images(x.images()[..g.degree()].to_vec());
        if let Ok(x) = x {
            prop_assert_eq!(g.contains(&x).unwrap(), elements(&g).contains(&x));
        }
    }

    #[test]
    fn derived_series_matches_commutator_closure(g in group()) {
        let ours: Vec<usize> = derived_series(&g).iter().map(|h| h.order() as usize).collect();
        prop_assert_eq!(ours, derived_series_orders(&g));
    }

    #[test]
    fn normal_subgroups_are_normal_and_complete(g in group()) {
        let elems = elements(&g);
        let ns = normal_subgroups(&g).unwrap();
        for n in ns.members() {
            prop_assert!(is_normal(&elements(n), &elems));
        }
        let lattice = subgroup_lattice(&g).unwrap();
        let normal_classes = lattice.classes().iter().filter(|c| c.size == 1).count();
        prop_assert_eq!(normal_classes, ns.len());
    }

    #[test]
    fn sylow_order_is_p_part(g in group()) {
        for p in g.prime_divisors() {
            let s = sylow(&g, p).unwrap();
            prop_assert_eq!(s.order(), p_part(g.order(), p));
            prop_assert!(s.is_subgroup_of(&g));
        }
    }

    #[test]
    fn intersection_and_join_obey_lagrange(g in group(), p in perms(6, 2)) {
        let pick = |x: &Permutation| Permutation::from_images(x.images()[..g.degree()].to_vec()).ok();
        let gens: Vec<_> = p.iter().filter_map(pick).filter(|x| g.contains(x).unwrap()).collect();
        let a = g.subgroup(gens.iter().take(1).cloned().collect()).unwrap();
        let b = g.subgroup(gens.iter().skip(1).cloned().collect()).unwrap();
        let meet = a.intersection(&b).unwrap();
        let join = a.join(&b).unwrap();
        prop_assert_eq!(a.order() % meet.order(), 0);
        prop_assert_eq!(join.order() % a.order(), 0);
        prop_assert!(join.order() * meet.order() >= a.order() * b.order());
    }

    #[test]
    fn chief_factors_are_jordan_holder_invariant(g in group(), picks in prop::collection::vec(0usize..8, 1..6)) {
        if !is_solvable(&g) {
            prop_assert!(matches!(chief_series(&g), Err(GroupError::NotSolvable)));
            return Ok(());
        }
        let ours = chief_factor_orders(&g).unwrap();
        prop_assert_eq!(ours.iter().product::<u64>(), g.order());
        prop_assert_eq!(multiset(&ours), multiset(&random_chief_orders(&g, &picks)));
        prop_assert!(chief_series(&g).unwrap().is_valid_for(&g));
    }

    #[test]
    fn bsn_witness_revalidates(g in group()) {
        let w = has_bsn_property(&g).unwrap();
        prop_assert!(w.revalidate(&g).unwrap());
        if g.is_abelian() {
            prop_assert!(w.has_property);
        }
    }

    #[test]
    fn bsn_passes_to_quotients(g in group()) {
        prop_assume!(is_solvable(&g));
        let w = has_bsn_property(&g).unwrap();
        prop_assume!(w.has_property);
        let ns = normal_subgroups(&g).unwrap();
        for n in ns.members().iter().filter(|n| !n.is_trivial()) {
            let q = g.quotient(n).unwrap();
            prop_assert!(has_bsn_property(q.image()).unwrap().has_property, "quotient by order {}", n.order());
        }
    }

    #[test]
    fn quotient_orders_multiply(g in group()) {
        let ns = normal_subgroups(&g).unwrap();
        for n in ns.members() {
            let q = g.quotient(n).unwrap();
            prop_assert_eq!(q.image().order() * n.order(), g.order());
        }
    }
}

#[test]
fn spec_display_round_trips() {
    for e in bicyclic_core::catalog::shipped_catalog().entries {
        let again = GroupSpec::parse(&e.spec.to_string()).unwrap();
        assert_eq!(again, e.spec, "{}", e.id);
        assert_eq!(
            construct(&again).unwrap().order(),
            construct(&e.spec).unwrap().order()
        );
    }
}
