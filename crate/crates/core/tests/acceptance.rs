//! Acceptance suite: one line per criterion on stdout, then a single assertion.
//!
//! Run with `cargo test -p bicyclic-core --test acceptance`. Set
//! `BICYCLIC_LONG=1` to include the GL(2,7) subgroup check.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bicyclic_core::bsn::{has_bsn_property, Obstruction};
use bicyclic_core::catalog::shipped_catalog;
use bicyclic_core::construct::{build_matrix, construct, GroupSpec};
use bicyclic_core::invariants::{is_bicyclic, is_metacyclic, min_generators_p_group, Analysis};
use bicyclic_core::lattice::subgroup_lattice;
use bicyclic_core::matrix::{LinearFamily, MatrixGF, MatrixGroup};
use bicyclic_core::normal::{normal_subgroups, sylow};
use bicyclic_core::recognize::recognize_small;
use bicyclic_core::report::{run_entries, RunOptions};
use bicyclic_core::series::{derived_series, p_length};
use bicyclic_core::verify::{verify_linear_lemmas, ClaimStatus, LinearMode, GL32_TYPES};
use bicyclic_core::{Caps, GroupHandle};
use common::{closure, derived_series_orders, elements, is_normal, p_part, product_set};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(id: &str) -> GroupHandle {
    let c = shipped_catalog();
    construct(&c.get(id).unwrap_or_else(|| panic!("catalog id {id}")).spec).unwrap()
}

fn cyclic(h: &GroupHandle) -> bool {
    h.is_abelian() && h.exponent().unwrap() == h.order()
}

fn within(start: Instant, limit: Duration) {
    let t = start.elapsed();
    assert!(t < limit, "took {t:?}, limit {limit:?}");
}

fn odd_189() {
    let start = Instant::now();
    let g = spec("bicyclic-odd-189");
    assert_eq!(g.order(), 189);
    let [a, b, c, d] = <[_; 4]>::try_from(g.generators().to_vec()).expect("four generators");
    let bd = g.subgroup(vec![b.then(&d)]).unwrap();
    let ab = g.subgroup(vec![a.then(&b)]).unwrap();
    assert_eq!((bd.order(), ab.order()), (21, 9));
    let elems_bd = elements(&bd);
    let elems_ab = elements(&ab);
    assert_eq!(product_set(&elems_bd, &elems_ab).len(), 189);
    let w = is_bicyclic(&g).unwrap().expect("bicyclic");
    assert_eq!(w.orders(), (21, 9));
    assert!(w.verify(&g));
    assert!(!is_metacyclic(&g).unwrap());
    let ns = normal_subgroups(&g).unwrap();
    let orders: Vec<u64> = ns
        .members()
        .iter()
        .filter(|n| !n.is_trivial() && n.order() != 189 && cyclic(n))
        .map(|n| n.order())
        .collect();
    assert_eq!(orders, vec![3, 7, 21]);
    let cd = g.subgroup(vec![c.then(&d)]).unwrap();
    assert_eq!(cd.order(), 21);
    assert!(cd.is_normal_in(&g));
    within(start, Duration::from_secs(5));
}

fn two_group_32() {
    let start = Instant::now();
    let g = spec("bicyclic-2group-32");
    assert_eq!(g.order(), 32);
    assert!(is_bicyclic(&g).unwrap().is_some());
    let gens = g.generators().to_vec();
    let n = g
        .subgroup(vec![gens[0].clone(), gens[1].pow(4), gens[2].clone()])
        .unwrap();
    assert_eq!(n.order(), 8);
    assert!(n.is_normal_in(&g) && n.is_abelian() && n.exponent().unwrap() == 2);
    let q = g.quotient(&n).unwrap();
    assert_eq!(q.image().order(), 4);
    assert!(cyclic(q.image()));
    assert_eq!(min_generators_p_group(&n, 2).unwrap(), 3);
    let ns = normal_subgroups(&g).unwrap();
    let worst = ns
        .members()
        .iter()
        .filter(|m| !m.is_trivial())
        .map(|m| min_generators_p_group(m, 2).unwrap())
        .max()
        .unwrap();
    assert_eq!(worst, 3);
    within(start, Duration::from_secs(5));
}

fn e49_by_2s4() {
    let start = Instant::now();
    let gl = MatrixGroup::standard(LinearFamily::GL, 2, 7, Caps::default()).unwrap();
    assert_eq!(gl.group.order(), 2016);
    let search =
        GroupSpec::parse("matrix_group(2, 7, search(GL, order=48, center=2, quotient=S4))")
            .unwrap();
    let s = build_matrix(&search, Caps::default()).unwrap();
    assert_eq!(s.group.order(), 48);
    let minus_one = MatrixGF::new(7, vec![vec![6, 0], vec![0, 6]])
        .unwrap()
        .to_linear_permutation();
    assert!(s.group.contains(&minus_one).unwrap());
    let c = s.group.subgroup(vec![minus_one]).unwrap();
    assert_eq!(c.order(), 2);
    let q = s.group.quotient(&c).unwrap();
    assert_eq!(recognize_small(q.image()).unwrap().name(), "S4");

    let g = spec("e49-by-2s4");
    let a = Analysis::new(g.clone());
    let r = a.invariants().unwrap();
    assert_eq!(r.order, 2352);
    assert_eq!(r.frattini_order, Some(1));
    assert_eq!(r.nilpotent_length, Some(4));
    assert_eq!(r.derived_length, Some(5));
    assert_eq!(
        r.chief_factor_orders.as_deref(),
        Some(&[49, 2, 4, 3, 2][..])
    );
    let w = a.bsn().unwrap();
    assert!(w.has_property);
    assert!(w.revalidate(&g).unwrap());
    within(start, Duration::from_secs(300));
}

fn e25_by_s3() {
    let start = Instant::now();
    let g = spec("e25-by-s3");
    let a = Analysis::new(g.clone());
    let r = a.invariants().unwrap();
    assert_eq!(r.order, 150);
    assert_eq!(r.a4_free, Some(true));
    assert_eq!(r.frattini_order, Some(1));
    assert_eq!(r.derived_length, Some(3));
    assert!(a.bsn().unwrap().has_property);
    within(start, Duration::from_secs(10));
}

fn p_lengths() {
    let start = Instant::now();
    let s4 = spec("s4");
    assert_eq!(p_length(&s4, 2).unwrap(), 2);
    assert!(has_bsn_property(&s4).unwrap().has_property);
    let g = spec("e9-by-sl23");
    assert_eq!(g.order(), 216);
    assert_eq!(p_length(&g, 3).unwrap(), 2);
    let w = has_bsn_property(&g).unwrap();
    assert!(w.has_property && w.revalidate(&g).unwrap());
    within(start, Duration::from_secs(30));
}

fn gl32_types() {
    let start = Instant::now();
    let g = construct(&GroupSpec::parse("matrix_group(3, 2, GL)").unwrap()).unwrap();
    let lattice = subgroup_lattice(&g).unwrap();
    let found: BTreeSet<String> = lattice
        .classes()
        .iter()
        .map(|c| {
            recognize_small(&c.representative)
                .unwrap()
                .name()
                .to_string()
        })
        .collect();
    let expected: BTreeSet<String> = GL32_TYPES.iter().map(|s| s.to_string()).collect();
    assert_eq!(found, expected);
    let r = verify_linear_lemmas(LinearMode::Gl32, Caps::default()).unwrap();
    assert_eq!(r.claim("L2.9").unwrap().status, ClaimStatus::Holds);
    within(start, Duration::from_secs(120));
}

fn gl2p_metabelian() {
    let mut primes = vec![3, 5];
    if std::env::var("BICYCLIC_LONG").is_ok_and(|v| v == "1") {
        primes.push(7);
    }
    for p in primes {
        let r = verify_linear_lemmas(LinearMode::Gl2p(p), Caps::default()).unwrap();
        let c = r.claim(&format!("L2.8-{p}")).unwrap();
        assert_eq!(c.status, ClaimStatus::Holds, "p = {p}: {}", c.detail);
    }
}

fn theorem_sweep() {
    let start = Instant::now();
    let catalog = shipped_catalog();
    assert!(catalog.entries.len() >= 30);
    let doc = run_entries("shipped", &catalog.filtered(None), RunOptions::default());
    let s = &doc.summary;
    assert_eq!(
        (s.violations, s.mismatches, s.errors),
        (0, 0, 0),
        "{:?}",
        doc.entries
            .iter()
            .flat_map(|e| e.diff())
            .collect::<Vec<_>>()
    );
    assert_eq!(s.verdict, "pass");
    for tag in ["worked-example", "p-group", "odd-rank2", "negative-control"] {
        assert!(
            catalog.entries.iter().any(|e| e.has_tag(tag)),
            "no {tag} entries"
        );
    }
    assert!(catalog.filtered(Some("worked-example")).len() >= 6);
    for e in catalog.filtered(Some("p-group")) {
        let r = doc.entry(&e.id).unwrap().invariants.as_ref().unwrap();
        assert!(r.order <= 81 && r.bicyclic, "{}", e.id);
    }
    for e in catalog.filtered(Some("odd-rank2")) {
        let r = doc.entry(&e.id).unwrap().invariants.as_ref().unwrap();
        assert!(r.odd_order && r.chief_rank.unwrap() <= 2, "{}", e.id);
    }

    let e16 = doc.entry("e16-by-z5").unwrap();
    let bsn = e16.bsn.as_ref().unwrap();
    assert_eq!(bsn.verdict, "lacks-property");
    assert_eq!(
        bsn.obstruction,
        Some(Obstruction::ChiefFactor { order: 16 })
    );

    let e27 = doc.entry("e27-by-z13").unwrap();
    let c = e27.claim("L2.5").unwrap();
    assert_eq!(c.status, ClaimStatus::Holds);
    assert_eq!(c.detail, "property = false, chief rank = 3");
    let forward = doc
        .entries
        .iter()
        .filter_map(|e| e.claim("L2.5"))
        .filter(|c| c.status == ClaimStatus::Holds && c.detail.starts_with("property = true"))
        .count();
    assert!(forward > 0);
    within(start, Duration::from_secs(600));
}

fn oracle_equivalence() {
    let catalog = shipped_catalog();
    let mut pool = Vec::new();
    for e in &catalog.entries {
        let g = construct(&e.spec).unwrap();
        if g.order() > 300 {
            continue;
        }
        let elems = elements(&g);
        assert_eq!(elems.len() as u64, g.order(), "{}", e.id);

        let series: Vec<usize> = derived_series(&g)
            .iter()
            .map(|h| h.order() as usize)
            .collect();
        assert_eq!(series, derived_series_orders(&g), "{}", e.id);

        let ns = normal_subgroups(&g).unwrap();
        let from_normal: BTreeSet<Vec<_>> = ns
            .members()
            .iter()
            .map(|n| elements(n).into_iter().collect())
            .collect();
        let lattice = subgroup_lattice(&g).unwrap();
        let mut from_lattice = BTreeSet::new();
        for class in lattice.classes() {
            let h = elements(&class.representative);
            let normal = is_normal(&h, &elems);
            assert_eq!(
                normal,
                class.size == 1,
                "{}: class of order {}",
                e.id,
                class.order
            );
            if normal {
                from_lattice.insert(h.into_iter().collect::<Vec<_>>());
            }
        }
        assert_eq!(from_normal, from_lattice, "{}", e.id);

        for p in g.prime_divisors() {
            let s = sylow(&g, p).unwrap();
            assert_eq!(s.order(), p_part(g.order(), p), "{} p = {p}", e.id);
            assert_eq!(closure(s.degree(), s.generators()).len() as u64, s.order());
        }
        let subgroups: Vec<GroupHandle> = (0..lattice.len())
            .flat_map(|i| lattice.conjugates(i))
            .collect();
        pool.push(subgroups);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let subgroups = pool.choose(&mut rng).unwrap();
        let a = &subgroups[rng.gen_range(0..subgroups.len())];
        let b = &subgroups[rng.gen_range(0..subgroups.len())];
        let meet = a.intersection(b).unwrap();
        let size = product_set(&elements(a), &elements(b)).len() as u64;
        assert_eq!(size * meet.order(), a.order() * b.order());
    }
}

fn determinism() {
    let catalog = shipped_catalog();
    let entries = catalog.filtered(None);
    let serial = run_entries(
        "shipped",
        &entries,
        RunOptions {
            jobs: 1,
            ..RunOptions::default()
        },
    );
    let parallel = run_entries(
        "shipped",
        &entries,
        RunOptions {
            jobs: 4,
            ..RunOptions::default()
        },
    );
    assert_eq!(serial.to_json(false), parallel.to_json(false));
    assert_eq!(serial.to_text(false), parallel.to_text(false));
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".to_string())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn()); 10] = [
        ("order-189 bicyclic group", odd_189),
        ("order-32 bicyclic 2-group", two_group_32),
        ("[E49]S with S/C = S4", e49_by_2s4),
        ("[E25]S3", e25_by_s3),
        ("p-lengths of S4 and [E9]SL(2,3)", p_lengths),
        ("subgroup types of GL(3,2)", gl32_types),
        ("A4-free p'-subgroups of GL(2,p)", gl2p_metabelian),
        ("theorem sweep", theorem_sweep),
        ("oracle equivalence", oracle_equivalence),
        ("report determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => writeln!(out, "criterion {}: PASS {name} ({secs:.2}s)", i + 1).unwrap(),
            Err(e) => {
                writeln!(
                    out,
                    "criterion {}: FAIL {name} ({secs:.2}s): {}",
                    i + 1,
                    panic_message(e)
                )
                .unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
