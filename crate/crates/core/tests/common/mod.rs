//! Brute-force oracles that use only permutation multiplication.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use bicyclic_core::construct::{construct, GroupSpec};
use bicyclic_core::{GroupHandle, Permutation};

pub fn group(text: &str) -> GroupHandle {
    construct(&GroupSpec::parse(text).unwrap()).unwrap()
}

/// All products of `gens`, by breadth-first search from the identity.
pub fn closure(degree: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

pub fn elements(g: &GroupHandle) -> BTreeSet<Permutation> {
    closure(g.degree(), g.generators())
}

/// Subgroup generated by every commutator of `h`.
pub fn derived(h: &BTreeSet<Permutation>, degree: usize) -> BTreeSet<Permutation> {
    let comms: HashSet<Permutation> = h
        .iter()
        .flat_map(|a| h.iter().map(move |b| Permutation::commutator(a, b)))
        .collect();
    closure(degree, &comms.into_iter().collect::<Vec<_>>())
}

pub fn derived_series_orders(g: &GroupHandle) -> Vec<usize> {
    let mut cur = elements(g);
    let mut out = vec![cur.len()];
    loop {
        let next = derived(&cur, g.degree());
        if next.len() == cur.len() {
            return out;
        }
        out.push(next.len());
        cur = next;
    }
}

pub fn is_normal(h: &BTreeSet<Permutation>, g: &BTreeSet<Permutation>) -> bool {
    g.iter()
        .all(|x| h.iter().all(|y| h.contains(&y.conjugate_by(x))))
}

/// `{ab : a ∈ A, b ∈ B}`.
pub fn product_set(a: &BTreeSet<Permutation>, b: &BTreeSet<Permutation>) -> HashSet<Permutation> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.then(y)))
        .collect()
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

pub fn is_cyclic(h: &BTreeSet<Permutation>) -> bool {
    h.iter().any(|x| x.order() as usize == h.len())
}
