//! Base-image backtrack for intersections of large groups.

use crate::chain::StabChain;
use crate::group::GroupHandle;
use crate::perm::Permutation;

/// `A ∩ B` by walking the transversal tree of `A` and pruning every partial
/// base image that no element of `B` can realise.
pub(crate) fn intersection(a: &GroupHandle, b: &GroupHandle) -> GroupHandle {
    let degree = a.degree();
    let a_chain = a.chain();
    let base = a_chain.base();
    let mut b_chain = StabChain::with_base_prefix(degree, base.clone());
    for g in b.generators() {
        b_chain.extend(g);
    }
    let transversals: Vec<Vec<(u32, Permutation)>> = (0..a_chain.depth())
        .map(|i| a_chain.level_transversal(i))
        .collect();

    let mut found = StabChain::new(degree);
    let mut gens = Vec::new();
    let id = Permutation::identity(degree);
    search(
        &transversals,
        &base,
        &b_chain,
        b,
        0,
        &id,
        &id,
        &mut found,
        &mut gens,
    );
    a.subgroup_unchecked(gens)
}

#[allow(clippy::too_many_arguments)]
fn search(
    transversals: &[Vec<(u32, Permutation)>],
    base: &[u32],
    b_chain: &StabChain,
    b: &GroupHandle,
    level: usize,
    partial: &Permutation,
    strip: &Permutation,
    found: &mut StabChain,
    gens: &mut Vec<Permutation>,
) {
    if level == transversals.len() {
        if !found.contains(partial) && b.has(partial) {
            found.extend(partial);
            gens.push(partial.clone());
        }
        return;
    }
    let beta = base[level];
    for (_, u) in &transversals[level] {
        let t = u.then(partial);
        let delta = strip.image(t.image(beta));
        let next_strip = if level < b_chain.depth() {
            if !b_chain.level_orbit_contains(level, delta) {
                continue;
            }
            b_chain.level_strip(level, strip.clone(), delta)
        } else {
            if delta != beta {
                continue;
            }
            strip.clone()
        };
        search(
            transversals,
            base,
            b_chain,
            b,
            level + 1,
            &t,
            &next_strip,
            found,
            gens,
        );
    }
}
