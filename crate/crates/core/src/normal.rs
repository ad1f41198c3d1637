//! Normal subgroups, cores, Sylow and normal Hall subgroups.

use std::cmp::Ordering;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::chain::StabChain;
use crate::error::{GroupError, Result};
use crate::group::GroupHandle;
use crate::lattice::ElementIndex;
use crate::perm::Permutation;
use crate::util::{is_pi_number, is_prime, p_part};

/// All normal subgroups of a group, sorted by order and then by sorted element list.
///
/// Index 0 is the trivial subgroup and the last index is the whole group.
pub struct NormalSet {
    group: GroupHandle,
    index: Arc<ElementIndex>,
    members: Vec<GroupHandle>,
    bits: Vec<FixedBitSet>,
    lookup: FxHashMap<FixedBitSet, usize>,
    /// `below[i]` holds every `j` with member `j ⊆` member `i`.
    below: Vec<FixedBitSet>,
}

fn cmp_sorted(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.ones().cmp(b.ones())
}

/// Join-closure of the normal closures of conjugacy-class representatives.
pub fn normal_subgroups(g: &GroupHandle) -> Result<NormalSet> {
    let index = Arc::new(ElementIndex::new(g)?);
    let mut found: Vec<(FixedBitSet, GroupHandle)> = Vec::new();
    let mut lookup: FxHashMap<FixedBitSet, usize> = FxHashMap::default();
    let mut add = |h: GroupHandle, found: &mut Vec<(FixedBitSet, GroupHandle)>| -> Result<bool> {
        let b = index.bits_of(&h)?;
        if lookup.contains_key(&b) {
            return Ok(false);
        }
        lookup.insert(b.clone(), found.len());
        found.push((b, h));
        Ok(true)
    };
    add(g.subgroup_unchecked(Vec::new()), &mut found)?;
    for x in g.conjugacy_classes()?.representatives {
        if !x.is_identity() {
            add(g.normal_closure_unchecked(vec![x]), &mut found)?;
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let (a, b) = (&found[i].0, &found[j].0);
            if a.is_subset(b) || b.is_subset(a) {
                continue;
            }
            let join = found[i].1.join(&found[j].1)?;
            add(join, &mut found)?;
        }
        i += 1;
    }
    found.sort_by(|a, b| {
        a.1.order()
            .cmp(&b.1.order())
            .then_with(|| cmp_sorted(&a.0, &b.0))
    });
    let (bits, members): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let lookup: FxHashMap<FixedBitSet, usize> = bits
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();
    let n = bits.len();
    let below = (0..n)
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            for j in 0..=i {
                if bits[j].is_subset(&bits[i]) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    Ok(NormalSet {
        group: g.clone(),
        index,
        members,
        bits,
        lookup,
        below,
    })
}

impl NormalSet {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupHandle] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &GroupHandle {
        &self.members[i]
    }

    pub fn order(&self, i: usize) -> u64 {
        self.members[i].order()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn full(&self) -> usize {
        self.members.len() - 1
    }

    /// Member `i ⊆` member `j`.
    pub fn is_subset(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let mut b = self.bits[i].clone();
        b.intersect_with(&self.bits[j]);
        self.lookup[&b]
    }

    /// Smallest member containing both.
    pub fn join(&self, i: usize, j: usize) -> usize {
        (0..self.len())
            .find(|&k| self.is_subset(i, k) && self.is_subset(j, k))
            .expect("the whole group contains everything")
    }

    /// Position of `h` in the set, if `h` is a normal subgroup of the ambient group.
    pub fn index_of(&self, h: &GroupHandle) -> Option<usize> {
        let b = self.index.bits_of(h).ok()?;
        self.lookup.get(&b).copied()
    }

    /// Members `M ⊇ N` (given by index), ascending.
    pub fn above(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (n..self.len()).filter(move |&m| self.is_subset(n, m))
    }

    /// Members `M` covering `N`: `N < M` with nothing strictly between.
    pub fn covers(&self, n: usize) -> Vec<usize> {
        let ups: Vec<usize> = self.above(n).filter(|&m| m != n).collect();
        ups.iter()
            .copied()
            .filter(|&m| !ups.iter().any(|&k| k != m && self.is_subset(k, m)))
            .collect()
    }

    /// Largest member `M ⊇ N` with `|M : N|` satisfying `pred`, when such members are join-closed.
    pub(crate) fn largest_above(&self, n: usize, pred: impl Fn(u64) -> bool) -> usize {
        let on = self.order(n);
        let mut best = n;
        for m in self.above(n) {
            if pred(self.order(m) / on) && self.order(m) > self.order(best) {
                best = m;
            }
        }
        best
    }

    /// Minimal nontrivial members.
    pub fn minimal(&self) -> Vec<usize> {
        self.covers(0)
    }
}

/// Minimal normal subgroups; each is checked to be elementary abelian when `G` is solvable.
pub fn minimal_normal_subgroups(g: &GroupHandle) -> Result<Vec<GroupHandle>> {
    let ns = normal_subgroups(g)?;
    let solvable = crate::series::is_solvable(g);
    let mut out = Vec::new();
    for i in ns.minimal() {
        let m = ns.member(i).clone();
        if solvable {
            let ok = m.is_abelian()
                && crate::util::prime_power(m.order())
                    .is_some_and(|(p, _)| m.exponent().ok() == Some(p));
            if !ok {
                return Err(GroupError::Precondition(
                    "minimal normal subgroup of a solvable group is not elementary abelian"
                        .to_string(),
                ));
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// `(O_p(G), O_p′(G))`.
pub fn core_subgroups(g: &GroupHandle, p: u64) -> Result<(GroupHandle, GroupHandle)> {
    let ns = normal_subgroups(g)?;
    let (op, opp) = cores_in(&ns, 0, p);
    Ok((ns.member(op).clone(), ns.member(opp).clone()))
}

/// Preimages of `O_p(G/N)` and `O_p′(G/N)` for `N` given by index.
pub(crate) fn cores_in(ns: &NormalSet, n: usize, p: u64) -> (usize, usize) {
    let op = ns.largest_above(n, |k| p_part(k, p) == k);
    let opp = ns.largest_above(n, |k| k % p != 0);
    (op, opp)
}

/// Outcome of [`normal_hall`].
#[derive(Debug, Clone)]
pub enum HallOutcome {
    Present(GroupHandle),
    /// The π-elements generate a subgroup of this order, not the π-part.
    Absent {
        achieved_order: u64,
        pi_part: u64,
    },
}

impl HallOutcome {
    pub fn subgroup(&self) -> Option<&GroupHandle> {
        match self {
            HallOutcome::Present(h) => Some(h),
            HallOutcome::Absent { .. } => None,
        }
    }
}

/// The normal Hall π-subgroup, generated by all π-elements when it exists.
pub fn normal_hall(g: &GroupHandle, pi: &[u64]) -> Result<HallOutcome> {
    let pi_part: u64 = pi
        .iter()
        .filter(|p| is_prime(**p))
        .map(|&p| p_part(g.order(), p))
        .product();
    let mut chain = StabChain::new(g.degree());
    let mut gens = Vec::new();
    for x in g.elements()?.iter() {
        if is_pi_number(x.order(), pi) && !chain.contains(x) {
            chain.extend(x);
            gens.push(x.clone());
        }
    }
    let h = g.subgroup_unchecked(gens);
    if h.order() == pi_part {
        Ok(HallOutcome::Present(h))
    } else {
        Ok(HallOutcome::Absent {
            achieved_order: h.order(),
            pi_part,
        })
    }
}

/// A Sylow p-subgroup, grown inside normalizers from the trivial group.
pub fn sylow(g: &GroupHandle, p: u64) -> Result<GroupHandle> {
    grow_sylow(g, p, g.trivial_subgroup())
}

/// A Sylow p-subgroup containing the p-element `seed`.
pub fn sylow_from_seed(g: &GroupHandle, p: u64, seed: &Permutation) -> Result<GroupHandle> {
    if !g.contains(seed)? || p_part(seed.order(), p) != seed.order() {
        return Err(GroupError::Input(format!(
            "{seed} is not a {p}-element of the group"
        )));
    }
    grow_sylow(g, p, g.subgroup_unchecked(vec![seed.clone()]))
}

fn grow_sylow(g: &GroupHandle, p: u64, mut s: GroupHandle) -> Result<GroupHandle> {
    let target = p_part(g.order(), p);
    while s.order() < target {
        let n = g.normalizer(&s)?;
        let mut elems = n.elements()?.as_ref().clone();
        elems.sort();
        let z = elems
            .into_iter()
            .find(|z| {
                let o = z.order();
                o > 1 && p_part(o, p) == o && !s.has(z) && s.has(&z.pow(p as i64))
            })
            .ok_or_else(|| {
                GroupError::Precondition("normalizer has no p-element outside P".to_string())
            })?;
        let mut gens = s.generators().to_vec();
        gens.push(z);
        s = g.subgroup_unchecked(gens);
    }
    Ok(s)
}

/// Some `x ∈ G` with `Pˣ = Q`, by search over the elements.
pub fn conjugating_element(
    g: &GroupHandle,
    p: &GroupHandle,
    q: &GroupHandle,
) -> Result<Option<Permutation>> {
    if p.order() != q.order() {
        return Ok(None);
    }
    let mut elems = g.elements()?.as_ref().clone();
    elems.sort();
    Ok(elems
        .into_iter()
        .find(|x| p.generators().iter().all(|h| q.has(&h.conjugate_by(x)))))
}
