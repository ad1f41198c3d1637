//! Derived, Fitting, p- and chief series, supersolvability and Sylow towers.

use serde::Serialize;

use crate::error::{GroupError, Result};
use crate::group::GroupHandle;
use crate::normal::{cores_in, normal_hall, normal_subgroups, HallOutcome, NormalSet};
use crate::util::{factorize, prime_power};

/// Description of one factor `G_{i+1}/G_i` of a series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorDescriptor {
    pub order: u64,
    pub factorization: Vec<(u64, u32)>,
}

impl FactorDescriptor {
    pub fn new(order: u64) -> Self {
        FactorDescriptor {
            order,
            factorization: factorize(order),
        }
    }
}

/// An ascending chain `1 = G₀ < G₁ < … < G_m = G` of normal subgroups.
#[derive(Debug, Clone)]
pub struct SeriesWitness {
    pub chain: Vec<GroupHandle>,
    pub factors: Vec<FactorDescriptor>,
}

impl SeriesWitness {
    pub fn from_chain(chain: Vec<GroupHandle>) -> Self {
        let factors = chain
            .windows(2)
            .map(|w| FactorDescriptor::new(w[1].order() / w[0].order()))
            .collect();
        SeriesWitness { chain, factors }
    }

    pub fn factor_orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    /// Strictly ascending, each member normal in `g`, ends at `g`, starts at 1.
    pub fn is_valid_for(&self, g: &GroupHandle) -> bool {
        let first_ok = self.chain.first().is_some_and(|h| h.is_trivial());
        let last_ok = self.chain.last().is_some_and(|h| h.same_group(g));
        first_ok
            && last_ok
            && self.chain.iter().all(|h| h.is_normal_in(g))
            && self
                .chain
                .windows(2)
                .all(|w| w[0].order() < w[1].order() && w[0].is_subgroup_of(&w[1]))
    }
}

/// `G, G′, G″, …` down to the first repeated term.
pub fn derived_series(g: &GroupHandle) -> Vec<GroupHandle> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_trivial() {
            break;
        }
        let next = last.derived();
        if next.order() == last.order() {
            break;
        }
        series.push(next);
    }
    series
}

pub fn is_solvable(g: &GroupHandle) -> bool {
    derived_series(g).last().is_some_and(|h| h.is_trivial())
}

pub fn derived_length(g: &GroupHandle) -> Result<u32> {
    let s = derived_series(g);
    if s.last().is_some_and(|h| h.is_trivial()) {
        Ok(s.len() as u32 - 1)
    } else {
        Err(GroupError::NotSolvable)
    }
}

/// Preimage of `F(G/N)`: the join of the preimages of `O_p(G/N)`.
pub(crate) fn fitting_above(ns: &NormalSet, n: usize) -> usize {
    let g_order = ns.order(ns.full());
    let mut acc = n;
    for (p, _) in factorize(g_order / ns.order(n)) {
        let (op, _) = cores_in(ns, n, p);
        acc = ns.join(acc, op);
    }
    acc
}

pub fn fitting(g: &GroupHandle) -> Result<GroupHandle> {
    let ns = normal_subgroups(g)?;
    Ok(ns.member(fitting_above(&ns, 0)).clone())
}

/// Ascending Fitting series `1 < F₁ < F₂ < … < G`.
pub(crate) fn fitting_series_in(ns: &NormalSet) -> Result<Vec<usize>> {
    let mut chain = vec![0];
    let mut cur = 0;
    while cur != ns.full() {
        let next = fitting_above(ns, cur);
        if next == cur {
            return Err(GroupError::NotSolvable);
        }
        chain.push(next);
        cur = next;
    }
    Ok(chain)
}

pub fn nilpotent_length(g: &GroupHandle) -> Result<u32> {
    let ns = normal_subgroups(g)?;
    Ok(fitting_series_in(&ns)?.len() as u32 - 1)
}

pub(crate) fn p_length_in(ns: &NormalSet, p: u64) -> Result<u32> {
    let mut cur = 0;
    let mut layers = 0;
    loop {
        let (_, opp) = cores_in(ns, cur, p);
        cur = opp;
        if cur == ns.full() {
            return Ok(layers);
        }
        let (op, _) = cores_in(ns, cur, p);
        if op == cur {
            return Err(GroupError::NotSolvable);
        }
        layers += 1;
        cur = op;
    }
}

/// Number of p-layers in the upper `p′`-`p` series.
pub fn p_length(g: &GroupHandle, p: u64) -> Result<u32> {
    p_length_in(&normal_subgroups(g)?, p)
}

/// Chief series choosing, at each step, the cover picked by `choose` from the candidates.
pub(crate) fn chief_series_in_with(
    ns: &NormalSet,
    from: usize,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> Vec<usize> {
    let mut chain = vec![from];
    let mut cur = from;
    while cur != ns.full() {
        let covers = ns.covers(cur);
        cur = covers[choose(&covers)];
        chain.push(cur);
    }
    chain
}

/// Deterministic choice: smallest order, then smallest index.
pub(crate) fn chief_series_in(ns: &NormalSet, from: usize) -> Vec<usize> {
    chief_series_in_with(ns, from, &mut |covers| {
        (0..covers.len())
            .min_by_key(|&i| (ns.order(covers[i]), covers[i]))
            .expect("a proper member has covers")
    })
}

fn chain_factor_orders(ns: &NormalSet, chain: &[usize]) -> Vec<u64> {
    chain
        .windows(2)
        .map(|w| ns.order(w[1]) / ns.order(w[0]))
        .collect()
}

/// The chief factors from `N` up to `G` are all of prime order.
pub(crate) fn supersolvable_above(ns: &NormalSet, n: usize) -> bool {
    chain_factor_orders(ns, &chief_series_in(ns, n))
        .iter()
        .all(|&o| crate::util::is_prime(o))
}

/// A chief series; fails with `NotSolvable` when some chief factor is nonabelian.
pub fn chief_series(g: &GroupHandle) -> Result<SeriesWitness> {
    let ns = normal_subgroups(g)?;
    let chain = chief_series_in(&ns, 0);
    chief_witness(&ns, &chain)
}

pub(crate) fn chief_witness(ns: &NormalSet, chain: &[usize]) -> Result<SeriesWitness> {
    if chain_factor_orders(ns, chain)
        .iter()
        .any(|&o| prime_power(o).is_none())
    {
        return Err(GroupError::NotSolvable);
    }
    Ok(SeriesWitness::from_chain(
        chain.iter().map(|&i| ns.member(i).clone()).collect(),
    ))
}

pub fn chief_factor_orders(g: &GroupHandle) -> Result<Vec<u64>> {
    Ok(chief_series(g)?.factor_orders())
}

/// Largest `k` such that some chief factor has order `p^k`.
pub fn chief_rank(g: &GroupHandle, p: u64) -> Result<u32> {
    Ok(rank_of(&chief_factor_orders(g)?, p))
}

pub(crate) fn rank_of(orders: &[u64], p: u64) -> u32 {
    orders
        .iter()
        .filter_map(|&o| prime_power(o))
        .filter(|&(q, _)| q == p)
        .map(|(_, k)| k)
        .max()
        .unwrap_or(0)
}

pub fn is_supersolvable(g: &GroupHandle) -> Result<bool> {
    Ok(supersolvable_above(&normal_subgroups(g)?, 0))
}

/// Index of the supersolvable residual in the normal set.
pub(crate) fn supersolvable_residual_in(ns: &NormalSet) -> usize {
    (0..ns.len())
        .filter(|&n| supersolvable_above(ns, n))
        .fold(ns.full(), |acc, n| ns.meet(acc, n))
}

/// Intersection of all normal `N` with `G/N` supersolvable.
pub fn supersolvable_residual(g: &GroupHandle) -> Result<GroupHandle> {
    let ns = normal_subgroups(g)?;
    Ok(ns.member(supersolvable_residual_in(&ns)).clone())
}

/// Ordered Sylow tower of supersolvable type: normal Hall subgroups for
/// `{p₁}, {p₁, p₂}, …` with `p₁ > p₂ > …`. Returns the tower when it exists.
pub fn sylow_tower_supersolvable(g: &GroupHandle) -> Result<Option<SeriesWitness>> {
    let mut primes = g.prime_divisors();
    primes.reverse();
    let mut chain = vec![g.trivial_subgroup()];
    for i in 0..primes.len() {
        match normal_hall(g, &primes[..=i])? {
            HallOutcome::Present(h) => chain.push(h),
            HallOutcome::Absent { .. } => return Ok(None),
        }
    }
    Ok(Some(SeriesWitness::from_chain(chain)))
}

pub fn is_nilpotent(g: &GroupHandle) -> Result<bool> {
    for p in g.prime_divisors() {
        if normal_hall(g, &[p])?.subgroup().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, GroupSpec};

    fn group(text: &str) -> GroupHandle {
        construct(&GroupSpec::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn derived_lengths() {
        assert_eq!(derived_length(&group("cyclic(1)")).unwrap(), 0);
        assert_eq!(derived_length(&group("cyclic(6)")).unwrap(), 1);
        assert_eq!(derived_length(&group("symmetric(4)")).unwrap(), 3);
        assert!(matches!(
            derived_length(&group("alternating(5)")),
            Err(GroupError::NotSolvable)
        ));
        assert!(!is_solvable(&group("matrix_group(3, 2, GL)")));
    }

    #[test]
    fn fitting_and_nilpotent_length() {
        let s4 = group("symmetric(4)");
        assert_eq!(fitting(&s4).unwrap().order(), 4);
        assert_eq!(nilpotent_length(&s4).unwrap(), 3);
        assert_eq!(nilpotent_length(&group("dihedral(16)")).unwrap(), 1);
        assert!(matches!(
            nilpotent_length(&group("alternating(5)")),
            Err(GroupError::NotSolvable)
        ));
    }

    #[test]
    fn p_lengths() {
        let s4 = group("symmetric(4)");
        assert_eq!(p_length(&s4, 2).unwrap(), 2);
        assert_eq!(p_length(&s4, 3).unwrap(), 1);
        assert_eq!(p_length(&s4, 5).unwrap(), 0);
        assert_eq!(p_length(&group("quaternion8"), 2).unwrap(), 1);
    }

    #[test]
    fn chief_series_of_s4_and_cyclic() {
        let s = chief_series(&group("symmetric(4)")).unwrap();
        assert_eq!(s.factor_orders(), vec![4, 3, 2]);
        assert!(s.is_valid_for(&group("symmetric(4)")));
        assert_eq!(
            chief_factor_orders(&group("cyclic(27)")).unwrap(),
            vec![3, 3, 3]
        );
        assert_eq!(chief_rank(&group("symmetric(4)"), 2).unwrap(), 2);
        assert!(matches!(
            chief_series(&group("alternating(5)")),
            Err(GroupError::NotSolvable)
        ));
    }

    #[test]
    fn supersolvability() {
        let s4 = group("symmetric(4)");
        assert!(!is_supersolvable(&s4).unwrap());
        assert_eq!(supersolvable_residual(&s4).unwrap().order(), 4);
        assert!(is_supersolvable(&group("dihedral(12)")).unwrap());
        assert!(supersolvable_residual(&group("dihedral(12)"))
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn sylow_towers() {
        assert!(sylow_tower_supersolvable(&group("symmetric(4)"))
            .unwrap()
            .is_none());
        let t = sylow_tower_supersolvable(&group("dihedral(10)"))
            .unwrap()
            .unwrap();
        assert_eq!(t.factor_orders(), vec![5, 2]);
        assert!(sylow_tower_supersolvable(&group("dihedral(16)"))
            .unwrap()
            .is_some());
        assert!(is_nilpotent(&group("quaternion8")).unwrap());
        assert!(!is_nilpotent(&group("symmetric(3)")).unwrap());
    }
}
