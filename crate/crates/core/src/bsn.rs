//! Normal series whose factors have bicyclic Sylow subgroups.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::Result;
use crate::group::GroupHandle;
use crate::invariants::{is_bicyclic, Analysis, BicyclicWitness};
use crate::normal::{sylow, NormalSet};
use crate::series::{chief_series_in, SeriesWitness};
use crate::util::{is_bounded_chief_order, p_part};

/// A bicyclic Sylow subgroup of one factor.
#[derive(Debug, Clone)]
pub struct PrimeEvidence {
    pub p: u64,
    /// Sylow subgroup of the factor group, in its coset action.
    pub sylow: GroupHandle,
    pub witness: BicyclicWitness,
}

/// Bicyclic Sylow subgroups of `M/N` for every prime dividing `|M:N|`.
#[derive(Debug, Clone)]
pub struct FactorEvidence {
    pub lower: GroupHandle,
    pub upper: GroupHandle,
    pub primes: Vec<PrimeEvidence>,
}

impl FactorEvidence {
    pub fn factor_order(&self) -> u64 {
        self.upper.order() / self.lower.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    /// A chief factor whose order is not a prime, a prime squared or 8.
    ChiefFactor { order: u64 },
    /// No path through the normal-subgroup graph.
    ExhaustedSearch,
}

#[derive(Debug, Clone)]
pub struct BsnWitness {
    pub has_property: bool,
    pub series: Option<SeriesWitness>,
    pub evidence: Vec<FactorEvidence>,
    pub obstruction: Option<Obstruction>,
}

/// Serializable digest of a [`BsnWitness`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsnSummary {
    pub verdict: &'static str,
    pub series_orders: Vec<u64>,
    pub factors: Vec<FactorSummary>,
    pub obstruction: Option<Obstruction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub order: u64,
    /// `(p, |Sylow|, witness orders)` per prime.
    pub sylows: Vec<(u64, u64, (u64, u64))>,
}

impl BsnWitness {
    pub fn verdict(&self) -> &'static str {
        if self.has_property {
            "has-property"
        } else {
            "lacks-property"
        }
    }

    pub fn summary(&self) -> BsnSummary {
        BsnSummary {
            verdict: self.verdict(),
            series_orders: self
                .series
                .as_ref()
                .map(|s| s.chain.iter().map(|h| h.order()).collect())
                .unwrap_or_default(),
            factors: self
                .evidence
                .iter()
                .map(|f| FactorSummary {
                    order: f.factor_order(),
                    sylows: f
                        .primes
                        .iter()
                        .map(|e| (e.p, e.sylow.order(), e.witness.orders()))
                        .collect(),
                })
                .collect(),
            obstruction: self.obstruction.clone(),
        }
    }

    /// Rechecks the certificate from scratch: chain normality, quotients,
    /// Sylow orders and the product sizes of the witness pairs.
    pub fn revalidate(&self, g: &GroupHandle) -> Result<bool> {
        if !self.has_property {
            return Ok(self.series.is_none());
        }
        let Some(series) = &self.series else {
            return Ok(false);
        };
        if !series.is_valid_for(g) || series.chain.len() != self.evidence.len() + 1 {
            return Ok(false);
        }
        for (w, ev) in series.chain.windows(2).zip(&self.evidence) {
            if !ev.lower.same_group(&w[0]) || !ev.upper.same_group(&w[1]) {
                return Ok(false);
            }
            let q = &factor_group(&w[1], &w[0])?;
            let primes = q.prime_divisors();
            if primes.len() != ev.primes.len() {
                return Ok(false);
            }
            for (p, e) in primes.into_iter().zip(&ev.primes) {
                let ok = e.p == p
                    && e.sylow.order() == p_part(q.order(), p)
                    && e.sylow.is_subgroup_of(q)
                    && e.sylow.has(&e.witness.a)
                    && e.sylow.has(&e.witness.b)
                    && e.witness.verify(&e.sylow);
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Bicyclic witnesses for a Sylow subgroup of `Q` at each prime, or `None`
/// when some Sylow subgroup is not bicyclic.
pub fn factor_sylows_bicyclic(q: &GroupHandle) -> Result<Option<Vec<PrimeEvidence>>> {
    let mut out = Vec::new();
    for p in q.prime_divisors() {
        let s = sylow(q, p)?;
        match is_bicyclic(&s)? {
            Some(witness) => out.push(PrimeEvidence {
                p,
                sylow: s,
                witness,
            }),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

pub fn has_bsn_property(g: &GroupHandle) -> Result<BsnWitness> {
    Analysis::new(g.clone()).bsn().cloned()
}

pub(crate) fn bsn_in(ns: &NormalSet, solvable: bool) -> Result<BsnWitness> {
    if solvable {
        let chain = chief_series_in(ns, 0);
        for w in chain.windows(2) {
            let order = ns.order(w[1]) / ns.order(w[0]);
            if !is_bounded_chief_order(order) {
                return Ok(lacking(Obstruction::ChiefFactor { order }));
            }
        }
    }
    let mut memo: FxHashMap<(usize, usize), Option<Vec<PrimeEvidence>>> = FxHashMap::default();
    let mut edge = |n: usize, m: usize| -> Result<bool> {
        if let Some(r) = memo.get(&(n, m)) {
            return Ok(r.is_some());
        }
        let r = factor_sylows_bicyclic(&factor_group(ns.member(m), ns.member(n))?)?;
        let ok = r.is_some();
        memo.insert((n, m), r);
        Ok(ok)
    };
    let target = ns.full();
    let mut prev: Vec<Option<usize>> = vec![None; ns.len()];
    let mut visited = vec![false; ns.len()];
    visited[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut found = target == 0;
    while let Some(n) = queue.pop_front() {
        if n == target {
            found = true;
            break;
        }
        let ups: Vec<usize> = ns.above(n).filter(|&m| m != n && !visited[m]).collect();
        for m in ups {
            if edge(n, m)? {
                visited[m] = true;
                prev[m] = Some(n);
                queue.push_back(m);
            }
        }
    }
    if !found {
        return Ok(lacking(Obstruction::ExhaustedSearch));
    }
    let mut path = vec![target];
    while let Some(p) = prev[*path.last().expect("nonempty")] {
        path.push(p);
    }
    path.reverse();
    let mut evidence = Vec::new();
    for w in path.windows(2) {
        evidence.push(FactorEvidence {
            lower: ns.member(w[0]).clone(),
            upper: ns.member(w[1]).clone(),
            primes: memo[&(w[0], w[1])].clone().expect("edge on path"),
        });
    }
    Ok(BsnWitness {
        has_property: true,
        series: Some(SeriesWitness::from_chain(
            path.iter().map(|&i| ns.member(i).clone()).collect(),
        )),
        evidence,
        obstruction: None,
    })
}

/// `M/N` as a permutation group; `M` itself when `N` is trivial.
fn factor_group(m: &GroupHandle, n: &GroupHandle) -> Result<GroupHandle> {
    if n.is_trivial() {
        return Ok(m.clone());
    }
    Ok(m.quotient(n)?.image().clone())
}

fn lacking(obstruction: Obstruction) -> BsnWitness {
    BsnWitness {
        has_property: false,
        series: None,
        evidence: Vec::new(),
        obstruction: Some(obstruction),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, GroupSpec};

    fn group(text: &str) -> GroupHandle {
        construct(&GroupSpec::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn factor_sylow_checks() {
        assert!(factor_sylows_bicyclic(&group("elementary_abelian(2, 2)"))
            .unwrap()
            .is_some());
        assert!(factor_sylows_bicyclic(&group("elementary_abelian(2, 3)"))
            .unwrap()
            .is_none());
        let ev = factor_sylows_bicyclic(&group("symmetric(3)"))
            .unwrap()
            .unwrap();
        assert_eq!(ev.iter().map(|e| e.p).collect::<Vec<_>>(), vec![2, 3]);
        assert!(factor_sylows_bicyclic(&group("cyclic(1)"))
            .unwrap()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn s4_has_the_property() {
        let g = group("symmetric(4)");
        let w = has_bsn_property(&g).unwrap();
        assert!(w.has_property);
        assert!(w.revalidate(&g).unwrap());
        // The shortest series: the Sylow 2-subgroup D8 of S4 is bicyclic, so 1 < S4 already works.
        assert_eq!(w.series.unwrap().chain.len(), 2);
    }

    #[test]
    fn irreducible_e16_by_z5_lacks_the_property() {
        let g = group("vector_semidirect(2, 4, matrix_group(4, 2, [[0,1,0,0],[0,0,1,0],[0,0,0,1],[1,1,1,1]]))");
        assert_eq!(g.order(), 80);
        let w = has_bsn_property(&g).unwrap();
        assert!(!w.has_property);
        assert_eq!(w.obstruction, Some(Obstruction::ChiefFactor { order: 16 }));
    }

    #[test]
    fn abelian_rank_two_has_the_property() {
        let g = group("direct_product(cyclic(9), cyclic(3))");
        assert!(has_bsn_property(&g).unwrap().has_property);
    }

    #[test]
    fn tampered_witness_fails_revalidation() {
        let g = group("symmetric(4)");
        let mut w = has_bsn_property(&g).unwrap();
        let e = &mut w.evidence[0].primes[0];
        e.witness.b = e.witness.a.clone();
        assert!(!w.revalidate(&g).unwrap());
    }

    #[test]
    fn chief_prefilter_agrees_with_full_search() {
        for e in crate::catalog::shipped_catalog().entries {
            let g = construct(&e.spec).unwrap();
            if g.order() > 400 || !crate::series::is_solvable(&g) {
                continue;
            }
            let ns = crate::normal::normal_subgroups(&g).unwrap();
            let fast = bsn_in(&ns, true).unwrap();
            let full = bsn_in(&ns, false).unwrap();
            assert_eq!(fast.has_property, full.has_property, "{}", e.id);
        }
    }
}
