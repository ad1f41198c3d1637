//! Bicyclic, metacyclic and A₄-free predicates, generator ranks of p-groups,
//! and the combined invariant report.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::bsn::{bsn_in, BsnWitness};
use crate::error::{input, GroupError, Result};
use crate::group::GroupHandle;
use crate::lattice::{p_group_frattini, subgroup_lattice, SubgroupLattice};
use crate::normal::{normal_subgroups, NormalSet};
use crate::perm::Permutation;
use crate::recognize::recognize_small;
use crate::series::{
    self, chief_series_in, chief_witness, fitting_series_in, p_length_in, rank_of,
};
use crate::util::{factorize, prime_power};

/// Elements `a, b` with `G = ⟨a⟩⟨b⟩`, ordered so that `|a| ≥ |b|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicyclicWitness {
    pub a: Permutation,
    pub b: Permutation,
}

impl BicyclicWitness {
    pub fn orders(&self) -> (u64, u64) {
        (self.a.order(), self.b.order())
    }

    /// Recomputes `|⟨a⟩||⟨b⟩| / |⟨a⟩ ∩ ⟨b⟩|` and compares it with `|G|`.
    pub fn verify(&self, g: &GroupHandle) -> bool {
        g.has(&self.a) && g.has(&self.b) && product_size(&self.a, &self.b) == g.order()
    }
}

fn powers(a: &Permutation) -> FxHashSet<Permutation> {
    let mut set = FxHashSet::default();
    let mut x = Permutation::identity(a.degree());
    loop {
        if !set.insert(x.clone()) {
            return set;
        }
        x = x.then(a);
    }
}

/// `|⟨a⟩⟨b⟩|`.
fn product_size(a: &Permutation, b: &Permutation) -> u64 {
    let pa = powers(a);
    product_size_with(&pa, b)
}

fn product_size_with(pa: &FxHashSet<Permutation>, b: &Permutation) -> u64 {
    let mut k = 1;
    let mut y = b.clone();
    while !pa.contains(&y) {
        y = y.then(b);
        k += 1;
    }
    // ⟨a⟩ ∩ ⟨b⟩ = ⟨bᵏ⟩ of order |b|/k.
    pa.len() as u64 * k
}

/// Searches `a` over conjugacy-class representatives and `b` over all elements.
pub fn is_bicyclic(g: &GroupHandle) -> Result<Option<BicyclicWitness>> {
    let order = g.order();
    if order == 1 {
        return Ok(Some(BicyclicWitness {
            a: g.identity(),
            b: g.identity(),
        }));
    }
    let elems = g.sorted_elements()?;
    let orders: Vec<u64> = elems.iter().map(|x| x.order()).collect();
    let max = orders.iter().copied().max().unwrap_or(1);
    if max * max < order {
        return Ok(None);
    }
    let mut reps = g.conjugacy_classes()?.representatives;
    reps.sort_by_key(|x| std::cmp::Reverse(x.order()));
    for a in reps {
        let oa = a.order();
        if oa * max < order {
            break;
        }
        let pa = powers(&a);
        for (b, &ob) in elems.iter().zip(&orders) {
            if oa * ob >= order && order.is_multiple_of(ob) && product_size_with(&pa, b) == order {
                let (a, b) = if oa >= ob {
                    (a, b.clone())
                } else {
                    (b.clone(), a)
                };
                return Ok(Some(BicyclicWitness { a, b }));
            }
        }
    }
    Ok(None)
}

/// Exhaustive all-pairs version of [`is_bicyclic`].
pub fn is_bicyclic_exhaustive(g: &GroupHandle) -> Result<bool> {
    let elems = g.sorted_elements()?;
    Ok(elems.iter().any(|a| {
        let pa = powers(a);
        elems.iter().any(|b| product_size_with(&pa, b) == g.order())
    }))
}

fn is_cyclic(h: &GroupHandle) -> Result<bool> {
    Ok(h.is_abelian() && h.exponent()? == h.order())
}

/// A cyclic normal subgroup with cyclic quotient, when one exists.
pub fn is_metacyclic(g: &GroupHandle) -> Result<bool> {
    let ns = normal_subgroups(g)?;
    is_metacyclic_in(&ns)
}

pub(crate) fn is_metacyclic_in(ns: &NormalSet) -> Result<bool> {
    let g = ns.group();
    for c in ns.members() {
        if !is_cyclic(c)? {
            continue;
        }
        let q = g.quotient(c)?;
        if is_cyclic(q.image())? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `log_p |P/Φ(P)|`.
pub fn min_generators_p_group(g: &GroupHandle, p: u64) -> Result<u32> {
    if g.is_trivial() {
        return Ok(0);
    }
    match prime_power(g.order()) {
        Some((q, _)) if q == p => {}
        _ => {
            return Err(input(format!(
                "a group of order {} is not a {p}-group",
                g.order()
            )))
        }
    }
    let phi = p_group_frattini(g, p);
    Ok((g.order() / phi.order()).ilog(p))
}

/// A subgroup `H` with a normal `K` such that `H/K ≅ A₄`.
#[derive(Debug, Clone)]
pub struct A4Section {
    pub subgroup: GroupHandle,
    pub kernel: GroupHandle,
}

/// `None` when the group is A₄-free, otherwise a witnessing section.
pub fn is_a4_free(g: &GroupHandle) -> Result<Option<A4Section>> {
    if !g.order().is_multiple_of(12) {
        return Ok(None);
    }
    a4_section_in(&subgroup_lattice(g)?)
}

pub(crate) fn a4_section_in(lattice: &SubgroupLattice) -> Result<Option<A4Section>> {
    for class in lattice.classes() {
        if class.order % 12 != 0 {
            continue;
        }
        let h = &class.representative;
        let ns = normal_subgroups(h)?;
        for k in ns.members() {
            if h.order() / k.order() != 12 {
                continue;
            }
            let q = h.quotient(k)?;
            if q.image().elements()?.iter().all(|x| x.order() != 6) {
                return Ok(Some(A4Section {
                    subgroup: h.clone(),
                    kernel: k.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Every invariant of one group. Values that presuppose solvability are
/// `None` for nonsolvable groups; lattice-based values are `None` above the lattice cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub order: u64,
    pub factorization: Vec<(u64, u32)>,
    pub solvable: bool,
    pub derived_length: Option<u32>,
    pub nilpotent_length: Option<u32>,
    pub p_lengths: BTreeMap<u64, Option<u32>>,
    pub chief_factor_orders: Option<Vec<u64>>,
    pub chief_ranks: BTreeMap<u64, u32>,
    pub chief_rank: Option<u32>,
    pub supersolvable: bool,
    pub nilpotent: bool,
    pub abelian: bool,
    pub bicyclic: bool,
    pub bicyclic_witness_orders: Option<(u64, u64)>,
    pub metacyclic: bool,
    pub a4_free: Option<bool>,
    pub odd_order: bool,
    pub sylow_tower_supersolvable: bool,
    pub frattini_order: Option<u64>,
    pub derived_length_mod_frattini: Option<u32>,
    pub supersolvable_residual_order: u64,
    pub recognized: String,
}

/// Per-group memo of the normal set and subgroup lattice.
pub struct Analysis {
    group: GroupHandle,
    normal: OnceLock<NormalSet>,
    lattice: OnceLock<std::result::Result<SubgroupLattice, GroupError>>,
    bsn: OnceLock<BsnWitness>,
    report: OnceLock<InvariantReport>,
}

impl Analysis {
    pub fn new(group: GroupHandle) -> Self {
        Analysis {
            group,
            normal: OnceLock::new(),
            lattice: OnceLock::new(),
            bsn: OnceLock::new(),
            report: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn normal_set(&self) -> Result<&NormalSet> {
        if let Some(ns) = self.normal.get() {
            return Ok(ns);
        }
        let ns = normal_subgroups(&self.group)?;
        Ok(self.normal.get_or_init(|| ns))
    }

    pub fn lattice(&self) -> Result<&SubgroupLattice> {
        match self.lattice.get_or_init(|| subgroup_lattice(&self.group)) {
            Ok(l) => Ok(l),
            Err(e) => Err(e.clone()),
        }
    }

    /// Frattini subgroup, using the lattice only when the group is not of prime-power order.
    pub fn frattini(&self) -> Result<GroupHandle> {
        let g = &self.group;
        match prime_power(g.order()) {
            Some((p, _)) => Ok(p_group_frattini(g, p)),
            None if g.is_trivial() => Ok(g.clone()),
            None => Ok(self.lattice()?.frattini()),
        }
    }

    pub fn a4_free(&self) -> Result<bool> {
        if !self.group.order().is_multiple_of(12) {
            return Ok(true);
        }
        Ok(a4_section_in(self.lattice()?)?.is_none())
    }

    pub fn bsn(&self) -> Result<&BsnWitness> {
        if let Some(w) = self.bsn.get() {
            return Ok(w);
        }
        let w = bsn_in(self.normal_set()?, series::is_solvable(&self.group))?;
        Ok(self.bsn.get_or_init(|| w))
    }

    pub fn invariants(&self) -> Result<&InvariantReport> {
        if let Some(r) = self.report.get() {
            return Ok(r);
        }
        let r = self.compute_report()?;
        Ok(self.report.get_or_init(|| r))
    }

    fn compute_report(&self) -> Result<InvariantReport> {
        let g = &self.group;
        let ns = self.normal_set()?;
        let solvable = series::is_solvable(g);
        let derived_length = series::derived_length(g).ok();
        let nilpotent_length = fitting_series_in(ns).ok().map(|c| c.len() as u32 - 1);
        let p_lengths = g
            .prime_divisors()
            .into_iter()
            .map(|p| (p, p_length_in(ns, p).ok()))
            .collect();
        let chief = chief_witness(ns, &chief_series_in(ns, 0))
            .ok()
            .map(|w| w.factor_orders());
        let chief_ranks: BTreeMap<u64, u32> = match &chief {
            Some(orders) => g
                .prime_divisors()
                .into_iter()
                .map(|p| (p, rank_of(orders, p)))
                .collect(),
            None => BTreeMap::new(),
        };
        let chief_rank = chief
            .as_ref()
            .map(|_| chief_ranks.values().copied().max().unwrap_or(0));
        let supersolvable = chief
            .as_ref()
            .is_some_and(|o| o.iter().all(|&x| crate::util::is_prime(x)));
        let nilpotent = nilpotent_length.is_some_and(|l| l <= 1);
        let bicyclic = is_bicyclic(g)?;
        let lattice_ok = g.order() <= g.caps().lattice;
        let a4_free = if !g.order().is_multiple_of(12) || lattice_ok {
            Some(self.a4_free()?)
        } else {
            None
        };
        let frattini = if prime_power(g.order()).is_some() || g.is_trivial() || lattice_ok {
            Some(self.frattini()?)
        } else {
            None
        };
        let derived_length_mod_frattini = match &frattini {
            Some(phi) if solvable && phi.is_trivial() => derived_length,
            Some(phi) if solvable => Some(series::derived_length(g.quotient(phi)?.image())?),
            _ => None,
        };
        Ok(InvariantReport {
            order: g.order(),
            factorization: factorize(g.order()),
            solvable,
            derived_length,
            nilpotent_length,
            p_lengths,
            chief_factor_orders: chief,
            chief_ranks,
            chief_rank,
            supersolvable,
            nilpotent,
            abelian: g.is_abelian(),
            bicyclic: bicyclic.is_some(),
            bicyclic_witness_orders: bicyclic.map(|w| w.orders()),
            metacyclic: is_metacyclic_in(ns)?,
            a4_free,
            odd_order: g.order() % 2 == 1,
            sylow_tower_supersolvable: series::sylow_tower_supersolvable(g)?.is_some(),
            frattini_order: frattini.map(|f| f.order()),
            derived_length_mod_frattini,
            supersolvable_residual_order: ns.order(series::supersolvable_residual_in(ns)),
            recognized: recognize_small(g)?.name().to_string(),
        })
    }
}

/// All invariants of `g`.
pub fn compute_invariants(g: &GroupHandle) -> Result<InvariantReport> {
    Analysis::new(g.clone()).invariants().cloned()
}
