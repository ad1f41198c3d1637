//! Mechanical checks of the structure theorems on concrete groups.
//!
//! Every check yields a [`ClaimRecord`] with a stable id. A claim is
//! evaluated only on groups satisfying its hypotheses; resource caps turn a
//! claim into [`ClaimStatus::Skipped`] with the reason recorded.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::config::Caps;
use crate::construct::{construct_with, GroupSpec, MatrixSource};
use crate::error::{input, GroupError, Result};
use crate::group::GroupHandle;
use crate::invariants::{is_metacyclic_in, min_generators_p_group, Analysis, InvariantReport};
use crate::lattice::{subgroup_lattice, subgroup_lattice_filtered};
use crate::matrix::LinearFamily;
use crate::normal::{normal_hall, HallOutcome};
use crate::recognize::recognize_small;
use crate::series::{
    self, is_nilpotent, supersolvable_above, supersolvable_residual_in, sylow_tower_supersolvable,
};
use crate::util::{gcd, is_bounded_chief_order, prime_power};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Holds,
    Fails,
    NotApplicable,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    /// Hypotheses met.
    pub applicable: bool,
    pub holds: bool,
    pub status: ClaimStatus,
    /// Witness, counterexample, or the reason the claim was not evaluated.
    pub detail: String,
}

impl ClaimRecord {
    fn not_applicable(id: &str, reason: impl Into<String>) -> Self {
        ClaimRecord {
            id: id.to_string(),
            applicable: false,
            holds: false,
            status: ClaimStatus::NotApplicable,
            detail: reason.into(),
        }
    }

    fn skipped(id: &str, reason: impl Into<String>) -> Self {
        ClaimRecord {
            id: id.to_string(),
            applicable: true,
            holds: false,
            status: ClaimStatus::Skipped,
            detail: reason.into(),
        }
    }

    fn evaluated(id: &str, outcome: Result<(bool, String)>) -> Self {
        match outcome {
            Ok((holds, detail)) => ClaimRecord {
                id: id.to_string(),
                applicable: true,
                holds,
                status: if holds {
                    ClaimStatus::Holds
                } else {
                    ClaimStatus::Fails
                },
                detail,
            },
            Err(e) => Self::skipped(id, e.to_string()),
        }
    }

    /// Applicable and evaluated to false.
    pub fn is_violation(&self) -> bool {
        self.status == ClaimStatus::Fails
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub claims: Vec<ClaimRecord>,
}

impl TheoremReport {
    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn violations(&self) -> usize {
        self.claims.iter().filter(|c| c.is_violation()).count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    pub fn extend(&mut self, other: TheoremReport) {
        self.claims.extend(other.claims);
    }
}

/// Why a block of claims could not be evaluated.
enum Gate {
    NotApplicable(String),
    Skipped(String),
}

impl Gate {
    fn records(&self, ids: &[&str]) -> TheoremReport {
        let claims = ids
            .iter()
            .map(|id| match self {
                Gate::NotApplicable(r) => ClaimRecord::not_applicable(id, r.clone()),
                Gate::Skipped(r) => ClaimRecord::skipped(id, r.clone()),
            })
            .collect();
        TheoremReport { claims }
    }
}

fn skip(e: GroupError) -> Gate {
    Gate::Skipped(e.to_string())
}

/// Solvable with the bicyclic-Sylow normal series property.
fn gate_solvable_bsn(a: &Analysis) -> std::result::Result<&InvariantReport, Gate> {
    let r = a.invariants().map_err(skip)?;
    if !r.solvable {
        return Err(Gate::NotApplicable("not solvable".into()));
    }
    if !a.bsn().map_err(skip)?.has_property {
        return Err(Gate::NotApplicable(
            "lacks the bicyclic-Sylow normal series".into(),
        ));
    }
    Ok(r)
}

/// `d(G/Φ(G)) ≤ bound`, falling back to `d(G)` when Φ is out of reach.
fn check_mod_frattini(r: &InvariantReport, bound: u32) -> Result<(bool, String)> {
    match (r.derived_length_mod_frattini, r.derived_length) {
        (Some(d), _) => Ok((d <= bound, format!("derived length of G/Phi = {d}"))),
        (None, Some(d)) if d <= bound => {
            Ok((true, format!("derived length of G = {d} bounds G/Phi")))
        }
        _ => Err(GroupError::Precondition(format!(
            "Frattini subgroup needs the lattice of an order-{} group",
            r.order
        ))),
    }
}

fn tower_detail(t: &crate::series::SeriesWitness) -> String {
    format!("tower factors {:?}", t.factor_orders())
}

pub const THEOREM_IDS: [&str; 4] = ["T1.1-1", "T1.1-2", "T1.1-3", "T1.1-4"];

pub fn verify_theorem_1_1(a: &Analysis) -> TheoremReport {
    let r = match gate_solvable_bsn(a) {
        Ok(r) => r,
        Err(gate) => return gate.records(&THEOREM_IDS),
    };
    let g = a.group();
    let mut claims = Vec::new();

    claims.push(ClaimRecord::evaluated(
        "T1.1-1",
        (|| {
            let nl = r.nilpotent_length.ok_or(GroupError::NotSolvable)?;
            let (ok, det) = check_mod_frattini(r, 5)?;
            Ok((nl <= 4 && ok, format!("nilpotent length = {nl}, {det}")))
        })(),
    ));

    claims.push(ClaimRecord::evaluated(
        "T1.1-2",
        (|| {
            let ns = a.normal_set()?;
            let residual = supersolvable_residual_in(ns);
            let mut candidates = vec![residual];
            candidates
                .extend((0..ns.len()).filter(|&n| n != residual && supersolvable_above(ns, n)));
            for n in candidates {
                if let Some(t) = sylow_tower_supersolvable(ns.member(n))? {
                    return Ok((
                        true,
                        format!("N of order {}, {}", ns.order(n), tower_detail(&t)),
                    ));
                }
            }
            Ok((
                false,
                format!(
                    "no Sylow tower in any N with supersolvable quotient; residual order {}",
                    ns.order(residual)
                ),
            ))
        })(),
    ));

    claims.push(ClaimRecord::evaluated(
        "T1.1-3",
        (|| {
            let mut parts = Vec::new();
            let mut ok = true;
            for (&p, l) in &r.p_lengths {
                let l = l.ok_or(GroupError::NotSolvable)?;
                ok &= l <= if p <= 3 { 2 } else { 1 };
                parts.push(format!("l_{p} = {l}"));
            }
            Ok((ok, parts.join(", ")))
        })(),
    ));

    claims.push(ClaimRecord::evaluated(
        "T1.1-4",
        (|| {
            let pi: Vec<u64> = g
                .prime_divisors()
                .into_iter()
                .filter(|p| ![2, 3, 7].contains(p))
                .collect();
            match normal_hall(g, &pi)? {
                HallOutcome::Present(h) => match sylow_tower_supersolvable(&h)? {
                    Some(t) => Ok((
                        true,
                        format!("H of order {}, {}", h.order(), tower_detail(&t)),
                    )),
                    None => Ok((
                        false,
                        format!("H of order {} has no Sylow tower", h.order()),
                    )),
                },
                HallOutcome::Absent {
                    achieved_order,
                    pi_part,
                } => Ok((
                    false,
                    format!("no normal Hall subgroup: generated {achieved_order} of {pi_part}"),
                )),
            }
        })(),
    ));

    TheoremReport { claims }
}

pub const COROLLARY_1_2_IDS: [&str; 2] = ["C1.2-1", "C1.2-2"];

pub fn verify_corollary_1_2(a: &Analysis) -> TheoremReport {
    let r = match gate_solvable_bsn(a) {
        Ok(r) => r,
        Err(gate) => return gate.records(&COROLLARY_1_2_IDS),
    };
    match a.a4_free() {
        Ok(true) => {}
        Ok(false) => return Gate::NotApplicable("not A4-free".into()).records(&COROLLARY_1_2_IDS),
        Err(e) => return skip(e).records(&COROLLARY_1_2_IDS),
    }
    let first = ClaimRecord::evaluated(
        "C1.2-1",
        (|| {
            let mut worst = 0;
            for l in r.p_lengths.values() {
                worst = worst.max(l.ok_or(GroupError::NotSolvable)?);
            }
            Ok((worst <= 1, format!("max p-length = {worst}")))
        })(),
    );
    let second = ClaimRecord::evaluated("C1.2-2", check_mod_frattini(r, 3));
    TheoremReport {
        claims: vec![first, second],
    }
}

pub const COROLLARY_1_3_IDS: [&str; 2] = ["C1.3-1", "C1.3-2"];

pub fn verify_corollary_1_3(a: &Analysis) -> TheoremReport {
    if a.group().order().is_multiple_of(2) {
        return Gate::NotApplicable("even order".into()).records(&COROLLARY_1_3_IDS);
    }
    let r = match gate_solvable_bsn(a) {
        Ok(r) => r,
        Err(gate) => return gate.records(&COROLLARY_1_3_IDS),
    };
    let g = a.group();
    let first = ClaimRecord::evaluated(
        "C1.3-1",
        (|| {
            Ok(match sylow_tower_supersolvable(g)? {
                Some(t) => (true, tower_detail(&t)),
                None => (
                    false,
                    "no ordered Sylow tower of supersolvable type".to_string(),
                ),
            })
        })(),
    );
    let second = ClaimRecord::evaluated(
        "C1.3-2",
        (|| {
            let d = g.derived();
            let nil = is_nilpotent(&d)?;
            let (meta, det) = check_mod_frattini(r, 2)?;
            Ok((
                nil && meta,
                format!(
                    "derived subgroup of order {} nilpotent = {nil}, {det}",
                    d.order()
                ),
            ))
        })(),
    );
    TheoremReport {
        claims: vec![first, second],
    }
}

pub const P_LEMMA_IDS: [&str; 3] = ["L2.1-1", "L2.1-2", "L2.1-3"];

/// Checks on a bicyclic p-group: complemented normal subgroups (`L2.1-1`),
/// metacyclicity for odd p (`L2.1-2`) and generator counts of normal
/// subgroups for p = 2 (`L2.1-3`).
pub fn verify_bicyclic_p_lemma(a: &Analysis, p: u64) -> TheoremReport {
    let g = a.group();
    if !matches!(prime_power(g.order()), Some((q, _)) if q == p) {
        return Gate::NotApplicable(format!("not a {p}-group")).records(&P_LEMMA_IDS);
    }
    match a.invariants() {
        Ok(r) if r.bicyclic => {}
        Ok(_) => return Gate::NotApplicable("not bicyclic".into()).records(&P_LEMMA_IDS),
        Err(e) => return skip(e).records(&P_LEMMA_IDS),
    }
    let ns = match a.normal_set() {
        Ok(ns) => ns,
        Err(e) => return skip(e).records(&P_LEMMA_IDS),
    };
    let mut claims = Vec::new();

    claims.push(ClaimRecord::evaluated(
        "L2.1-1",
        (|| {
            let lattice = a.lattice()?;
            let mut complemented = 0;
            for (i, n) in ns.members().iter().enumerate() {
                let index = g.order() / n.order();
                let has_complement = i == ns.trivial()
                    || i == ns.full()
                    || lattice.classes().iter().any(|c| {
                        c.order == index
                            && c.representative
                                .intersection(n)
                                .is_ok_and(|m| m.is_trivial())
                    });
                if !has_complement {
                    continue;
                }
                complemented += 1;
                let ok = if p == 2 {
                    // |N/Φ(N)| ≤ 4 means N is 2-generated.
                    n.is_trivial() || min_generators_p_group(n, 2)? <= 2
                } else {
                    i == ns.full() || is_cyclic(n)
                };
                if !ok {
                    return Ok((
                        false,
                        format!(
                            "complemented normal subgroup of order {} violates the bound",
                            n.order()
                        ),
                    ));
                }
            }
            Ok((
                true,
                format!("{complemented} complemented normal subgroups conform"),
            ))
        })(),
    ));

    claims.push(if p == 2 {
        ClaimRecord::not_applicable("L2.1-2", "p = 2")
    } else {
        ClaimRecord::evaluated(
            "L2.1-2",
            is_metacyclic_in(ns).map(|m| (m, format!("metacyclic = {m}"))),
        )
    });

    claims.push(if p != 2 {
        ClaimRecord::not_applicable("L2.1-3", "p odd")
    } else {
        ClaimRecord::evaluated(
            "L2.1-3",
            (|| {
                let mut worst = 0;
                for n in ns.members() {
                    if !n.is_trivial() {
                        worst = worst.max(min_generators_p_group(n, 2)?);
                    }
                }
                Ok((
                    worst <= 3,
                    format!("max generators of a normal subgroup = {worst}"),
                ))
            })(),
        )
    });

    TheoremReport { claims }
}

fn is_cyclic(h: &GroupHandle) -> bool {
    h.is_abelian() && h.exponent().is_ok_and(|e| e == h.order())
}

pub const STRUCTURE_IDS: [&str; 3] = ["L2.4", "L2.5", "L2.6"];

/// Chief factor orders, the odd-order equivalence with chief rank, and maximal subgroup indices.
pub fn verify_structure_lemmas(a: &Analysis) -> TheoremReport {
    let g = a.group();
    let mut report = TheoremReport::default();
    match gate_solvable_bsn(a) {
        Ok(r) => {
            report.claims.push(ClaimRecord::evaluated(
                "L2.4",
                (|| {
                    let orders = r
                        .chief_factor_orders
                        .clone()
                        .ok_or(GroupError::NotSolvable)?;
                    let bad: Vec<u64> = orders
                        .iter()
                        .copied()
                        .filter(|&o| !is_bounded_chief_order(o))
                        .collect();
                    Ok((bad.is_empty(), format!("chief factor orders {orders:?}")))
                })(),
            ));
        }
        Err(gate) => report.extend(gate.records(&["L2.4"])),
    }

    report.claims.push(if g.order().is_multiple_of(2) {
        ClaimRecord::not_applicable("L2.5", "even order")
    } else {
        ClaimRecord::evaluated(
            "L2.5",
            (|| {
                let r = a.invariants()?;
                let rank = r.chief_rank.ok_or(GroupError::NotSolvable)?;
                let has = a.bsn()?.has_property;
                Ok((
                    has == (rank <= 2),
                    format!("property = {has}, chief rank = {rank}"),
                ))
            })(),
        )
    });

    match gate_solvable_bsn(a) {
        Ok(_) => report.claims.push(ClaimRecord::evaluated(
            "L2.6",
            (|| {
                let lattice = a.lattice()?;
                let indices: BTreeSet<u64> = lattice
                    .maximal_class_indices()
                    .into_iter()
                    .map(|i| g.order() / lattice.classes()[i].order)
                    .collect();
                let ok = indices.iter().all(|&i| is_bounded_chief_order(i));
                Ok((ok, format!("maximal subgroup indices {indices:?}")))
            })(),
        )),
        Err(gate) => report.extend(gate.records(&["L2.6"])),
    }
    report
}

/// Every per-group verifier.
pub fn verify_group(a: &Analysis) -> TheoremReport {
    let mut report = verify_theorem_1_1(a);
    report.extend(verify_corollary_1_2(a));
    report.extend(verify_corollary_1_3(a));
    report.extend(verify_structure_lemmas(a));
    match prime_power(a.group().order()) {
        Some((p, _)) => report.extend(verify_bicyclic_p_lemma(a, p)),
        None => report
            .extend(Gate::NotApplicable("not of prime-power order".into()).records(&P_LEMMA_IDS)),
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMode {
    Gl32,
    Gl2p(u64),
}

/// Isomorphism types of the subgroup classes of GL(3,2).
pub const GL32_TYPES: [&str; 12] = [
    "1", "GL(3,2)", "Z2", "Z3", "Z7", "Z2xZ2", "Z4", "D8", "S3", "A4", "S4", "[Z7]Z3",
];

/// Subgroup checks inside small general linear groups (ids `L2.9`, `L2.8-p`).
pub fn verify_linear_lemmas(mode: LinearMode, caps: Caps) -> Result<TheoremReport> {
    let (n, p) = match mode {
        LinearMode::Gl32 => (3, 2),
        LinearMode::Gl2p(p) if [3, 5, 7].contains(&p) => (2, p),
        LinearMode::Gl2p(p) => {
            return Err(input(format!(
                "linear check needs p in {{3, 5, 7}}, got {p}"
            )))
        }
    };
    let spec = GroupSpec::MatrixGroup {
        n,
        p: p as u32,
        source: MatrixSource::Standard(LinearFamily::GL),
    };
    let g = construct_with(&spec, caps)?;
    let record = match mode {
        LinearMode::Gl32 => ClaimRecord::evaluated(
            "L2.9",
            (|| {
                let lattice = subgroup_lattice(&g)?;
                let mut found = BTreeSet::new();
                for c in lattice.classes() {
                    found.insert(recognize_small(&c.representative)?.name().to_string());
                }
                let expected: BTreeSet<String> = GL32_TYPES.iter().map(|s| s.to_string()).collect();
                let names = found.iter().cloned().collect::<Vec<_>>().join(", ");
                Ok((
                    found == expected,
                    format!("{} classes of types {{{names}}}", lattice.len()),
                ))
            })(),
        ),
        LinearMode::Gl2p(_) => {
            let id = format!("L2.8-{p}");
            ClaimRecord::evaluated(
                &id,
                (|| {
                    let lattice = subgroup_lattice_filtered(&g, &|o| gcd(o, p) == 1)?;
                    let mut checked = 0;
                    for c in lattice.classes() {
                        let h = &c.representative;
                        let sub = Analysis::new(h.clone());
                        if !sub.a4_free()? {
                            continue;
                        }
                        checked += 1;
                        match series::derived_length(h) {
                            Ok(d) if d <= 2 => {}
                            Ok(d) => {
                                return Ok((
                                    false,
                                    format!("class of order {} has derived length {d}", h.order()),
                                ))
                            }
                            Err(_) => {
                                return Ok((
                                    false,
                                    format!("class of order {} is not solvable", h.order()),
                                ))
                            }
                        }
                    }
                    Ok((
                        true,
                        format!(
                            "{checked} A4-free {p}'-classes of {} are metabelian",
                            lattice.len()
                        ),
                    ))
                })(),
            )
        }
    };
    Ok(TheoremReport {
        claims: vec![record],
    })
}
