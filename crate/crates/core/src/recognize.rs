//! Fingerprint recognition of a fixed list of small groups.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::group::GroupHandle;
use crate::util::{factorize, p_part};

/// Name of a recognised group, or `"unknown"`.
///
/// Abelian groups are named by invariant factors (`Z2xZ2`, `Z2xZ12`), the
/// trivial group is `1`, and the nonabelian targets are `S3`, `D2n`, `Q8`,
/// `A4`, `S4`, `SL(2,3)`, `GL(2,3)`, `[Z7]Z3`, `SD16` and `GL(3,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SmallGroupName(String);

impl SmallGroupName {
    pub const UNKNOWN: &'static str = "unknown";

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_unknown(&self) -> bool {
        self.0 == Self::UNKNOWN
    }
}

impl fmt::Display for SmallGroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Largest order for which nonabelian targets are fingerprinted.
pub const RECOGNITION_LIMIT: u64 = 200;

/// Invariant factors `d₁ | d₂ | …` of an abelian group from its element orders.
fn abelian_invariants(order: u64, histogram: &BTreeMap<u64, u64>) -> Vec<u64> {
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for (p, _) in factorize(order) {
        // Number of elements of order dividing p^j, for j = 1, 2, …
        let mut counts = vec![1u64];
        let mut j = 1u32;
        loop {
            let pj = p.pow(j);
            let c: u64 = histogram
                .iter()
                .filter(|(o, _)| pj % **o == 0)
                .map(|(_, c)| c)
                .sum();
            counts.push(c);
            if c == p_part(order, p) {
                break;
            }
            j += 1;
        }
        // counts[j] = p^(Σ min(j, e_i)); the number of cyclic factors of exponent ≥ j is the log ratio.
        let logs: Vec<u32> = counts.iter().map(|&c| c.ilog(p)).collect();
        let mut at_least: Vec<u32> = (1..logs.len()).map(|j| logs[j] - logs[j - 1]).collect();
        at_least.push(0);
        let mut exps = Vec::new();
        for j in 0..at_least.len() - 1 {
            for _ in 0..(at_least[j] - at_least[j + 1]) {
                exps.push(p.pow(j as u32 + 1));
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(exps);
    }
    let rank = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..rank)
        .map(|i| {
            per_prime
                .iter()
                .map(|v| v.get(i).copied().unwrap_or(1))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

fn named(s: impl Into<String>) -> SmallGroupName {
    SmallGroupName(s.into())
}

pub fn recognize_small(g: &GroupHandle) -> Result<SmallGroupName> {
    let order = g.order();
    if order == 1 {
        return Ok(named("1"));
    }
    let histogram: BTreeMap<u64, u64> = g.order_histogram()?.into_iter().collect();
    let count = |o: u64| histogram.get(&o).copied().unwrap_or(0);
    if g.is_abelian() {
        let parts: Vec<String> = abelian_invariants(order, &histogram)
            .into_iter()
            .map(|d| format!("Z{d}"))
            .collect();
        return Ok(named(parts.join("x")));
    }
    if order > RECOGNITION_LIMIT {
        return Ok(named(SmallGroupName::UNKNOWN));
    }
    let centre = g.center()?.order();
    let derived = g.derived().order();
    let hist: Vec<(u64, u64)> = histogram.iter().map(|(a, b)| (*a, *b)).collect();
    let name = match order {
        6 => "S3".to_string(),
        8 if count(2) == 1 => "Q8".to_string(),
        12 if count(6) == 0 => "A4".to_string(),
        16 if hist == [(1, 1), (2, 5), (4, 6), (8, 4)] => "SD16".to_string(),
        21 => "[Z7]Z3".to_string(),
        24 if centre == 1 && hist == [(1, 1), (2, 9), (3, 8), (4, 6)] => "S4".to_string(),
        24 if centre == 2 && derived == 8 && hist == [(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)] => {
            "SL(2,3)".to_string()
        }
        48 if centre == 2
            && derived == 24
            && hist == [(1, 1), (2, 13), (3, 8), (4, 6), (6, 8), (8, 12)] =>
        {
            "GL(2,3)".to_string()
        }
        168 if derived == 168 => "GL(3,2)".to_string(),
        _ => {
            let n = order / 2;
            let involutions = n + u64::from(n.is_multiple_of(2));
            if order.is_multiple_of(2) && n >= 3 && count(n) > 0 && count(2) == involutions {
                format!("D{order}")
            } else {
                SmallGroupName::UNKNOWN.to_string()
            }
        }
    };
    Ok(named(name))
}
