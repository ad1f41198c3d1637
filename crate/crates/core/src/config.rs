use serde::{Deserialize, Serialize};

/// Size limits applied by the engine. Exceeding any of them is a
/// [`GroupError::Resource`](crate::GroupError::Resource), never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order that may be enumerated element by element.
    pub enumeration: u64,
    /// Largest index |G:N| realised as a permutation quotient.
    pub quotient_degree: u64,
    /// Largest group order for which the full subgroup lattice is built.
    pub lattice: u64,
    /// Largest number of working rows in a coset table.
    pub coset_rows: u64,
    /// Below this size intersections filter elements; above it they backtrack.
    pub intersection_filter: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 100_000,
            quotient_degree: 10_000,
            lattice: 5_000,
            coset_rows: 20_000,
            intersection_filter: 10_000,
        }
    }
}

impl Caps {
    /// Environment variables consulted by [`Caps::from_env`], paired with the field they set.
    pub const ENV_VARS: [&'static str; 5] = [
        "BICYCLIC_CAP_ENUMERATION",
        "BICYCLIC_CAP_QUOTIENT_DEGREE",
        "BICYCLIC_CAP_LATTICE",
        "BICYCLIC_CAP_COSET_ROWS",
        "BICYCLIC_CAP_INTERSECTION_FILTER",
    ];

    /// Defaults overridden by any of [`Caps::ENV_VARS`] that parse as integers.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        let slots: [&mut u64; 5] = [
            &mut caps.enumeration,
            &mut caps.quotient_degree,
            &mut caps.lattice,
            &mut caps.coset_rows,
            &mut caps.intersection_filter,
        ];
        for (name, slot) in Self::ENV_VARS.iter().zip(slots) {
            if let Some(v) = std::env::var(name).ok().and_then(|s| s.trim().parse().ok()) {
                *slot = v;
            }
        }
        caps
    }

    pub(crate) fn check(&self, what: &'static str, cap: u64, needed: u64) -> crate::Result<()> {
        if needed > cap {
            Err(crate::GroupError::Resource { what, cap, needed })
        } else {
            Ok(())
        }
    }
}
