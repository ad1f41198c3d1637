//! Finite permutation-group engine with structural invariants of solvable
//! groups and checks for groups admitting a normal series whose factors have
//! bicyclic Sylow subgroups.

mod backtrack;
pub mod bsn;
pub mod catalog;
mod chain;
pub mod config;
pub mod construct;
pub mod coset;
pub mod error;
pub mod group;
pub mod invariants;
pub mod lattice;
pub mod matrix;
pub mod normal;
pub mod perm;
pub mod presentation;
pub mod recognize;
pub mod report;
pub mod series;
pub mod util;
pub mod verify;

pub use config::Caps;
pub use error::{GroupError, Result};
pub use group::{build_group, ConjugacyClassSet, GroupHandle, QuotientMap};
pub use perm::{element_order, Permutation};
