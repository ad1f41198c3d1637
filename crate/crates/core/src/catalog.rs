//! Line-oriented group catalogs.
//!
//! ```text
//! # comment
//! entry <id>
//! spec <group spec>
//! tags <tag> <tag> ...
//! expect <key> <json value> -- <provenance>
//! ```
//!
//! `spec`, `tags` and `expect` lines belong to the preceding `entry`. Every
//! entry needs exactly one `spec`; `tags` may repeat. Expected values are JSON
//! literals compared against the entry's report, and each must carry a
//! non-empty provenance note after ` -- `. Leading whitespace is ignored.

use std::collections::BTreeSet;
use std::fmt;

use crate::construct::GroupSpec;
use crate::error::{GroupError, Result};

/// Keys of [`InvariantReport`](crate::invariants::InvariantReport) usable in `expect` lines.
pub const INVARIANT_KEYS: [&str; 22] = [
    "order",
    "factorization",
    "solvable",
    "derived_length",
    "nilpotent_length",
    "p_lengths",
    "chief_factor_orders",
    "chief_ranks",
    "chief_rank",
    "supersolvable",
    "nilpotent",
    "abelian",
    "bicyclic",
    "bicyclic_witness_orders",
    "metacyclic",
    "a4_free",
    "odd_order",
    "sylow_tower_supersolvable",
    "frattini_order",
    "derived_length_mod_frattini",
    "supersolvable_residual_order",
    "recognized",
];

/// Keys computed on demand from the group rather than read off the invariant report.
pub const DERIVED_KEYS: [&str; 5] = [
    "bsn",
    "bsn_obstruction",
    "cyclic_normal_orders",
    "elementary_normal_cyclic_quotient_orders",
    "max_normal_generators",
];

pub fn is_known_key(key: &str) -> bool {
    INVARIANT_KEYS.contains(&key) || DERIVED_KEYS.contains(&key)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub key: String,
    pub value: serde_json::Value,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub spec: GroupSpec,
    pub tags: Vec<String>,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// Selected by a filter naming either a tag or the entry id.
    pub fn matches(&self, filter: &str) -> bool {
        self.id == filter || self.has_tag(filter)
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "entry {}", self.id)?;
        writeln!(f, "spec {}", self.spec)?;
        if !self.tags.is_empty() {
            writeln!(f, "tags {}", self.tags.join(" "))?;
        }
        for e in &self.expected {
            writeln!(f, "expect {} {} -- {}", e.key, e.value, e.provenance)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn filtered(&self, filter: Option<&str>) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| filter.is_none_or(|f| e.matches(f)))
            .collect()
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// The catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../data/catalog.txt");

pub fn shipped_catalog() -> Catalog {
    parse_catalog(SHIPPED_CATALOG).expect("shipped catalog parses")
}

fn error_at(line: usize, col: usize, msg: impl Into<String>) -> GroupError {
    GroupError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

struct Pending {
    id: String,
    line: usize,
    spec: Option<GroupSpec>,
    tags: Vec<String>,
    expected: Vec<Expectation>,
}

impl Pending {
    fn finish(self) -> Result<CatalogEntry> {
        let spec = self
            .spec
            .ok_or_else(|| error_at(self.line, 1, format!("entry {} has no spec line", self.id)))?;
        Ok(CatalogEntry {
            id: self.id,
            spec,
            tags: self.tags,
            expected: self.expected,
        })
    }
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut entries = Vec::new();
    let mut ids = BTreeSet::new();
    let mut current: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let indent = raw.len() - raw.trim_start().len();
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim_start();
        let rest_col = indent + line.len() - rest.len() + 1;
        if keyword == "entry" {
            if rest.is_empty() || rest.contains(char::is_whitespace) {
                return Err(error_at(line_no, rest_col, "entry needs a single id"));
            }
            if !ids.insert(rest.to_string()) {
                return Err(error_at(
                    line_no,
                    rest_col,
                    format!("duplicate entry id {rest}"),
                ));
            }
            if let Some(p) = current.take() {
                entries.push(p.finish()?);
            }
            current = Some(Pending {
                id: rest.to_string(),
                line: line_no,
                spec: None,
                tags: Vec::new(),
                expected: Vec::new(),
            });
            continue;
        }
        let Some(entry) = current.as_mut() else {
            return Err(error_at(
                line_no,
                indent + 1,
                format!("{keyword} line before any entry"),
            ));
        };
        match keyword {
            "spec" => {
                if entry.spec.is_some() {
                    return Err(error_at(
                        line_no,
                        indent + 1,
                        format!("entry {} has two spec lines", entry.id),
                    ));
                }
                let spec = GroupSpec::parse(rest).map_err(|e| match e {
                    GroupError::Parse { line: 1, col, msg } => {
                        error_at(line_no, rest_col + col - 1, msg)
                    }
                    other => error_at(line_no, rest_col, other.to_string()),
                })?;
                entry.spec = Some(spec);
            }
            "tags" => entry
                .tags
                .extend(rest.split_whitespace().map(str::to_string)),
            "expect" => entry
                .expected
                .push(parse_expectation(rest, line_no, rest_col)?),
            other => {
                return Err(error_at(
                    line_no,
                    indent + 1,
                    format!("unknown keyword {other}"),
                ))
            }
        }
    }
    if let Some(p) = current {
        entries.push(p.finish()?);
    }
    Ok(Catalog { entries })
}

fn parse_expectation(rest: &str, line: usize, col: usize) -> Result<Expectation> {
    let (key, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    if !is_known_key(key) {
        return Err(error_at(
            line,
            col,
            format!("unknown expectation key {key}"),
        ));
    }
    let Some((value, provenance)) = tail.split_once(" -- ") else {
        return Err(error_at(
            line,
            col,
            format!("expectation {key} has no provenance note"),
        ));
    };
    let provenance = provenance.trim();
    if provenance.is_empty() {
        return Err(error_at(
            line,
            col,
            format!("expectation {key} has an empty provenance note"),
        ));
    }
    let value_col = col + rest.len() - tail.trim_start().len();
    let value = serde_json::from_str(value.trim()).map_err(|e| {
        error_at(
            line,
            value_col + e.column().saturating_sub(1),
            format!("bad value for {key}: {e}"),
        )
    })?;
    Ok(Expectation {
        key: key.to_string(),
        value,
        provenance: provenance.to_string(),
    })
}
