//! Running catalog entries and assembling the report document.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bsn::BsnSummary;
use crate::catalog::{CatalogEntry, Expectation};
use crate::config::Caps;
use crate::construct::construct_with;
use crate::error::Result;
use crate::group::GroupHandle;
use crate::invariants::{min_generators_p_group, Analysis, InvariantReport};
use crate::util::{is_prime, prime_power};
use crate::verify::{verify_group, verify_linear_lemmas, ClaimRecord, ClaimStatus, LinearMode};

pub const TOOL: &str = concat!("bicyclic ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub caps: Caps,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// Include the long-running linear check over GL(2,7).
    pub long: bool,
    /// Run the linear-group checks alongside the entries.
    pub linear: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            caps: Caps::default(),
            jobs: 0,
            long: false,
            linear: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub key: String,
    pub expected: Value,
    pub actual: Value,
    pub provenance: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub spec: String,
    pub tags: Vec<String>,
    pub verdict: &'static str,
    pub error: Option<String>,
    pub invariants: Option<InvariantReport>,
    pub bsn: Option<BsnSummary>,
    pub claims: Vec<ClaimRecord>,
    pub expectations: Vec<ExpectationResult>,
}

impl EntryReport {
    pub fn violations(&self) -> usize {
        self.claims.iter().filter(|c| c.is_violation()).count()
    }

    pub fn mismatches(&self) -> usize {
        self.expectations.iter().filter(|e| !e.matched).count()
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// One line per failed claim or mismatched expectation.
    pub fn diff(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(e) = &self.error {
            out.push(format!("{}: error: {e}", self.id));
        }
        for c in self.claims.iter().filter(|c| c.is_violation()) {
            out.push(format!("{}: claim {} fails: {}", self.id, c.id, c.detail));
        }
        for e in self.expectations.iter().filter(|e| !e.matched) {
            out.push(format!(
                "{}: {}: expected {}, got {}",
                self.id, e.key, e.expected, e.actual
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub violations: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub skipped_claims: usize,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: u128,
    pub entries_ms: BTreeMap<String, u128>,
    pub linear_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub catalog: String,
    pub caps: Caps,
    pub long: bool,
    pub warnings: Vec<String>,
    pub entries: Vec<EntryReport>,
    pub linear: Vec<ClaimRecord>,
    pub summary: Summary,
    pub timings: Timings,
}

impl ReportDocument {
    pub fn entry(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// 0 on pass, 1 on a failed claim or mismatched expectation, 2 when only input errors occurred.
    pub fn exit_code(&self) -> i32 {
        if self.summary.violations + self.summary.mismatches > 0 {
            1
        } else if self.summary.errors > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_value(&self, with_timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_timings {
            v.as_object_mut().expect("object").remove("timings");
        }
        v
    }

    pub fn to_json(&self, with_timings: bool) -> String {
        serde_json::to_string_pretty(&self.to_value(with_timings)).expect("report serializes")
    }

    /// Indented `key: value` rendering of the same fields as [`ReportDocument::to_json`].
    pub fn to_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        render_text(&self.to_value(with_timings), 0, &mut out);
        out
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_scalar_like(x) {
                    out.push_str(&format!("{pad}{k}: {x}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_scalar_like(x) {
                    out.push_str(&format!("{pad}- {x}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

/// Scalars, empty containers and arrays of scalars print on one line.
fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| {
            !x.is_object() && !x.as_array().is_some_and(|y| y.iter().any(Value::is_object))
        }),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn is_cyclic(h: &GroupHandle) -> bool {
    h.is_abelian() && h.exponent().is_ok_and(|e| e == h.order())
}

fn is_elementary_abelian(h: &GroupHandle) -> bool {
    h.is_abelian() && h.exponent().is_ok_and(is_prime)
}

fn derived_value(a: &Analysis, key: &str) -> Result<Value> {
    let g = a.group();
    Ok(match key {
        "bsn" => json!(a.bsn()?.verdict()),
        "bsn_obstruction" => serde_json::to_value(&a.bsn()?.obstruction).expect("serializes"),
        "cyclic_normal_orders" => {
            let ns = a.normal_set()?;
            let mut orders: Vec<u64> = ns
                .members()
                .iter()
                .filter(|n| !n.is_trivial() && n.order() != g.order() && is_cyclic(n))
                .map(|n| n.order())
                .collect();
            orders.sort_unstable();
            json!(orders)
        }
        "elementary_normal_cyclic_quotient_orders" => {
            let mut orders = Vec::new();
            for n in a.normal_set()?.members() {
                if !n.is_trivial() && is_elementary_abelian(n) && is_cyclic(g.quotient(n)?.image())
                {
                    orders.push(n.order());
                }
            }
            orders.sort_unstable();
            json!(orders)
        }
        "max_normal_generators" => match prime_power(g.order()) {
            Some((p, _)) => {
                let mut worst = 0;
                for n in a.normal_set()?.members() {
                    if !n.is_trivial() {
                        worst = worst.max(min_generators_p_group(n, p)?);
                    }
                }
                json!(worst)
            }
            None => Value::Null,
        },
        _ => Value::Null,
    })
}

fn check_expectation(a: &Analysis, invariants: &Value, e: &Expectation) -> ExpectationResult {
    let actual = match invariants.get(&e.key) {
        Some(v) => v.clone(),
        None => derived_value(a, &e.key).unwrap_or_else(|err| json!({ "error": err.to_string() })),
    };
    ExpectationResult {
        key: e.key.clone(),
        matched: actual == e.value,
        expected: e.value.clone(),
        actual,
        provenance: e.provenance.clone(),
    }
}

fn failed_entry(entry: &CatalogEntry, error: String) -> EntryReport {
    EntryReport {
        id: entry.id.clone(),
        spec: entry.spec.to_string(),
        tags: entry.tags.clone(),
        verdict: "error",
        error: Some(error),
        invariants: None,
        bsn: None,
        claims: Vec::new(),
        expectations: Vec::new(),
    }
}

/// Invariants, the series verdict, every applicable claim and every expectation of one entry.
pub fn run_entry(entry: &CatalogEntry, caps: Caps) -> EntryReport {
    let g = match construct_with(&entry.spec, caps) {
        Ok(g) => g,
        Err(e) => return failed_entry(entry, e.to_string()),
    };
    let a = Analysis::new(g);
    let invariants = match a.invariants() {
        Ok(r) => r.clone(),
        Err(e) => return failed_entry(entry, e.to_string()),
    };
    let bsn = a.bsn().ok().map(|w| w.summary());
    let claims = verify_group(&a).claims;
    let inv_value = serde_json::to_value(&invariants).expect("serializes");
    let expectations: Vec<ExpectationResult> = entry
        .expected
        .iter()
        .map(|e| check_expectation(&a, &inv_value, e))
        .collect();
    let ok = claims.iter().all(|c| !c.is_violation()) && expectations.iter().all(|e| e.matched);
    EntryReport {
        id: entry.id.clone(),
        spec: entry.spec.to_string(),
        tags: entry.tags.clone(),
        verdict: if ok { "pass" } else { "fail" },
        error: None,
        invariants: Some(invariants),
        bsn,
        claims,
        expectations,
    }
}

fn linear_modes(long: bool) -> Vec<LinearMode> {
    let mut modes = vec![LinearMode::Gl32, LinearMode::Gl2p(3), LinearMode::Gl2p(5)];
    if long {
        modes.push(LinearMode::Gl2p(7));
    }
    modes
}

fn linear_claims(mode: LinearMode, caps: Caps) -> Vec<ClaimRecord> {
    match verify_linear_lemmas(mode, caps) {
        Ok(r) => r.claims,
        Err(e) => vec![ClaimRecord {
            id: match mode {
                LinearMode::Gl32 => "L2.9".to_string(),
                LinearMode::Gl2p(p) => format!("L2.8-{p}"),
            },
            applicable: true,
            holds: false,
            status: ClaimStatus::Skipped,
            detail: e.to_string(),
        }],
    }
}

/// Runs `entries` in parallel and merges the results in catalog order.
pub fn run_entries(
    catalog_name: &str,
    entries: &[&CatalogEntry],
    options: RunOptions,
) -> ReportDocument {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .expect("thread pool");
    let timed: Vec<(EntryReport, u128)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let t = Instant::now();
                let r = run_entry(e, options.caps);
                (r, t.elapsed().as_millis())
            })
            .collect()
    });
    let t_linear = Instant::now();
    let linear: Vec<ClaimRecord> = if options.linear {
        pool.install(|| {
            linear_modes(options.long)
                .par_iter()
                .map(|&m| linear_claims(m, options.caps))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    } else {
        Vec::new()
    };
    let linear_ms = t_linear.elapsed().as_millis();

    let mut warnings = Vec::new();
    if entries.is_empty() {
        warnings.push("no catalog entries selected".to_string());
    }
    let mut timings = Timings {
        linear_ms,
        ..Timings::default()
    };
    let mut reports = Vec::with_capacity(timed.len());
    for (r, ms) in timed {
        timings.entries_ms.insert(r.id.clone(), ms);
        reports.push(r);
    }
    let violations = reports.iter().map(EntryReport::violations).sum::<usize>()
        + linear.iter().filter(|c| c.is_violation()).count();
    let mismatches = reports.iter().map(EntryReport::mismatches).sum();
    let errors = reports.iter().filter(|r| r.error.is_some()).count();
    let skipped_claims = reports
        .iter()
        .flat_map(|r| &r.claims)
        .chain(&linear)
        .filter(|c| c.status == ClaimStatus::Skipped)
        .count();
    let verdict = if violations + mismatches + errors == 0 {
        "pass"
    } else {
        "fail"
    };
    timings.total_ms = start.elapsed().as_millis();
    ReportDocument {
        tool: TOOL,
        catalog: catalog_name.to_string(),
        caps: options.caps,
        long: options.long,
        warnings,
        entries: reports,
        linear,
        summary: Summary {
            entries: entries.len(),
            violations,
            mismatches,
            errors,
            skipped_claims,
            verdict,
        },
        timings,
    }
}
