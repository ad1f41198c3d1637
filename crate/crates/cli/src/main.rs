use std::path::PathBuf;
use std::process::ExitCode;

use bicyclic_core::catalog::{parse_catalog, shipped_catalog, Catalog, CatalogEntry};
use bicyclic_core::construct::{construct_with, GroupSpec};
use bicyclic_core::lattice::subgroup_lattice;
use bicyclic_core::recognize::recognize_small;
use bicyclic_core::report::{run_entries, ReportDocument, RunOptions};
use bicyclic_core::Caps;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Bicyclic-Sylow normal series: group analyses and theorem sweeps.
#[derive(Debug, Parser)]
#[command(name = "bicyclic", version)]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CapArgs {
    /// Largest group order enumerated element by element.
    #[arg(long, global = true, env = "BICYCLIC_CAP_ENUMERATION")]
    cap_enumeration: Option<u64>,
    /// Largest index realised as a permutation quotient.
    #[arg(long, global = true, env = "BICYCLIC_CAP_QUOTIENT_DEGREE")]
    cap_quotient_degree: Option<u64>,
    /// Largest group order whose subgroup lattice is built.
    #[arg(long, global = true, env = "BICYCLIC_CAP_LATTICE")]
    cap_lattice: Option<u64>,
    /// Largest number of coset-table rows.
    #[arg(long, global = true, env = "BICYCLIC_CAP_COSET_ROWS")]
    cap_coset_rows: Option<u64>,
    /// Size above which intersections backtrack instead of filtering.
    #[arg(long, global = true, env = "BICYCLIC_CAP_INTERSECTION_FILTER")]
    cap_intersection_filter: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            enumeration: self.cap_enumeration.unwrap_or(d.enumeration),
            quotient_degree: self.cap_quotient_degree.unwrap_or(d.quotient_degree),
            lattice: self.cap_lattice.unwrap_or(d.lattice),
            coset_rows: self.cap_coset_rows.unwrap_or(d.coset_rows),
            intersection_filter: self
                .cap_intersection_filter
                .unwrap_or(d.intersection_filter),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Include the timing block.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyse one group, given as a catalog id or an inline spec.
    Check {
        target: String,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run every verifier over a catalog.
    Sweep {
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Keep only entries carrying this tag (or with this id); skips the linear-group checks.
        #[arg(long)]
        filter: Option<String>,
        /// Worker threads (0 picks the number of cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Include the GL(2,7) subgroup check.
        #[arg(long)]
        long: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce the worked examples and compare against their stated values.
    Examples {
        #[command(flatten)]
        output: Output,
    },
    /// Print the conjugacy classes of subgroups of a group.
    Lattice {
        target: String,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn load_catalog(path: Option<&PathBuf>) -> Result<(String, Catalog), String> {
    match path {
        None => Ok(("shipped".to_string(), shipped_catalog())),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let catalog = parse_catalog(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok((p.display().to_string(), catalog))
        }
    }
}

/// A catalog entry by id, or an inline spec wrapped as an entry.
fn resolve(target: &str, catalog: &Catalog) -> Result<CatalogEntry, String> {
    if let Some(e) = catalog.get(target) {
        return Ok(e.clone());
    }
    let spec =
        GroupSpec::parse(target).map_err(|e| format!("{target}: not a catalog id, and {e}"))?;
    Ok(CatalogEntry {
        id: "inline".to_string(),
        spec,
        tags: Vec::new(),
        expected: Vec::new(),
    })
}

fn emit(doc: &ReportDocument, output: &Output) -> ExitCode {
    match output.format {
        Format::Text => print!("{}", doc.to_text(output.timings)),
        Format::Json => println!("{}", doc.to_json(output.timings)),
    }
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    for line in doc.entries.iter().flat_map(|e| e.diff()) {
        eprintln!("{line}");
    }
    for c in doc.linear.iter().filter(|c| c.is_violation()) {
        eprintln!("claim {} fails: {}", c.id, c.detail);
    }
    ExitCode::from(doc.exit_code() as u8)
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn lattice_dump(entry: &CatalogEntry, caps: Caps) -> Result<String, String> {
    let g = construct_with(&entry.spec, caps).map_err(|e| e.to_string())?;
    let lattice = subgroup_lattice(&g).map_err(|e| e.to_string())?;
    let maximal = lattice.maximal_class_indices();
    let mut out = format!(
        "group {} of order {}: {} classes, {} subgroups\n",
        entry.spec,
        g.order(),
        lattice.len(),
        lattice.subgroup_count()
    );
    for (i, c) in lattice.classes().iter().enumerate() {
        let name = recognize_small(&c.representative).map_err(|e| e.to_string())?;
        let mark = if maximal.contains(&i) { " maximal" } else { "" };
        out.push_str(&format!(
            "class {i}: order {} size {} type {name}{mark}\n",
            c.order, c.size
        ));
    }
    for (a, b) in lattice.inclusion_edges() {
        out.push_str(&format!("contains {a} > {b}\n"));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.caps.caps();
    match cli.command {
        Command::Check {
            target,
            catalog,
            output,
        } => {
            let (name, catalog) = match load_catalog(catalog.as_ref()) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            let entry = match resolve(&target, &catalog) {
                Ok(e) => e,
                Err(e) => return input_error(e),
            };
            let options = RunOptions {
                caps,
                linear: false,
                ..RunOptions::default()
            };
            emit(&run_entries(&name, &[&entry], options), &output)
        }
        Command::Sweep {
            catalog,
            filter,
            jobs,
            long,
            output,
        } => {
            let (name, catalog) = match load_catalog(catalog.as_ref()) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            let entries = catalog.filtered(filter.as_deref());
            let options = RunOptions {
                caps,
                jobs,
                long,
                linear: filter.is_none(),
            };
            emit(&run_entries(&name, &entries, options), &output)
        }
        Command::Examples { output } => {
            let catalog = shipped_catalog();
            let entries = catalog.filtered(Some("worked-example"));
            let options = RunOptions {
                caps,
                linear: false,
                ..RunOptions::default()
            };
            emit(&run_entries("shipped", &entries, options), &output)
        }
        Command::Lattice { target, catalog } => {
            let result = load_catalog(catalog.as_ref())
                .and_then(|(_, c)| resolve(&target, &c))
                .and_then(|e| lattice_dump(&e, caps));
            match result {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
    }
}
