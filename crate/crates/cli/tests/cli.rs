use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn bicyclic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicyclic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn catalog_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn examples_pass() {
    let o = bicyclic(&["examples", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["verdict"], "pass");
    assert_eq!(doc["entries"].as_array().unwrap().len(), 6);
    assert!(doc.get("timings").is_none());
}

#[test]
fn check_inline_spec() {
    let o = bicyclic(&["check", "symmetric(4)", "--format", "json", "--timings"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = &doc["entries"][0];
    assert_eq!(entry["id"], "inline");
    assert_eq!(entry["invariants"]["order"], 24);
    assert_eq!(entry["bsn"]["verdict"], "has-property");
    assert!(doc["timings"]["total_ms"].is_number());
}

#[test]
fn check_catalog_id_as_text() {
    let o = bicyclic(&["check", "e16-by-z5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("verdict: \"lacks-property\""), "{text}");
    assert!(text.contains("kind: \"chief-factor\""), "{text}");
}

#[test]
fn mismatch_exits_one_with_diff() {
    let f = catalog_file("entry c6\nspec cyclic(6)\nexpect order 7 -- deliberately wrong\n");
    let o = bicyclic(&[
        "sweep",
        "--catalog",
        f.path().to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("c6: order: expected 7, got 6"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn capped_entry_exits_two() {
    let f = catalog_file("entry s6\nspec symmetric(6)\n");
    let o = bicyclic(&[
        "--cap-lattice",
        "10",
        "--cap-enumeration",
        "10",
        "sweep",
        "--catalog",
        f.path().to_str().unwrap(),
        "--filter",
        "s6",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn bad_input_exits_two() {
    let o = bicyclic(&["check", "frobnicate(3)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
    let f = catalog_file("spec cyclic(2)\n");
    let o = bicyclic(&["sweep", "--catalog", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at 1:1"), "{}", stderr(&o));
}

#[test]
fn empty_selection_warns() {
    let o = bicyclic(&["sweep", "--filter", "no-such-tag"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning: no catalog entries selected"));
}

#[test]
fn negative_controls_filter() {
    let o = bicyclic(&["sweep", "--filter", "negative-control", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries
        .iter()
        .all(|e| e["bsn"]["verdict"] == "lacks-property"));
    assert!(doc["linear"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_output_is_independent_of_jobs() {
    let one = bicyclic(&[
        "sweep", "--filter", "p-group", "--jobs", "1", "--format", "json",
    ]);
    let many = bicyclic(&[
        "sweep", "--filter", "p-group", "--jobs", "4", "--format", "json",
    ]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&many));
}

#[test]
fn lattice_of_s3() {
    let o = bicyclic(&["lattice", "symmetric(3)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("4 classes, 6 subgroups"), "{text}");
    assert!(text.contains("type S3"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("contains ")));
}
