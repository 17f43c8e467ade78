//! End-to-end tests of the `hyperent` binary: exit codes, output shapes,
//! and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("hyperent-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn state_prints_exact_pattern() {
    let out = run(&["state", "--family", "single-edge", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("sign pattern: +++++++++++++++-"), "{text}");
    assert!(text.contains("+1/4"));
}

#[test]
fn state_checks_stabilizers() {
    let out = run(&[
        "state",
        "--family",
        "star",
        "--n",
        "2",
        "--check-stabilizers",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all stabilizers OK"));
}

#[test]
fn state_missing_catalog_name_exits_2() {
    let path = temp_file(
        "catalog-two.txt",
        "name=a\nvertices=2\nedges={1,2}\n\nname=b\nvertices=2\nedges=\n",
    );
    let out = run(&[
        "state",
        "--catalog",
        path.to_str().unwrap(),
        "--name",
        "missing",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
}

#[test]
fn thresholds_table_values() {
    let out = run(&["thresholds", "--family", "clover", "--n", "3..8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in ["3,0.429", "5,0.820", "6,0.857", "7,0.881", "8,0.899"] {
        assert!(text.contains(needle), "missing {needle} in {text}");
    }
    // the exact root of the order-4 overlap polynomial
    assert!(text.contains("4,0.760"), "{text}");

    let out = run(&["thresholds", "--family", "flower", "--n", "3..9"]);
    let text = stdout(&out);
    for needle in ["3,0.429", "5,0.684", "7,0.782", "9,0.834"] {
        assert!(text.contains(needle), "missing {needle} in {text}");
    }

    let out = run(&["thresholds", "--family", "flower", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gmn_sweep_requires_explicit_normalization() {
    let out = run(&[
        "sweep",
        "--family",
        "single-edge",
        "--n",
        "3",
        "--measure",
        "gmn",
        "--grid",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negativity_sweep_is_monotone_for_uniform_orders() {
    let out = run(&[
        "sweep",
        "--family",
        "complete-3-uniform",
        "--n",
        "4",
        "--measure",
        "negativity",
        "--bipartition",
        "1|2,3,4",
        "--grid",
        "6",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let values: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('p'))
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 6);
    for pair in values.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-9, "not monotone: {values:?}");
    }
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let out_a = temp_file("sweep-a.csv", "");
    let out_b = temp_file("sweep-b.csv", "");
    for path in [&out_a, &out_b] {
        let out = run(&[
            "sweep",
            "--family",
            "clover",
            "--n",
            "5",
            "--measure",
            "overlap",
            "--grid",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);
    let _ = std::fs::remove_file(out_a);
    let _ = std::fs::remove_file(out_b);
}

#[test]
fn gmn_sweep_resolution_two_gives_four_rows() {
    let path = temp_file(
        "catalog-demo.txt",
        "name=demo\nvertices=4\nedges={1,2},{1,2,3,4}\n",
    );
    let out = run(&[
        "sweep",
        "--catalog",
        path.to_str().unwrap(),
        "--measure",
        "gmn",
        "--normalization",
        "trace-one",
        "--grid",
        "2",
    ]);
    assert!(out.status.success());
    let rows = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('p'))
        .count();
    assert_eq!(rows, 4);
    let _ = std::fs::remove_file(path);
}

#[test]
fn sweep_json_is_machine_readable() {
    let out = run(&[
        "sweep",
        "--family",
        "star",
        "--n",
        "3",
        "--measure",
        "witness",
        "--grid",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["tool"], "hyperent");
    assert_eq!(doc["measure"], "witness");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn overlap_reports_polynomial_and_threshold() {
    let out = run(&["overlap", "--family", "clover", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("overlap: (7*p + 9)/16"), "{text}");
    assert!(text.contains("critical probability: 0.428571429"), "{text}");
}

#[test]
fn catalog_validate_accepts_and_rejects() {
    let good = temp_file(
        "catalog-good.txt",
        "# demo\nname=h14\nvertices=4\nedges={1,2,3},{1,2,4},{1,3,4},{2,3,4}\n",
    );
    let out = run(&["catalog-validate", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("record 1: OK"));
    let _ = std::fs::remove_file(good);

    let bad = temp_file(
        "catalog-bad.txt",
        "vertices=3\nedges={1,2,3},{1,2,3}\n",
    );
    let out = run(&["catalog-validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("INVALID"));
    let _ = std::fs::remove_file(bad);

    let out = run(&["catalog-validate", "/nonexistent/path.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn randomize_prints_branch_weights() {
    let out = run(&[
        "randomize",
        "--family",
        "complete-3-uniform",
        "--n",
        "4",
        "--p",
        "0.5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let weights: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("branch"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(weights.len(), 16);
    let total: f64 = weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);

    let out = run(&[
        "randomize",
        "--family",
        "single-edge",
        "--n",
        "2",
        "--symbolic",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0,p,\"{1,2}\""), "{text}");
    assert!(text.contains("1,-p + 1,\"\""), "{text}");
}

#[test]
fn capacity_error_exits_1() {
    // All 35 triples on 7 vertices exceed the 20-edge enumeration cap.
    let out = run(&["overlap", "--family", "complete-3-uniform", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
}
