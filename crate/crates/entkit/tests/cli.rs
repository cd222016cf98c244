//! Smoke tests for the `entkit` binary: every subcommand runs end to end,
//! the table outputs match the stored references byte for byte, and the
//! report envelope carries the documented schema tag.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 output")
}

fn json_of(args: &[&str]) -> Value {
    let text = stdout_of(args);
    serde_json::from_str(&text).expect("valid JSON output")
}

/// Writes a throwaway state file and returns its path.
fn temp_state(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "entkit-cli-{}-{name}.json",
        std::process::id()
    ));
    std::fs::write(&path, contents).expect("temp file writes");
    path
}

const BELL_FILE: &str = r#"{
  "modes": [2, 2],
  "kind": "pure",
  "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]
}"#;

const GHZ3_FILE: &str = r#"{
  "modes": [2, 2, 2],
  "kind": "pure",
  "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0, 0],
                 [0, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]
}"#;

/// Half a basis-state projector plus half a Bell projector: a rank-2 density.
const RANK2_FILE: &str = r#"{
  "modes": [2, 2],
  "kind": "density",
  "matrix": [
    [[0.75, 0], [0, 0], [0, 0], [0.25, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0, 0], [0, 0], [0, 0], [0, 0]],
    [[0.25, 0], [0, 0], [0, 0], [0.25, 0]]
  ]
}"#;

const MIXED_FILE: &str = r#"{
  "modes": [2, 2],
  "kind": "density",
  "matrix": [
    [[0.25, 0], [0, 0], [0, 0], [0, 0]],
    [[0, 0], [0.25, 0], [0, 0], [0, 0]],
    [[0, 0], [0, 0], [0.25, 0], [0, 0]],
    [[0, 0], [0, 0], [0, 0], [0.25, 0]]
  ]
}"#;

#[test]
fn tables_match_stored_references() {
    let goldens = [
        ("2", include_str!("golden/table2.csv")),
        ("3", include_str!("golden/table3.csv")),
        ("4", include_str!("golden/table4.csv")),
    ];
    for (which, golden) in goldens {
        let got = stdout_of(&["tables", "--which", which]);
        assert_eq!(got.trim_end(), golden.trim_end(), "table {which}");
    }
}

#[test]
fn compute_reports_a_bell_state() {
    let path = temp_state("bell", BELL_FILE);
    let report = json_of(&["compute", "--state", path.to_str().unwrap()]);
    assert_eq!(report["schema"], "entkit-report-v1");
    assert_eq!(report["command"], "compute");
    let ent = report["data"]["ent"].as_f64().unwrap();
    assert!((ent - 1.0).abs() <= 1e-9, "Bell ent {ent}");
    assert_eq!(report["data"]["lstar"], 2);

    let csv = stdout_of(&[
        "compute",
        "--state",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(csv.starts_with("quantity,value"));
    assert!(csv.contains("purity_mode_2"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn compute_rejects_a_genuinely_mixed_state() {
    let path = temp_state("mixed", MIXED_FILE);
    let output = run(&["compute", "--state", path.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("roof"), "stderr should point at the roof path: {stderr}");
    let _ = std::fs::remove_file(path);
}

#[test]
fn lstar_lists_residuals_with_membership() {
    let report = json_of(&["lstar", "--modes", "2,2,3"]);
    assert_eq!(report["data"]["lstar_set"], serde_json::json!([4]));
    let residuals = report["data"]["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 3); // L = 2, 3, 4
    let l4 = &residuals[2];
    assert_eq!(l4["residual_exact"], "1/48");
    assert_eq!(l4["in_lstar_set"], true);
}

#[test]
fn a13_trace_exposes_the_walkthrough() {
    let report = json_of(&["a13", "--modes", "2,2,3", "--start", "1", "--trace"]);
    assert_eq!(
        report["data"]["candidate_levels"],
        serde_json::json!([5, 6, 8, 9, 10, 11, 12])
    );
    assert_eq!(
        report["data"]["matched_sets"],
        serde_json::json!([[1, 5, 8, 12], [1, 5, 9, 10], [1, 6, 8, 10], [1, 6, 9, 11]])
    );
}

#[test]
fn meb_lists_both_generating_sets() {
    let report = json_of(&["meb", "--modes", "3,3"]);
    let sets = report["data"]["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 2);
    assert_eq!(
        sets[0]["rows"],
        serde_json::json!([[1, 5, 9], [2, 6, 7], [3, 4, 8]])
    );

    let expanded = json_of(&["meb", "--modes", "3,3", "--expand"]);
    let states = expanded["data"]["sets"][0]["states"].as_array().unwrap();
    assert_eq!(states.len(), 9);
}

#[test]
fn theta_sweep_emits_the_requested_points() {
    let csv = stdout_of(&["theta-sweep", "--modes", "2,2,3", "--points", "10"]);
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    assert_eq!(lines.len(), 11, "header plus ten rows");
    assert!(lines[0].starts_with("theta"));
}

#[test]
fn squeezed_gauge_round_trip() {
    let report = json_of(&[
        "squeezed",
        "--format",
        "json",
        "--points",
        "5",
        "--target",
        "0.999",
    ]);
    let r_star = report["data"]["target"]["r_star"].as_f64().unwrap();
    assert!((r_star - 3.80).abs() <= 0.01, "r* = {r_star}");
}

#[test]
fn entarray_reports_ghz_cells() {
    let path = temp_state("ghz3", GHZ3_FILE);
    let report = json_of(&["entarray", "--state", path.to_str().unwrap()]);
    assert_eq!(report["data"]["vector_dim"], 4);
    let vector = report["data"]["vector"].as_array().unwrap();
    for cell in vector {
        assert_ne!(cell["status"], "unavailable");
    }
    let one_norm = report["data"]["vector_one_norm"].as_f64().unwrap();
    assert!((one_norm - 1.0).abs() <= 1e-6, "|vector|_1 = {one_norm}");
    let _ = std::fs::remove_file(path);
}

#[test]
fn roof_surfaces_for_a_rank2_density() {
    let path = temp_state("rank2", RANK2_FILE);
    let report = json_of(&[
        "roof",
        "--state",
        path.to_str().unwrap(),
        "--grid",
        "12,12",
        "--format",
        "json",
    ]);
    let minimum = report["data"]["minimum"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&minimum));
    assert_eq!(report["data"]["grid"], serde_json::json!([12, 12]));

    let csv = stdout_of(&[
        "roof",
        "--state",
        path.to_str().unwrap(),
        "--grid",
        "6,6",
        "--format",
        "csv",
    ]);
    assert!(csv.trim_end().lines().last().unwrap().ends_with("minimum"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn fuzz_small_run_exits_clean() {
    let report = json_of(&["fuzz", "--count", "3", "--max-dim", "8"]);
    assert_eq!(report["data"]["total_violations"], 0);
}

#[test]
fn output_file_flag_writes_the_report() {
    let out = std::env::temp_dir().join(format!(
        "entkit-cli-{}-out.json",
        std::process::id()
    ));
    let _ = stdout_of(&[
        "lstar",
        "--modes",
        "2,2",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).expect("report file written");
    let report: Value = serde_json::from_str(&text).expect("valid JSON in file");
    assert_eq!(report["schema"], "entkit-report-v1");
    let _ = std::fs::remove_file(out);
}

#[test]
fn unknown_flags_are_rejected() {
    let output = run(&["lstar", "--modes", "2,2", "--no-such-flag"]);
    assert!(!output.status.success());
}
