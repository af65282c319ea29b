//! End-to-end CLI behavior: exit codes, report formats, and the report
//! round-trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_dfderive")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(exe()).args(args).output().expect("spawn cli")
}

#[test]
fn passing_scenario_exits_zero() {
    let scenario = root().join("scenarios/example_2_1.json");
    let out = run(&["verify", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
}

#[test]
fn verdict_mismatch_exits_one() {
    let out = run(&["verify", fixture("expect_mismatch.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("MISMATCH"));
}

#[test]
fn malformed_scenario_exits_two() {
    let out = run(&["verify", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dangling_reference_exits_two_and_names_it() {
    let out = run(&["verify", fixture("dangling_ref.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("delta3"), "{}", stderr);
}

#[test]
fn refuted_declared_fact_exits_three() {
    let scenario = root().join("scenarios/negative_declared_z4.json");
    let out = run(&["verify", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("two_torsion_free"), "{}", stderr);
}

#[test]
fn hypothesis_failure_exits_three() {
    let scenario = root().join("scenarios/negative_m2z2.json");
    let out = run(&["oracle", scenario.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn empty_task_list_is_a_valid_noop() {
    let out = run(&["verify", fixture("empty_tasks.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_report_round_trips_through_the_report_verb() {
    let scenario = root().join("scenarios/example_2_4.json");
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "verify",
        scenario.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let rendered = run(&["report", report_path.to_str().unwrap()]);
    assert_eq!(rendered.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&rendered.stdout);
    assert!(stdout.contains("example_2_4"));
    assert!(stdout.contains("pass"));

    // and as json
    let rendered = run(&["report", report_path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(rendered.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_slice(&rendered.stdout).expect("report re-parses");
    assert_eq!(doc["scenario"], "example_2_4");
}

#[test]
fn seed_override_reflects_in_the_report() {
    let scenario = root().join("scenarios/example_2_4.json");
    let out = run(&[
        "verify",
        scenario.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "777",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["seed"], 777);
}
