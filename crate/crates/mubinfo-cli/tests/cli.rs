//! End-to-end tests of the `mubinfo` binary: exit codes, output formats,
//! seed echoing, and input handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mubinfo_core::state::DensityMatrix;

fn mubinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn write_state(dir: &Path, name: &str, rho: &DensityMatrix) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&rho.to_doc()).unwrap()).unwrap();
    path
}

fn pure_z(dir: &Path) -> PathBuf {
    let rho = mubinfo_core::state::BlochVector::new(0.0, 0.0, 1.0)
        .to_density()
        .unwrap();
    write_state(dir, "purez.json", &rho)
}

#[test]
fn check_accepts_a_valid_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["valid"], serde_json::Value::Bool(true));
    assert!(doc["hermitian_asymmetry"].as_f64().unwrap() <= 1e-10);
    assert!(doc["trace_residual"].as_f64().unwrap() <= 1e-10);
    assert!(doc["min_eigenvalue"].as_f64().unwrap() >= -1e-10);
}

#[test]
fn check_rejects_an_invalid_state_with_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // Eigenvalues ~1.0099 and ~-0.0099: not positive semidefinite.
    std::fs::write(
        &path,
        r#"{"dim":2,"re":[[0.6,0.5],[0.5,0.4]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = mubinfo(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["valid"], serde_json::Value::Bool(false));
    assert!(doc["min_eigenvalue"].as_f64().unwrap() < -1e-3);
}

#[test]
fn report_on_pure_z_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&["report", "--input", path.to_str().unwrap(), "--dim", "2"]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["totals"]["i_total"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert!(doc["totals"]["von_neumann_bits"].as_f64().unwrap().abs() <= 1e-12);
}

#[test]
fn report_csv_round_trips_through_the_library_writer() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&[
        "report",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    let rho = mubinfo_core::state::BlochVector::new(0.0, 0.0, 1.0)
        .to_density()
        .unwrap();
    let mubs = mubinfo_core::MubSet::canonical(2).unwrap();
    let expected = mubinfo_core::infomeasure::info_report(&rho, &mubs, false)
        .unwrap()
        .to_csv();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn entropy_of_the_maximally_mixed_qubit() {
    let dir = tempfile::tempdir().unwrap();
    let rho = DensityMatrix::maximally_mixed(2).unwrap();
    let path = write_state(dir.path(), "mixed.json", &rho);
    let out = mubinfo(&["entropy", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["von_neumann_bits"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((doc["purity"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
}

#[test]
fn truncated_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trunc.json");
    std::fs::write(&path, "{\"dim\": 2, \"re\": [[1.0").unwrap();
    let out = mubinfo(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = mubinfo(&["entropy", "--input", "/no/such/file.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn dim_flag_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&["report", "--input", path.to_str().unwrap(), "--dim", "3"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("does not match"));
}

#[test]
fn unknown_flags_and_commands_are_rejected() {
    assert_eq!(exit_code(&mubinfo(&["report", "--bogus"])), 2);
    assert_eq!(exit_code(&mubinfo(&["frobnicate"])), 2);
}

#[test]
fn schema_violation_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ragged.json");
    std::fs::write(
        &path,
        r#"{"dim":2,"re":[[0.5,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = mubinfo(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("`re`"), "stderr: {}", stderr(&out));
}

#[test]
fn every_run_echoes_the_resolved_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&["report", "--input", path.to_str().unwrap()]);
    assert!(stderr(&out).contains("seed: 0"));

    let out = mubinfo(&["invariance", "--dim", "2", "--trials", "5", "--seed", "42"]);
    assert!(stderr(&out).contains("seed: 42"));

    let out = mubinfo(&["mubs", "--dim", "2"]);
    assert!(stderr(&out).contains("seed: canonical"));
}

#[test]
fn inputs_are_never_mutated() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let before = std::fs::read(&path).unwrap();
    for args in [
        vec!["check", "--input", path.to_str().unwrap()],
        vec!["report", "--input", path.to_str().unwrap()],
        vec!["bzinfo", "--input", path.to_str().unwrap()],
    ] {
        mubinfo(&args);
    }
    assert_eq!(before, std::fs::read(&path).unwrap());
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("result.json");
    let out = mubinfo(&[
        "invariance",
        "--dim",
        "2",
        "--trials",
        "5",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["name"], "invariance");
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));
}

#[test]
fn unsupported_mub_dimension_is_reported() {
    let out = mubinfo(&["mubs", "--dim", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("complete MUB set not provided"));
}

#[test]
fn grouping_demo_rejects_non_qubit_dims() {
    let out = mubinfo(&["grouping-demo", "--dim", "3", "--trials", "5"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sequential_basis_indices_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let path = pure_z(dir.path());
    let out = mubinfo(&[
        "sequential",
        "--input",
        path.to_str().unwrap(),
        "--first",
        "9",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn sequential_shows_the_collapse() {
    let dir = tempfile::tempdir().unwrap();
    // |x+>: direct x measurement is deterministic, z-then-x is uniform.
    let rho = mubinfo_core::state::BlochVector::new(1.0, 0.0, 0.0)
        .to_density()
        .unwrap();
    let path = write_state(dir.path(), "purex.json", &rho);
    let out = mubinfo(&[
        "sequential",
        "--input",
        path.to_str().unwrap(),
        "--first",
        "0",
        "--second",
        "1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["direct_second"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((doc["second_marginal"][0].as_f64().unwrap() - 0.5).abs() <= 1e-12);
}

#[test]
fn haar_avg_needs_a_dimension_or_an_input() {
    let out = mubinfo(&["haar-avg", "--trials", "10000"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("--dim"));
}

#[test]
fn povm_export_carries_the_completeness_residual() {
    let out = mubinfo(&["povm-eq1", "--dim", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["element_count"], 12);
    assert!(doc["completeness_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn rotated_mub_export_is_seeded_and_valid() {
    let out = mubinfo(&["mubs", "--dim", "3", "--seed", "11"]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["seed"], 11);
    assert!(doc["max_unbiasedness_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(doc["mub_set"]["bases"].as_array().unwrap().len(), 4);
}
