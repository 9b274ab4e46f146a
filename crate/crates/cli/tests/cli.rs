//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bellchain() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellchain"))
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const TINY_SPEC: &str = "\
protocols = sequential,parallel
nodes = 2,3
t_dp_seconds = 1e-3,1e-2
lambda_bsm = 1.0
length_km = 50
trials = 100
seed = 7
";

#[test]
fn run_prints_summary_and_exits_zero() {
    let output = bellchain()
        .args([
            "run",
            "--protocol",
            "parallel",
            "--nodes",
            "5",
            "--length-km",
            "50",
            "--t-dp",
            "1e-2",
            "--lambda-bsm",
            "1.0",
            "--trials",
            "500",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    for field in [
        "mean fidelity",
        "mean hashing rate",
        "aggregate rate",
        "mean memory time",
        "mean clock time",
        "generation success p",
    ] {
        assert!(text.contains(field), "missing `{field}` in:\n{text}");
    }
}

#[test]
fn run_rejects_too_few_nodes_with_exit_2() {
    let output = bellchain()
        .args(["run", "--protocol", "parallel", "--nodes", "1", "--t-dp", "1e-2"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
    let text = stderr(&output);
    assert!(text.contains("num_nodes") && text.contains("at least 2"), "{text}");
}

#[test]
fn run_rejects_out_of_range_ideality_with_exit_2() {
    let output = bellchain()
        .args(["run", "--protocol", "parallel", "--nodes", "3", "--t-dp", "1e-2", "--lambda-bsm", "1.5"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("bsm_ideality"));
}

#[test]
fn run_per_trial_output_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for path in [&csv_a, &csv_b] {
        let output = bellchain()
            .args([
                "run",
                "--protocol",
                "sequential",
                "--nodes",
                "4",
                "--t-dp",
                "1e-2",
                "--trials",
                "50",
                "--seed",
                "99",
                "--output",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    }
    let bytes_a = std::fs::read(&csv_a).unwrap();
    let bytes_b = std::fs::read(&csv_b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("trial,fidelity,memory_time_s,clock_time_s,hashing_rate"));
}

#[test]
fn run_accepts_entropy_seed() {
    let output = bellchain()
        .args([
            "run", "--protocol", "parallel", "--nodes", "3", "--t-dp", "1e-2", "--trials", "10",
            "--seed", "random",
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 0);
    assert!(stdout(&output).contains("entropy-chosen"));
}

#[test]
fn sweep_writes_csv_and_json_with_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "tiny.spec", TINY_SPEC);
    let base = dir.path().join("out");
    let output = bellchain()
        .args(["sweep", "--spec"])
        .arg(&spec)
        .arg("--output")
        .arg(&base)
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));

    let csv_text = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    // 2 protocols x 2 node counts x 2 dephasing times, plus the header
    assert_eq!(csv_text.lines().count(), 1 + 8);
    let json_text = std::fs::read_to_string(dir.path().join("out.json")).unwrap();
    assert!(json_text.trim_start().starts_with('['));
    assert!(stderr(&output).contains("cell"), "progress lines expected");
}

#[test]
fn sweep_is_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "tiny.spec", TINY_SPEC);
    let mut outputs = Vec::new();
    for (label, workers) in [("w1", "1"), ("w3", "3")] {
        let base = dir.path().join(label);
        let output = bellchain()
            .env("BELLCHAIN_WORKERS", workers)
            .args(["sweep", "--spec"])
            .arg(&spec)
            .arg("--output")
            .arg(&base)
            .output()
            .unwrap();
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
        outputs.push(std::fs::read(dir.path().join(format!("{label}.csv"))).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sweep_parse_error_names_line_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "bad.spec",
        "nodes = 2\nt_dp_seconds = pineapple\nlength_km = 50\n",
    );
    let output = bellchain()
        .args(["sweep", "--spec"])
        .arg(&spec)
        .arg("--output")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
    let text = stderr(&output);
    assert!(text.contains("line 2") && text.contains("t_dp_seconds"), "{text}");
    assert!(!dir.path().join("out.csv").exists());
}

#[test]
fn sweep_empty_node_list_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "empty.spec",
        "nodes =\nt_dp_seconds = 1e-3\nlength_km = 50\n",
    );
    let output = bellchain()
        .args(["sweep", "--spec"])
        .arg(&spec)
        .arg("--output")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn sweep_unwritable_output_exits_1_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "tiny.spec", TINY_SPEC);
    let output = bellchain()
        .args(["sweep", "--spec"])
        .arg(&spec)
        .arg("--output")
        .arg("/nonexistent-dir/out")
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 1);
    assert!(stderr(&output).contains("cannot write"));
}

#[test]
fn validate_filter_runs_subset_and_passes() {
    let output = bellchain().args(["validate", "--only", "ghz"]).output().unwrap();
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("ghz_swap_arity_2_to_8") && text.contains("PASS"), "{text}");
    assert!(!text.contains("closed_form_equivalence_4q"));
}

#[test]
fn validate_impossible_tolerance_reports_failures_and_exits_1() {
    let output = bellchain()
        .args(["validate", "--tolerance", "1e-18", "--only", "closed_form"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 1);
    assert!(stdout(&output).contains("FAIL"));
    assert!(stderr(&output).contains("deviated by"));
}

#[test]
fn validate_unknown_filter_exits_2() {
    let output = bellchain()
        .args(["validate", "--only", "no-such-check"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn help_documents_units() {
    let output = bellchain().args(["run", "--help"]).output().unwrap();
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert!(text.contains("(km)"), "{text}");
    assert!(text.contains("(seconds)"), "{text}");
    assert!(text.contains("dimensionless"), "{text}");

    let output = bellchain().args(["--help"]).output().unwrap();
    assert!(stdout(&output).contains("BELLCHAIN_WORKERS"));
}

#[test]
fn bad_worker_env_exits_2() {
    let output = bellchain()
        .env("BELLCHAIN_WORKERS", "zero")
        .args(["validate", "--only", "ghz"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("BELLCHAIN_WORKERS"));
}
