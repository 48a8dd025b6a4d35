//! End-to-end CLI checks through `cli::run` with captured streams.

mod common;

use crn_mono::cli::{run, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("crn-mono".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = run(&argv, &mut stdout, &mut stderr);
    (
        code,
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    common::fixture(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_positive_verdict() {
    let (code, out, err) = invoke(&["analyze", &fixture("michaelis.crn")]);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    assert!(out.starts_with("verdict: PositivelyMonotonic"));
    assert!(out.contains("sigma(R_IN)*sigma(R_OUT) = +1"));
    assert!(out.contains("R_IN +1"));
    assert!(out.contains("R_OUT +1"));
}

#[test]
fn analyze_negative_verdict() {
    let (code, out, _) = invoke(&["analyze", &fixture("consuming.crn")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verdict: NegativelyMonotonic"));
    assert!(out.contains("sigma(R_IN)*sigma(R_OUT) = -1"));
}

#[test]
fn analyze_inconclusive_with_cycle() {
    let (code, out, _) = invoke(&["analyze", &fixture("competing.crn")]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert!(out.starts_with("verdict: Inconclusive"));
    assert!(out.contains("certificate: odd-negative cycle"));
}

#[test]
fn analyze_io_flags_override_file() {
    let (code, out, _) = invoke(&[
        "analyze",
        &fixture("consuming.crn"),
        "--input",
        "A",
        "--output",
        "C",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("input: A  output: C"));
}

#[test]
fn analyze_rejects_same_io_pair() {
    let (code, _, err) = invoke(&[
        "analyze",
        &fixture("michaelis.crn"),
        "--input",
        "P",
        "--output",
        "P",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("distinct"));
}

#[test]
fn analyze_unknown_species_flag() {
    let (code, _, err) = invoke(&["analyze", &fixture("michaelis.crn"), "--input", "Zz"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Zz"));
}

#[test]
fn missing_file_is_a_usage_error() {
    let (code, _, err) = invoke(&["analyze", "/no/such/file.crn"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn parse_error_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.crn");
    std::fs::write(&path, "A -> B\n").unwrap(); // missing rate
    let (code, _, err) = invoke(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("bad.crn:1:"), "got: {err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, err) = invoke(&["analyze", &fixture("michaelis.crn"), "--frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("analyze"));
}

#[test]
fn analyze_json_report() {
    let (code, out, _) = invoke(&["analyze", &fixture("erk.crn"), "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "PositivelyMonotonic");
    assert_eq!(v["input"], "Raf");
    assert_eq!(v["output"], "PPMek1");
    assert_eq!(v["sigma_product"], 1);
    assert_eq!(v["disconnected_io"], false);
    assert_eq!(v["certificate"], serde_json::Value::Null);
    assert_eq!(v["sigma"]["R_IN"], 1);
    assert_eq!(v["sigma"]["R_OUT"], 1);
}

#[test]
fn inconclusive_json_certificate() {
    let (code, out, _) = invoke(&["analyze", &fixture("competing.crn"), "--json"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "Inconclusive");
    assert_eq!(v["sigma"], serde_json::Value::Null);
    assert_eq!(v["certificate"]["kind"], "odd_negative_cycle");
    assert_eq!(v["certificate"]["negative_edges"], 1);
}

#[test]
fn graph_sr_dot_output() {
    let (code, out, _) = invoke(&["graph", &fixture("michaelis.crn"), "--kind", "sr"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("digraph sr {"));
    assert!(out.contains("\"E\" [shape=ellipse];"));
    assert!(out.contains("\"R1\" [shape=box];"));
}

#[test]
fn graph_r_dot_augmented() {
    let (code, out, _) = invoke(&[
        "graph",
        &fixture("michaelis.crn"),
        "--kind",
        "r",
        "--augment",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("graph r {"));
    assert!(out.contains("R_IN"));
    assert!(out.contains("R_OUT"));
}

#[test]
fn graph_output_is_deterministic() {
    let a = invoke(&["graph", &fixture("erk.crn"), "--kind", "r", "--augment"]);
    let b = invoke(&["graph", &fixture("erk.crn"), "--kind", "r", "--augment"]);
    assert_eq!(a, b);
}

#[test]
fn simulate_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let (code, _, err) = invoke(&[
        "simulate",
        &fixture("chain.crn"),
        "--t-end",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("time,A,B"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn simulate_rejects_bad_t_end() {
    let (code, _, err) = invoke(&["simulate", &fixture("chain.crn"), "--t-end=-1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("t-end"));
}

#[test]
fn sweep_writes_csv_and_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let (code, out, err) = invoke(&[
        "sweep",
        &fixture("chain.crn"),
        "--from",
        "1",
        "--to",
        "4",
        "--points",
        "4",
        "--t-end",
        "50",
        "--empirical",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    assert!(out.contains("empirical: ConsistentPositive"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("input_value,output_ss,converged\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn sweep_rejects_bad_range() {
    let (code, _, err) = invoke(&[
        "sweep",
        &fixture("chain.crn"),
        "--from",
        "4",
        "--to",
        "1",
        "--points",
        "4",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--from"));
}

#[test]
fn oracle_agrees_on_fixture() {
    let (code, out, _) = invoke(&["oracle", &fixture("erk.crn")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("agreement: true"));
}

#[test]
fn analyze_stdout_is_deterministic() {
    let a = invoke(&["analyze", &fixture("erk.crn"), "--json"]);
    let b = invoke(&["analyze", &fixture("erk.crn"), "--json"]);
    assert_eq!(a, b);
}
