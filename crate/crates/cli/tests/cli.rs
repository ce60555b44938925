//! End-to-end tests driving the compiled binary: exit codes, report fields,
//! and determinism of seeded runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_parisom")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

#[test]
fn validate_projection() {
    let out = run(&["validate", &fixture("projection_2x2.json")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("rank: 1"), "{text}");
    assert!(text.contains("null_dim: 1"), "{text}");
    assert!(text.contains("corank: 1"), "{text}");
    assert!(text.contains("balanced: true"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn validate_identity_triple() {
    let out = run(&["validate", &fixture("identity_2x2.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 2") && text.contains("null_dim: 0") && text.contains("corank: 0"));
}

#[test]
fn validate_rejects_non_isometry_with_exit_2() {
    let out = run(&["--json", "validate", &fixture("not_isometry_2x2.json")]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // V = 0.8 P for a rank-one projection: residual |0.8³ − 0.8| = 0.288.
    let residual = doc["results"]["residual"].as_f64().unwrap();
    assert!((residual - 0.288).abs() < 1e-12, "residual {residual}");
    assert_eq!(doc["results"]["verdict"], "FAIL");
}

#[test]
fn parse_error_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "not a matrix document").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    let missing = dir.path().join("missing.json");
    let out = run(&["validate", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn norm_on_strict_gap_fixture() {
    let out = run(&[
        "--json",
        "norm",
        &fixture("projection_2x2.json"),
        &fixture("gap_x.json"),
        &fixture("gap_y.json"),
        "--seed",
        "5",
        "--grid-oracle",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = &doc["results"];
    let quotient = results["quotient_norm"].as_f64().unwrap();
    let ambient = results["ambient_norm"].as_f64().unwrap();
    let ratio = results["ratio_ambient_over_quotient"].as_f64().unwrap();
    assert!((quotient - 1.118033988749895).abs() < 1e-7, "quotient {quotient}");
    assert!((ambient - 1.618033988749895).abs() < 1e-12, "ambient {ambient}");
    assert!(ratio > 1.0 + 1e-3 && ratio <= 2.0 + 1e-9);
    let oracle = results["grid_oracle_value"].as_f64().unwrap();
    assert!((oracle - quotient).abs() < 1e-4);
}

#[test]
fn norm_of_zero_tangent_reports_unit_ratio() {
    let out = run(&[
        "--json",
        "norm",
        &fixture("projection_2x2.json"),
        &fixture("zero_2x2.json"),
        &fixture("zero_2x2.json"),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["results"]["quotient_norm"].as_f64().unwrap() < 1e-12);
    assert_eq!(doc["results"]["ratio_ambient_over_quotient"].as_f64().unwrap(), 1.0);
}

#[test]
fn norm_is_deterministic_per_seed() {
    let args = [
        "--json",
        "norm",
        &fixture("projection_2x2.json"),
        &fixture("gap_x.json"),
        &fixture("gap_y.json"),
        "--seed",
        "42",
    ];
    let a = stdout(&run(&args.iter().map(|s| &**s).collect::<Vec<_>>()));
    let b = stdout(&run(&args.iter().map(|s| &**s).collect::<Vec<_>>()));
    assert_eq!(a, b, "same command and seed must reproduce the report bit-identically");
}

#[test]
fn geodesic_unit_codiagonal_length() {
    let out = run(&[
        "--json",
        "geodesic",
        &fixture("projection_2x2.json"),
        &fixture("pauli_x.json"),
        &fixture("zero_2x2.json"),
        "--t0",
        "0",
        "--t1",
        "1",
        "--nodes",
        "33",
        "--competitors",
        "8",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = &doc["results"];
    let horizon = results["horizon"].as_f64().unwrap();
    assert!((horizon - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let finsler = results["length_finsler"].as_f64().unwrap();
    assert!((finsler - 1.0).abs() < 1e-4, "finsler {finsler}");
    let min = results["competitor_min"].as_f64().unwrap();
    assert!(finsler <= min + 1e-4);
    assert_eq!(results["verdict"], "PASS");
}

#[test]
fn geodesic_zero_pair_has_zero_length() {
    let out = run(&[
        "--json",
        "geodesic",
        &fixture("projection_2x2.json"),
        &fixture("zero_2x2.json"),
        &fixture("zero_2x2.json"),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["results"]["length_finsler"].as_f64().unwrap() < 1e-12);
    assert!(doc["results"]["length_ambient"].as_f64().unwrap() < 1e-12);
}

#[test]
fn geodesic_horizon_enforced_unless_forced() {
    let base: Vec<String> = vec![
        "geodesic".into(),
        fixture("projection_2x2.json"),
        fixture("pauli_x.json"),
        fixture("zero_2x2.json"),
        "--t0".into(),
        "0".into(),
        "--t1".into(),
        "2.0".into(),
        "--nodes".into(),
        "17".into(),
    ];
    let refs: Vec<&str> = base.iter().map(|s| s.as_str()).collect();
    let out = run(&refs);
    assert_eq!(out.status.code(), Some(2));

    let mut forced = refs.clone();
    forced.push("--force");
    let out = run(&forced);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn projection_swap_reaches_right_angle() {
    let dir = tempfile::tempdir().unwrap();
    let zpath = dir.path().join("generator.json");
    let out = run(&[
        "--json",
        "projection",
        &fixture("projection_2x2.json"),
        &fixture("projection_2x2_swap.json"),
        "--emit-generator",
        zpath.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = &doc["results"];
    assert_eq!(results["exists"], true);
    let z_norm = results["generator_norm"].as_f64().unwrap();
    assert!((z_norm - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert!(results["endpoint_residual"].as_f64().unwrap() < 1e-7);
    // The emitted generator document parses and is Hermitian with norm pi/2.
    let text = std::fs::read_to_string(&zpath).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["rows"], 2);
}

#[test]
fn projection_counterexample_exits_2_with_dims() {
    let out = run(&[
        "--json",
        "projection",
        &fixture("proj3_rank2.json"),
        &fixture("proj3_rank1.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["dim_r0_n1"], 1);
    assert_eq!(doc["results"]["dim_r1_n0"], 0);
    assert_eq!(doc["results"]["exists"], false);
}

#[test]
fn suite_small_run_passes_and_reproduces() {
    let args =
        ["--json", "suite", "--seed", "9", "--dims", "2..3", "--samples", "4"];
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(a["results"]["verdict"], "PASS");
    let out2 = run(&args);
    assert_eq!(stdout(&out), stdout(&out2));
}

#[test]
fn suite_zero_samples_vacuous() {
    let out = run(&["suite", "--samples", "0", "--dims", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
