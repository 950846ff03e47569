use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauss-spectrum")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interval_run_writes_reproducible_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path());
    let first = cli(&["run", "interval", "1", "--out", out]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stdout));
    let report = dir.path().join("interval/report.json");
    let a = std::fs::read(&report).unwrap();
    assert!(dir.path().join("interval/timing.json").exists());
    assert!(dir.path().join("interval/interval_mu1_vs_h.svg").exists());
    assert!(cli(&["run", "interval", "1", "--out", out]).status.success());
    assert_eq!(a, std::fs::read(&report).unwrap());
    let json: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(json["scenario_id"], "interval");
    assert_eq!(json["passed"], true);
}

#[test]
fn failing_check_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    // one coarse level cannot meet the 1e-3 identity tolerance
    let o = cli(&["run", "interval", "1", "--h", "0.5", "--param", "levels=1", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn usage_errors() {
    let o = cli(&["run", "no-such-scenario"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown scenario"));
    assert_eq!(cli(&["run", "interval", "--param", "novalue"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "interval", "1", "2"]).status.code(), Some(2));
}

#[test]
fn csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["run", "real-line", "--format", "csv", "--out", path(dir.path())]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("real-line/report.csv")).unwrap();
    assert!(csv.lines().count() > 1);
}

#[test]
fn list_names_every_scenario() {
    let o = cli(&["list"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["interval", "strip", "dumbbell", "extension", "operator-convergence"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn mesh_assemble_solve_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("mesh.json");
    let o = cli(&["mesh", "--json", r#"{"kind":"interval","a":-1,"b":1}"#, "--h", "0.01", "--out", path(&mesh)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cli(&["assemble", "--mesh", path(&mesh), "--out", path(dir.path())]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(dir.path().join("mass.txt")).unwrap().lines().count() > 200);
    let o = cli(&["solve", "--mesh", path(&mesh), "--method", "dense"]);
    assert!(o.status.success());
    let first: f64 = String::from_utf8_lossy(&o.stdout).split_whitespace().next().unwrap().parse().unwrap();
    // the Neumann eigenfunction on (-1, 1) is x^3 - 3x, with eigenvalue 3
    assert!((first - 3.0).abs() < 1e-3, "{first}");
}

#[test]
fn catalog_runs_with_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["catalog", "--jobs", "2", "--out", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("dumbbell/report.json").exists());
}
