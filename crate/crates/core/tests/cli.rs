use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ropebound"))
        .args(args)
        .env_remove("ROPEBOUND_THREADS")
        .output()
        .expect("spawn ropebound")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_json_and_csv() {
    let v: Value = serde_json::from_str(&ok(&["bounds", "--p", "1", "--q", "3,4"])).unwrap();
    let rows = v["result"]["bounds"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let want = 3.0 * (4.0 * std::f64::consts::PI + 4.0);
    assert!((rows[0]["best_bound"].as_f64().unwrap() - want).abs() < 1e-6);
    assert_eq!(v["header"]["command"], "bounds");

    let csv = ok(&["bounds", "--p", "2", "--q", "5", "--format", "csv"]);
    assert!(csv.lines().any(|l| l.starts_with("2,5,")), "{csv}");
    assert!(run(&["bounds", "--p", "1", "--q", "1"]).status.code() != Some(0));
}

#[test]
fn build_check_export_import() {
    let dir = tempfile::tempdir().unwrap();
    let vect = dir.path().join("t.vect");
    let report = dir.path().join("t.json");
    ok(&[
        "build",
        "inc4",
        "--t",
        "1",
        "--double",
        "--points",
        "200",
        "--out",
        s(&vect),
        "--report",
        s(&report),
    ]);
    let r = json(&report);
    assert_eq!(r["result"]["construction"]["crossing_number"], 90);

    let checked = dir.path().join("check.json");
    ok(&["check", s(&vect), "--out", s(&checked)]);
    let c = json(&checked);
    assert_eq!(c["result"]["complete_linking"], true);
    assert_eq!(c["result"]["components"], 10);

    let csv = dir.path().join("t.csv");
    ok(&["export", s(&vect), "--out", s(&csv)]);
    let back = dir.path().join("back.json");
    ok(&["import", s(&csv), "--out", s(&back)]);
    let b = json(&back);
    assert_eq!(b["components"].as_array().unwrap().len(), 10);
}

#[test]
fn check_rejects_unlinked_components() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("two.vect");
    // two far-apart squares
    std::fs::write(
        &f,
        "VECT\n2 8 0\n-4 -4\n0 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n10 0 0\n11 0 0\n11 1 0\n10 1 0\n",
    )
    .unwrap();
    assert_eq!(run(&["check", s(&f)]).status.code(), Some(1));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.vect");
    std::fs::write(&f, "VECT\n1 4 0\n-3\n0\n0 0 0\n1 0 0\n").unwrap();
    let out = run(&["check", s(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn correction_values_and_table() {
    let one: Value =
        serde_json::from_str(&ok(&["correction", "--ratio", "2", "--p", "1"])).unwrap();
    let text = one.to_string();
    assert!(text.contains("1.01122926"), "{text}");
    let table = ok(&["correction", "--table"]);
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 17);
}

#[test]
fn sweep_and_optimize_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("s.csv");
    ok(&[
        "sweep",
        "optimal",
        "--tmin",
        "2",
        "--tmax",
        "6",
        "--out",
        s(&sweep),
    ]);
    let text = std::fs::read_to_string(&sweep).unwrap();
    assert!(text.starts_with("# "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);

    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"restarts": 1, "max_evaluations": 60, "points_per_component": 100}"#,
    )
    .unwrap();
    let report = dir.path().join("o.json");
    ok(&[
        "--config",
        s(&cfg),
        "optimize",
        "circles",
        "--q",
        "2",
        "--report",
        s(&report),
    ]);
    let r = json(&report);
    assert_eq!(r["header"]["config"]["restarts"], 1);
    assert!(
        r["result"]["metrics"]["normalized_ropelength"]
            .as_f64()
            .unwrap()
            > 25.0
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.vect");
    let report = dir.path().join("r.json");
    let args = [
        "build",
        "optimal",
        "--t",
        "2",
        "--points",
        "200",
        "--out",
        s(&out),
        "--report",
        s(&report),
    ];
    ok(&args);
    let (g1, r1) = (
        std::fs::read(&out).unwrap(),
        std::fs::read(&report).unwrap(),
    );
    ok(&args);
    assert_eq!(std::fs::read(&out).unwrap(), g1);
    assert_eq!(std::fs::read(&report).unwrap(), r1);
    assert_eq!(
        ok(&["bounds", "--p", "3", "--q", "2,7"]),
        ok(&["bounds", "--p", "3", "--q", "2,7"])
    );
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_ropebound"))
        .args(["bounds", "--p", "1", "--q", "3"])
        .env("ROPEBOUND_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_ropebound"))
        .args(["bounds", "--p", "1", "--q", "3"])
        .env("ROPEBOUND_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
