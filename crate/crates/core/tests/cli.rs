use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hamgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamgroup")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ID_HAM: &str = r#"{"kind":"hamilton","n":1,"epsilon":1,"R":[[1.0]],"f":[0.0],"v":[0.0],"r":0.0}"#;

#[test]
fn compose_identities() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", ID_HAM);
    let out = hamgroup(&["compose", s(&a), s(&a)]);
    assert_eq!(json(&out), serde_json::from_str::<Value>(ID_HAM).unwrap());
}

#[test]
fn compose_hamilton_example() {
    let dir = TempDir::new().unwrap();
    let g2 = write(&dir, "g2.json", r#"{"kind":"hamilton","n":1,"epsilon":1,"R":[[1]],"f":[1],"v":[2],"r":0}"#);
    let g1 = write(&dir, "g1.json", r#"{"kind":"hamilton","n":1,"epsilon":1,"R":[[1]],"f":[3],"v":[4],"r":0}"#);
    let doc = json(&hamgroup(&["compose", s(&g2), s(&g1)]));
    assert_eq!(doc["f"][0], 4.0);
    assert_eq!(doc["v"][0], 6.0);
    assert_eq!(doc["r"], 2.0);
}

#[test]
fn compose_euclidean_boosts() {
    let dir = TempDir::new().unwrap();
    let b1 = write(&dir, "b1.json", r#"{"kind":"euclidean","n":2,"epsilon":1,"R":[[1,0],[0,1]],"v":[1.5,-2]}"#);
    let b2 = write(&dir, "b2.json", r#"{"kind":"euclidean","n":2,"epsilon":1,"R":[[1,0],[0,1]],"v":[0.25,4]}"#);
    let doc = json(&hamgroup(&["compose", s(&b1), s(&b2)]));
    assert_eq!(doc["v"], serde_json::json!([1.75, 2.0]));
}

#[test]
fn invert_heisenberg_negates_parameters() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"kind":"heisenberg","n":1,"f":[1],"v":[2],"r":3}"#);
    let inv = json(&hamgroup(&["invert", s(&g)]));
    assert_eq!(inv, serde_json::json!({"kind":"heisenberg","n":1,"f":[-1.0],"v":[-2.0],"r":-3.0}));
}

#[test]
fn classify_identity_eight() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<Vec<f64>> = (0..8).map(|i| (0..8).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let m = write(&dir, "m.json", &serde_json::json!({"size": 8, "data": rows}).to_string());
    let report = json(&hamgroup(&["classify", s(&m)]));
    assert_eq!(report["verdict"], "hamilton");
    assert_eq!(report["n"], 3);
    assert_eq!(report["params"]["epsilon"], 1);
    assert_eq!(report["params"]["f"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(report["params"]["r"], 0.0);
}

#[test]
fn check_random_document() {
    let dir = TempDir::new().unwrap();
    let out = hamgroup(&["--seed", "7", "random", "hamilton", "--n", "3"]);
    let doc = write(&dir, "g.json", std::str::from_utf8(&out.stdout).unwrap());
    let report = json(&hamgroup(&["check", s(&doc)]));
    assert!(report["residuals"]["time"].as_f64().unwrap() <= 1e-12);
    assert!(report["residuals"]["symplectic"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["passed"], true);
}

#[test]
fn demo_boost_moves_at_three() {
    let out = hamgroup(&["demo", "boost"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut records = 0;
    for line in text.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        let (q, t) = (rec["q"][0].as_f64().unwrap(), rec["t"].as_f64().unwrap());
        assert!((q - 3.0 * t).abs() <= 1e-12);
        records += 1;
    }
    assert_eq!(records, 21);
}

#[test]
fn demo_accelerating_frame_passes() {
    let report = json(&hamgroup(&["demo", "accelerating-frame"]));
    assert_eq!(report["passed"], true);
    assert_eq!(report["jacobian"]["verdict"], "hamilton");
}

#[test]
fn jacobian_recovers_generators() {
    let report = json(&hamgroup(&["jacobian", "--v", "1,-2", "--f", "0.5,0", "--r", "0.3"]));
    assert_eq!(report["classification"]["verdict"], "hamilton");
    assert!(report["generator_error"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn integrate_writes_records() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("traj.jsonl");
    let out = hamgroup(&[
        "--out", s(&path), "integrate", "--hamiltonian", "uniform-force", "--z0", "0,0,0,0", "--f", "2", "--t1", "1",
        "--steps", "10",
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!((last["q"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(last["t"], 1.0);
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["--seed", "3", "random", "hsp", "--n", "2"],
        vec!["integrate", "--hamiltonian", "harmonic", "--z0", "0.1,1,0,0", "--t1", "3", "--steps", "50"],
        vec!["demo", "accelerating-frame"],
    ];
    for args in runs {
        let (a, b) = (hamgroup(&args), hamgroup(&args));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
    assert_ne!(
        hamgroup(&["--seed", "1", "random", "hamilton"]).stdout,
        hamgroup(&["--seed", "2", "random", "hamilton"]).stdout
    );
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "junk.json", "{not json");
    let short = write(&dir, "short.json", r#"{"kind":"heisenberg","n":2,"f":[1],"v":[0,0],"r":0}"#);
    let odd = write(&dir, "odd.json", r#"{"size":3,"data":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["invert", s(&junk)],
        vec!["invert", s(&short)],
        vec!["invert", "/nonexistent/file.json"],
        vec!["classify", s(&odd)],
        vec!["integrate", "--hamiltonian", "kepler", "--z0", "0,0,0,0", "--t1", "1"],
        vec!["integrate", "--hamiltonian", "free", "--z0", "0,0,0", "--t1", "1"],
        vec!["jacobian", "--v", "1,2", "--f", "1"],
        vec!["random", "rotation"],
        vec!["--tol", "-1", "demo", "boost"],
    ];
    for args in cases {
        let out = hamgroup(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    let out = hamgroup(&["demo", "warp"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("boost") && err.contains("accelerating-frame"));
    let out = hamgroup(&["integrate", "--hamiltonian", "kepler", "--z0", "0,0,0,0", "--t1", "1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("free, uniform-force, harmonic, generators"));
}

#[test]
fn domain_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let ham = write(&dir, "ham.json", ID_HAM);
    let heis = write(&dir, "heis.json", r#"{"kind":"heisenberg","n":1,"f":[0],"v":[0],"r":0}"#);
    let ham2 = write(
        &dir,
        "ham2.json",
        r#"{"kind":"hamilton","n":2,"epsilon":1,"R":[[1,0],[0,1]],"f":[0,0],"v":[0,0],"r":0}"#,
    );
    let sign = write(&dir, "sign.json", r#"{"kind":"euclidean","n":1,"epsilon":0,"R":[[1]],"v":[0]}"#);
    let skew = write(&dir, "skew.json", r#"{"kind":"euclidean","n":1,"epsilon":1,"R":[[1.1]],"v":[0]}"#);
    let singular = write(&dir, "singular.json", r#"{"size":4,"data":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["compose", s(&ham), s(&heis)],
        vec!["compose", s(&ham), s(&ham2)],
        vec!["invert", s(&sign)],
        vec!["invert", s(&skew)],
        vec!["classify", s(&singular)],
    ];
    for args in cases {
        let out = hamgroup(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let out = hamgroup(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["compose", "invert", "classify", "check", "jacobian", "integrate", "demo"] {
        assert!(text.contains(cmd));
    }
}
