use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_opgeo");

const I3: &str =
    r#"{"shape": [3], "blocks": [[[1,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]], "label": "I3"}"#;
const HALF: &str = r#"{"shape": [2], "blocks": [[[1,0],[0,0],[0,0],[0.5,0]]]}"#;
const DIAG21: &str = r#"{"shape": [2], "blocks": [[[2,0],[0,0],[0,0],[1,0]]]}"#;
const SINGULAR: &str = r#"{"shape": [2], "blocks": [[[1,0],[2,0],[2,0],[4,0]]]}"#;

fn opgeo(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("OPGEO_SEED").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn verdict<'a>(report: &'a Value, predicate: &str) -> &'a Value {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["predicate"] == predicate)
        .unwrap()
}

#[test]
fn identity_is_everything() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "i3.json", I3);
    let o = opgeo(&["classify", p.to_str().unwrap(), "--unit", "identity"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    for pred in [
        "partial-isometry",
        "unitary",
        "extreme-point",
        "invertible",
        "self-adjoint",
        "positive",
        "projection",
    ] {
        let v = verdict(&r, pred);
        assert_eq!(v["holds"], true, "{pred}");
        assert_eq!(v["agreement"], true, "{pred}");
    }
    assert_eq!(r["label"], "I3");
    assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(r["tolerances"]["equality"].as_f64(), Some(1e-8));
}

#[test]
fn unit_predicates_need_a_unit() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "i3.json", I3);
    let r = json(&opgeo(&["classify", p.to_str().unwrap()]));
    assert_eq!(verdict(&r, "positive")["status"], "not-applicable");
    assert_eq!(verdict(&r, "unitary")["holds"], true);
}

#[test]
fn half_diagonal_has_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "half.json", HALF);
    let o = opgeo(&["classify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let v = verdict(&r, "partial-isometry");
    assert_eq!(v["holds"], false);
    let w = &v["evidence"];
    assert_eq!(w["kind"], "witness");
    assert!((w["b"].as_f64().unwrap() - 8.0).abs() < 1e-12);
    assert!((w["margin"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let y: Vec<f64> = w["y"]["blocks"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z[0].as_f64().unwrap())
        .collect();
    assert!((y[3] - 0.125).abs() < 1e-15 && y[0].abs() < 1e-15);
}

#[test]
fn off_norm_predicates_are_not_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "d.json", DIAG21);
    let o = opgeo(&["classify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(verdict(&r, "partial-isometry")["status"], "not-applicable");
    assert_eq!(verdict(&r, "invertible")["holds"], true);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"shape\": [2], ");
    assert_eq!(opgeo(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    let short = write(dir.path(), "short.json", r#"{"shape": [2], "blocks": [[[1,0]]]}"#);
    assert_eq!(opgeo(&["classify", short.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(opgeo(&["classify", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn non_unitary_unit_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "i3.json", I3);
    let u = write(
        dir.path(),
        "u.json",
        r#"{"shape": [3], "blocks": [[[2,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]]}"#,
    );
    let o = opgeo(&["classify", p.to_str().unwrap(), "--unit", u.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn certify_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "d.json", DIAG21);
    let o = opgeo(&["certify", p.to_str().unwrap(), "--predicate", "invertible"]);
    assert_eq!(o.status.code(), Some(0));
    let c = json(&o);
    assert_eq!(c["kind"], "invertibility");
    assert_eq!(c["epsilon"].as_f64(), Some(1.0));
    let u: Vec<f64> = c["u"]["blocks"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| z[0].as_f64().unwrap())
        .collect();
    assert_eq!(u, vec![1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn singular_has_no_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", SINGULAR);
    let o = opgeo(&["certify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no certificate"));
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (name, doc, predicate) in [("d.json", DIAG21, "invertible"), ("h.json", HALF, "partial-isometry")] {
        let p = write(dir.path(), name, doc);
        let o = opgeo(&["certify", p.to_str().unwrap(), "--predicate", predicate]);
        assert_eq!(o.status.code(), Some(0), "{predicate}");
        let cert = dir.path().join(format!("{name}.cert"));
        std::fs::write(&cert, &o.stdout).unwrap();
        let o = opgeo(&["certify", p.to_str().unwrap(), "--verify", cert.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{predicate}");
        assert_eq!(json(&o)["accepted"], true);
    }
    // a certificate for diag(2, 1) does not certify diag(1, 1/2) with ε = 1
    let cert = dir.path().join("d.json.cert");
    let h = dir.path().join("h.json");
    let o = opgeo(&["certify", h.to_str().unwrap(), "--verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["accepted"], false);
}

#[test]
fn harness_single_trial() {
    let o = opgeo(&[
        "harness", "--trials", "1", "--suites", "T2", "--seed", "7", "--shapes", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["report"]["passed"], true);
    assert_eq!(r["report"]["suites"][0]["max_deviation"].as_f64(), Some(0.0));
}

#[test]
fn unknown_suite_exits_2() {
    let o = opgeo(&["harness", "--trials", "1", "--suites", "T9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T9"));
}

#[test]
fn harness_is_byte_reproducible() {
    let args = ["harness", "--trials", "8", "--suites", "T1B,T4,P6", "--shapes", "2,2+3"];
    let a = opgeo(&args);
    let b = opgeo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = opgeo(&["harness", "--trials", "8", "--suites", "T1B", "--format", "text"]);
    assert!(String::from_utf8_lossy(&t.stdout).contains("all suites passed"));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(BIN);
        c.args(["harness", "--trials", "2", "--suites", "T2"]);
        match env {
            Some(s) => c.env("OPGEO_SEED", s),
            None => c.env_remove("OPGEO_SEED"),
        };
        json(&c.output().unwrap())["report"]["seed"].as_u64()
    };
    assert_eq!(run(Some("99")), Some(99));
    assert_eq!(run(None), Some(1));
}

#[test]
fn tolerance_overrides_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "i3.json", I3);
    let r = json(&opgeo(&["classify", p.to_str().unwrap(), "--tol", "equality=1e-9"]));
    assert_eq!(r["tolerances"]["equality"].as_f64(), Some(1e-9));
    assert_eq!(
        opgeo(&["classify", p.to_str().unwrap(), "--tol", "loose=1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn adjoint_from_stdin() {
    let doc = r#"{"shape": [2], "blocks": [[[1,2],[3,0],[0,-1],[0,0]]], "unit": "identity"}"#;
    let mut child = Command::new(BIN)
        .args(["adjoint", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(doc.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let want = [[1.0, -2.0], [0.0, 1.0], [3.0, 0.0], [0.0, 0.0]];
    for (z, w) in r["blocks"][0].as_array().unwrap().iter().zip(want) {
        assert!((z[0].as_f64().unwrap() - w[0]).abs() < 1e-8 && (z[1].as_f64().unwrap() - w[1]).abs() < 1e-8);
    }
}
