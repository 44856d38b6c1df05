use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phigamma::io::{self, ElementJson};
use phigamma::maps::omega;
use phigamma::CrysRep;
use serde_json::Value;
use tempfile::TempDir;

const QP: &str = r#"{"label": "Q_p", "p": 3, "d": 1, "frobenius": [["1"]], "weights": [0, 0]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phigamma")).args(args).output().expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_psi_phi_with_seed() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let r = run(&["check", "psi-phi", "--seed", "7", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let reports = v["suites"][0]["reports"].as_array().unwrap();
    assert!(reports.iter().all(|r| r["params"]["cases"] == 100 && r["pass"] == true));
}

#[test]
fn check_exo_passes_at_both_primes() {
    let r = run(&["check", "exo"]);
    assert_eq!(r.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    let reports = v["suites"][0]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 8);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let r = run(&["check", "nosuch"]);
    assert_eq!(r.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&r.stderr).contains("nosuch"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn singular_frobenius_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let rep = file(&dir, "bad.json", r#"{"label": "bad", "p": 3, "d": 2, "frobenius": [["1", "2"], ["2", "4"]], "weights": [0, 0]}"#);
    let y = file(&dir, "y.json", r#"{"p": 3, "N": 8, "M": 10, "components": [["1"], ["0"]]}"#);
    let r = run(&["eval", "omega", "--rep", s(&rep), "--input", s(&y)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("frobenius not invertible"));
}

#[test]
fn malformed_input_reports_position() {
    let dir = TempDir::new().unwrap();
    let rep = file(&dir, "q.json", QP);
    let y = file(&dir, "y.json", "{\"p\": 3,\n \"N\": oops}");
    let r = run(&["eval", "exp-eval", "--rep", s(&rep), "--input", s(&y)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 2"));
    let y = file(&dir, "z.json", r#"{"p": 3, "N": 8, "M": 10, "components": [["1", "q"]]}"#);
    let r = run(&["eval", "exp-eval", "--rep", s(&rep), "--input", s(&y)]);
    assert!(String::from_utf8_lossy(&r.stderr).contains("components[0][1]"));
}

#[test]
fn exp_eval_of_the_constant() {
    let dir = TempDir::new().unwrap();
    let rep = file(&dir, "q.json", QP);
    let y = file(&dir, "y.json", r#"{"p": 3, "N": 8, "M": 24, "components": [["1"]]}"#);
    let v = json_out(&run(&["eval", "exp-eval", "--rep", s(&rep), "--input", s(&y), "--n", "1"]));
    let c = v["result"]["value"][0]["coeffs"].as_array().unwrap();
    assert_eq!(c[0], "3^-1 * (1) + O(3^23)");
}

#[test]
fn omega_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let rep = file(&dir, "q.json", QP);
    let text = r#"{"p": 3, "N": 16, "M": 24, "components": [["0", "1", "-2"]]}"#;
    let y = file(&dir, "y.json", text);
    let v = json_out(&run(&["eval", "omega", "--rep", s(&rep), "--input", s(&y), "--N", "16"]));

    let raw: ElementJson = serde_json::from_str(text).unwrap();
    let x = io::element_from_json(&raw).unwrap();
    let lib = omega(&CrysRep::from_json(QP, 40).unwrap(), 1, &x, 16, 40).unwrap();
    assert_eq!(v["result"]["value"], io::element_to_json(&lib.value, 24));
}

#[test]
fn measure_and_convolve() {
    let dir = TempDir::new().unwrap();
    let f = file(&dir, "f.json", r#"{"p": 3, "N": 64, "M": 20, "coeffs": ["0", "1"]}"#);
    let bad = run(&["eval", "measure", "--input", s(&f), "--level", "2"]);
    assert_eq!(bad.status.code(), Some(2), "pi = (1 + pi) - 1 has mass at 0");

    let a = file(&dir, "a.json", r#"{"p": 3, "level": 2, "entries": {"1": "1", "2": "3"}}"#);
    let b = file(&dir, "b.json", r#"{"p": 3, "level": 2, "entries": {"4": "1"}}"#);
    let v = json_out(&run(&["eval", "convolve", "--input", s(&a), "--input2", s(&b)]));
    let e = &v["result"]["value"]["entries"];
    assert_eq!(e["4"], "(1) + O(3^24)");
    assert_eq!(e["8"], "3 * (1) + O(3^24)");
}

#[test]
fn twist_and_pairing() {
    let dir = TempDir::new().unwrap();
    let rep = file(&dir, "q.json", QP);
    let pi2 = file(&dir, "x.json", r#"{"p": 3, "N": 8, "M": 20, "components": [["0", "0", "1"]]}"#);
    let v = json_out(&run(&["eval", "twist", "--input", s(&pi2), "--j", "-1"]));
    assert_eq!(v["result"]["value"]["twist"], -1);

    // (1 + pi) and (1 + pi)^2 pair to the Dirac mass at 2
    let x1 = file(&dir, "x1.json", r#"{"p": 3, "N": 8, "M": 20, "components": [["1", "1"]]}"#);
    let x2 = file(&dir, "x2.json", r#"{"p": 3, "N": 8, "M": 20, "components": [["1", "2", "1"]]}"#);
    let v = json_out(&run(&["eval", "pairing", "--rep", s(&rep), "--input", s(&x1), "--input2", s(&x2), "--level", "2"]));
    let e = v["result"]["value"]["entries"].as_object().unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.contains_key("2"));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let r = run(&["check", "mellin", "adjoint", "--p", "3", "--seed", "11", "--out", s(out)]);
        assert_eq!(r.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn sign_audit_lists_each_case() {
    let r = run(&["check", "recip", "--p", "3", "--sign-audit"]);
    assert_eq!(r.status.code(), Some(0), "the audit does not change the verdict");
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    let audit = v["sign_audit"].as_array().unwrap();
    assert_eq!(audit.len(), 20);
}
