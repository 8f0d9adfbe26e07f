use std::path::Path;
use std::process::{Command, Output};

use qortho::matrix::{pauli, pauli2, Matrix};
use serde_json::Value;
use tempfile::TempDir;

fn qortho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qortho")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn no_arguments_prints_usage() {
    let out = qortho(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn mub_rejects_composite_dimension_with_hint() {
    let out = qortho(&["mub", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not prime") && err.contains("--dim4-pauli"), "{err}");
    assert_eq!(qortho(&["mub", "--dim", "6"]).status.code(), Some(2));
}

#[test]
fn mub_prime_json() {
    let out = qortho(&["mub", "--dim", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 6);
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(qortho(&["mub", "--dim4-pauli"]).status.code(), Some(0));
}

#[test]
fn useful_reads_matrix_file() {
    let dir = TempDir::new().unwrap();
    let swap = Matrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]).unwrap();
    let path = write(&dir, "swap.json", &swap);
    let out = qortho(&["useful", "--unitary", &path, "--n", "2", "--m", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qortho(&["useful", "--unitary", &write(&dir, "id.json", &Matrix::identity(4)), "--n", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[1, 2").unwrap();
    assert_eq!(qortho(&["useful", "--unitary", bad.to_str().unwrap(), "--n", "2", "--m", "2"]).status.code(), Some(2));
    assert_eq!(qortho(&["useful", "--unitary", "/nonexistent/w.json", "--n", "2", "--m", "2"]).status.code(), Some(2));
}

#[test]
fn check_commutative_and_factor_pairs() {
    let dir = TempDir::new().unwrap();
    let z = write(&dir, "z.json", &vec![pauli(3)]);
    let x = write(&dir, "x.json", &vec![pauli(1)]);
    let out = qortho(&["check", "--alg1", &z, "--alg2", &x, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["complementary"], true);
    let out = qortho(&["check", "--alg1", &z, "--alg2", &z, "--json"]);
    assert_eq!(out.status.code(), Some(1));

    let left = write(&dir, "left.json", &vec![pauli2(1, 0), pauli2(3, 0)]);
    let right = write(&dir, "right.json", &vec![pauli2(0, 1), pauli2(0, 3)]);
    let out = qortho(&["check", "--alg1", &left, "--alg2", &right, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["conditions_agree"], true);
}

#[test]
fn family_search_outcomes() {
    let out = qortho(&["family", "--dim", "4", "--count", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "found");
    let out = qortho(&["family", "--dim", "4", "--count", "5", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["outcome"], "failed");
    assert_eq!(qortho(&["family", "--dim", "5", "--count", "2"]).status.code(), Some(2));
}

#[test]
fn cartan_reports_class() {
    let out = qortho(&["cartan", "--alpha", "0.7853981633974483", "--beta", "0.7853981633974483", "--gamma", "-0.3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["useful"], true);
    assert_eq!(v["class"], "N3");
}

#[test]
fn car_partition_validation() {
    let out = qortho(&["car", "--modes", "3", "--partition", "1;2,3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["part1"], serde_json::json!([1]));
    for bad in ["1;1,2,3", "1,2", "0;1,2", "1;2"] {
        let out = qortho(&["car", "--modes", "3", "--partition", bad]);
        assert_eq!(out.status.code(), Some(2), "partition {bad}");
    }
}

#[test]
fn bell_with_phases() {
    let out = qortho(&["bell", "--phases", "0.1,-2,3,0.5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["defect_right"].as_f64().unwrap() <= 1e-10);
    assert_eq!(qortho(&["bell", "--phases", "1,2"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = qortho(&["uncertainty", "--dim", "3", "--samples", "50", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(written["violations"], 0);
}

#[test]
fn text_output_is_key_value() {
    let out = qortho(&["mub", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("count: 4")), "{text}");
}
