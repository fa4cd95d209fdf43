use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use hecke_lab::finite::standard;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-lab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cosets_of_index_two() {
    let out = run(&["cosets", "--sigma", "1 0 0 2", "--side", "left"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["count"], 3);
    assert_eq!(v["index"], "2");
    assert_eq!(v["reps"].as_array().unwrap().len(), 3);
    let right = json_of(&run(&["cosets", "--sigma", "1 0 0 2", "--side", "right"]));
    assert_eq!(right["count"], 3);
}

#[test]
fn product_of_index_two_with_itself() {
    let v = json_of(&run(&["product", "--n1", "2", "--n2", "2"]));
    let terms: Vec<(String, u64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["index"].as_str().unwrap().to_string(), t["mult"].as_u64().unwrap()))
        .collect();
    assert_eq!(terms, vec![("1".to_string(), 3), ("4".to_string(), 1)]);
    let same = json_of(&run(&["product", "--s1", "1 0 0 2", "--n2", "2"]));
    assert_eq!(same["terms"], v["terms"]);
}

#[test]
fn qexp_delta_eigenvalues() {
    let out = run(&["qexp", "--form", "delta", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["eigenvalue"], "-24");
    assert_eq!(v["checked_up_to"], 25);
    assert_eq!(json_of(&run(&["qexp", "--p", "3", "--N", "60"]))["eigenvalue"], "252");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["cosets", "--sigma", "1 0 0 2", "--bogus"][..],
        &["frobnicate"],
        &["cosets", "--sigma", "1 2 3"],
        &["cosets", "--sigma", "1 2 2 4"],
        &["qexp", "--p", "4"],
        &["product", "--n1", "2"],
        &["verify-finite", "--builtin", "nope"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn verify_finite_from_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let text = serde_json::to_string(&standard::s3_a3().to_json()).unwrap();
    let path = write(dir.path(), "s3.json", &text);
    let out = run(&["verify-finite", "--model", &path, "--cases", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json_of(&out)["failures"], 0);
    let bad = write(dir.path(), "bad.json", r#"{"order": 2, "mul": [[0, 1], [1, 1]], "gamma": [0], "reps": [0, 1]}"#);
    assert_eq!(run(&["verify-finite", "--model", &bad]).status.code(), Some(2));
}

#[test]
fn phi_and_psi_report_tolerance_and_tiles() {
    let v = json_of(&run(&["phi", "--g", "1 0 0 2"]));
    let expected = 2.0 * (0.25f64).asin() / (std::f64::consts::PI / 3.0);
    assert!((v["value"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert!(v["tolerance"].as_f64().unwrap() > 0.0);
    assert!(v["tiles"].as_u64().unwrap() >= 1);
    let identity = json_of(&run(&["phi", "--g", "1 0 0 1"]));
    assert!((identity["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    // SF meets F only along the unit circle.
    let s = json_of(&run(&["phi", "--g", "0 -1 1 0"]));
    assert!(s["value"].as_f64().unwrap().abs() < 1e-9);
    let psi = json_of(&run(&["psi", "--s1", "1 0 0 1", "--s2", "1 0 0 1"]));
    assert!((psi["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn gram_verdict_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "g.json", r#"["1 0 0 1", "1 0 0 2", "1 1 0 2", "2 0 0 1"]"#);
    let out = run(&["gram", "--file", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["psd"], true);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 4);
    let csv = run(&["gram", "--file", &path, "--kind", "psi", "--csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn moments_and_criterion() {
    let v = json_of(&run(&["moments", "--p", "2", "--nmax", "4"]));
    let re: Vec<&str> = v["moments"].as_array().unwrap().iter().map(|r| r["moment"]["re"].as_str().unwrap()).collect();
    assert_eq!(re, ["1", "0", "3", "0", "15"]);
    let out = run(&["criterion", "--p", "2", "--nmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["extends"], true);

    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", r#"[{"matrix": "1 0 0 2", "coeff": {"re": "1"}}, {"matrix": "2 0 0 1", "coeff": {"re": "1"}}]"#);
    let failing = run(&["criterion", "--p", "2", "--nmax", "4", "--x", &x]);
    assert_eq!(failing.status.code(), Some(1));
    assert_eq!(json_of(&failing)["extends"], false);
    let one_sided = write(dir.path(), "one.json", r#"[{"matrix": "1 0 0 2", "coeff": {"re": "1"}}]"#);
    assert_eq!(run(&["criterion", "--p", "2", "--x", &one_sided]).status.code(), Some(2));
    let scaled = json_of(&run(&["moments", "--p", "2", "--nmax", "2", "--scale", "1/2"]));
    assert_eq!(scaled["moments"][2]["moment"]["re"], "3/4");
}

#[test]
fn hecke_matrix_window() {
    let v = json_of(&run(&["hecke-matrix", "--sigma", "1 0 0 2", "--depth", "1"]));
    let labels = v["labels"].as_array().unwrap().len();
    assert_eq!(labels, 4);
    let col0: u64 = v["entries"].as_array().unwrap().iter().map(|r| r[0].as_u64().unwrap()).sum();
    assert_eq!(col0 + v["overflow"][0].as_u64().unwrap(), 3);
    let csv = String::from_utf8(run(&["hecke-matrix", "--sigma", "1 0 0 2", "--csv"]).stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("0,1,1,1"));
}

#[test]
fn unimodular_random_batch() {
    let out = run(&["unimodular", "--random", "5", "--bound", "6", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_deterministic_and_redirectable() {
    let args = ["unimodular", "--random", "4", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let seq = Command::new(env!("CARGO_BIN_EXE_hecke-lab"))
        .args(["--sequential", "psi", "--s1", "1 0 0 3", "--s2", "1 1 0 3"])
        .env("HECKE_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(seq.stdout, run(&["psi", "--s1", "1 0 0 3", "--s2", "1 1 0 3"]).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["--out", path.to_str().unwrap(), "cosets", "--sigma", "1 0 0 3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["count"], 4);

    let bad_threads = Command::new(env!("CARGO_BIN_EXE_hecke-lab"))
        .args(["cosets", "--sigma", "1 0 0 2"])
        .env("HECKE_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn verify_all_aggregates_eight_criteria() {
    let out = run(&["verify-all", "--seed", "0"]);
    let v = json_of(&out);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 8);
    let failed = criteria.iter().filter(|c| c["passed"] == false).count();
    assert_eq!(v["failed"], failed);
    assert_eq!(out.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
