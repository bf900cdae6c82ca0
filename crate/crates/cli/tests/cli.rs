use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_n6alg")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_a3t_ph_passes() {
    let out = run(&["check", "--family", "a3t-ph", "--m", "2", "--n", "2", "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["fi"], "pass");
    assert_eq!(v["report"]["fi_discrepancies"], 0);
    assert_eq!(v["seed"], 0);
}

#[test]
fn check_w3beta_passes_and_rejects_real_beta() {
    let out = run(&["check", "--family", "w3beta", "--beta", "3/5+4/5i", "--phi", "id", "--sign", "+", "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["fi"], "pass");
    let out = run(&["check", "--family", "w3beta", "--beta", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|β| = 1"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["check", "--family", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["check"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--family", "a3t-ph", "--m", "2", "--n", "2", "--p", "5"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn towers() {
    let out = run(&["tower", "--family", "a3n-plus", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["graded_dims"], serde_json::json!([4, 6, 4]));
    assert_eq!(v["roundtrip"]["pass"], true);

    let out = run(&["tower", "--family", "a3t", "--m", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["center_basis"].as_array().unwrap().len(), 2);

    let out = run(&["tower", "--family", "c3-ph", "--two-n", "2", "--p", "1", "--sign", "+"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["graded_dims"], serde_json::json!([2, 4, 2]));
    assert_eq!(v["roundtrip"]["pass"], true);
}

#[test]
fn tel_matches_named_families() {
    let out = run(&["tel", "--algebra", "psl", "--m", "1", "--n", "2", "--conj", "psl", "--p", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["matches"]["same_bracket"], true);
    let out = run(&["tel", "--algebra", "osp", "--n", "1", "--conj", "osp-hermitian", "--p", "1", "--sign", "-"]);
    assert_eq!(json(&out)["matches"]["same_bracket"], true);
}

#[test]
fn factor_and_witness() {
    let out = run(&["factor", "--kind", "congruence", "--matrix", "4,0;0,-9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["factor"]["p"], 1);
    assert_eq!(v["factor"]["residual"], 0.0);

    let out = run(&["factor", "--kind", "symplectic-hermitian", "--matrix", "2,0;0,1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["witness", "--kind", "a3n", "--a", "2,0;0,1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["witness"]["residual"], 0.0);

    let out = run(&["witness", "--kind", "c3", "--h", "i,0;0,-i", "--alpha", "2i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["witness"]["pass"], true);
}

#[test]
fn reports_are_byte_stable_and_written_to_out() {
    let args = ["--mode", "sampled", "--seed", "11", "check", "--family", "c3-ph", "--two-n", "4", "--p", "1", "--samples", "50"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["report"]["seed"], 11);

    let dir = std::env::temp_dir().join(format!("n6alg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let mut with_out = vec!["--out", path.to_str().unwrap()];
    with_out.extend_from_slice(&args);
    let c = run(&with_out);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corpus_with_psi_fault_names_c3_instances() {
    let out = run(&["corpus", "--fault", "psi-sign", "--finite-only", "--no-towers"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let failing: Vec<&str> = v["summary"]["failing"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(failing.len(), 24);
    assert!(failing.iter().all(|f| f.starts_with("C3")));
    assert_eq!(v["summary"]["instances"], 105);
    assert_eq!(v["summary"]["rows"].as_array().unwrap().len(), 105);
}
