use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernelmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(cmd: &str, file: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn all_passed(v: &Value) -> bool {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["mandatory"] == true)
        .all(|c| c["passed"] == true)
}

fn dims(pairs: &Value) -> Vec<(u64, u64)> {
    pairs
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["pair"]["p"]["dim"].as_u64().unwrap(), e["pair"]["q"]["dim"].as_u64().unwrap()))
        .collect()
}

#[test]
fn kernel_set_of_fixtures() {
    for file in ["t1_n4.json", "t2_n4.json"] {
        let (code, v) = report("kernel-set", file, &[]);
        assert_eq!(code, 0);
        assert_eq!(v["command"], "kernel-set");
        assert_eq!(dims(&v["results"]["kernel_set"]), vec![(1, 4), (2, 3), (4, 0)]);
        assert!(all_passed(&v));
        assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
    }
    let (code, v) = report("kernel-set", "zero_n4.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(dims(&v["results"]["kernel_set"]), vec![(4, 4)]);
}

#[test]
fn input_errors_exit_with_two() {
    let (code, v) = report("kernel-set", "mismatch.json", &[]);
    assert_eq!(code, 2);
    assert_eq!(v, Value::Null);
    let out = run(&["kernel-set", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let (code, _) = report("decompose", "three_lines.json", &[]);
    assert_eq!(code, 2, "a non-nest lattice cannot be decomposed over");
    let (code, _) = report("kernel-set", "t1_n4.json", &["--field", "Qi"]);
    assert_eq!(code, 2, "conflicting field");
}

#[test]
fn decompose_t2() {
    let (code, v) = report("decompose", "t2_n4.json", &[]);
    assert_eq!(code, 0);
    assert!(v["results"]["term_count"].as_u64().unwrap() <= 6);
    let recon = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "reconstruction").unwrap();
    assert_eq!(recon["passed"], true);
}

#[test]
fn bil_on_general_lattice() {
    let (code, v) = report("bil", "three_lines.json", &[]);
    assert_eq!(code, 0);
    assert!(v["results"]["count"].as_u64().unwrap() >= 3);
    assert!(all_passed(&v));
}

#[test]
fn lie_closure_of_e65() {
    let (code, v) = report("lie-closure", "e65_n6.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dim"], 11);
    assert_eq!(v["results"]["contains_matrix"], false);
}

#[test]
fn decomposable_verdicts() {
    let (code, v) = report("decomposable", "identity_scalars_n4.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["status"], "NOT_DECOMPOSABLE");
    assert_eq!(v["results"]["samples"], 64);
    assert!(v["results"]["certificate"].as_str().unwrap().starts_with("no nonzero rank-1 element detected (sampled)"));

    let (code, v) = report("decomposable", "e65_member_n6.json", &["--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["status"], "DECOMPOSABLE");
    assert!(all_passed(&v));

    let (code, _) = report("decomposable", "e65_n6.json", &[]);
    assert_eq!(code, 2, "E66 is not in the module");
}

#[test]
fn gaussian_field() {
    let (code, v) = report("kernel-set", "gaussian_n2.json", &[]);
    assert_eq!(code, 0);
    assert!(all_passed(&v));
    let (code, _) = report("kernel-set", "gaussian_n2.json", &["--field", "Q"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic() {
    let path = fixture("t1_n4.json");
    let p = path.to_str().unwrap();
    for args in [
        vec!["decompose", p],
        vec!["check-invariants", "--cases", "3", "--seed", "9", "--property", "omega_witness"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&["decompose", p]);
    let b = run(&["decompose", p, "--seed", "1"]);
    let da: Value = serde_json::from_slice(&a.stdout).unwrap();
    let db: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_ne!(da["inputs_digest"], db["inputs_digest"]);
}

#[test]
fn check_invariants_summary() {
    let out = run(&["check-invariants", "--cases", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["properties"].as_array().unwrap().len(), 16);
    assert!(all_passed(&v));
    let out = run(&["check-invariants", "--property", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn writes_report_to_file() {
    let dir = std::env::temp_dir().join(format!("kernelmap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("report.json");
    let path = fixture("t1_n4.json");
    let out = run(&["kernel-set", path.to_str().unwrap(), "--out", out_path.to_str().unwrap(), "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("\n  \"command\": \"kernel-set\""));
    std::fs::remove_dir_all(&dir).unwrap();
}
