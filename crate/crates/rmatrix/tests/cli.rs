//! End-to-end tests of the command-line interface: exit codes, JSON output,
//! job files, and the build -> dump -> load -> verify round trip.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmatrix"))
}

fn tmpfile(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("rmatrix-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn enumerate_counts() {
    let out = bin()
        .args(["enumerate", "--type", "A2", "--mode", "bd"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("3 triples"), "{text}");

    let out = bin()
        .args(["enumerate", "--type", "A2", "--mode", "generalized", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);

    // h_rho-graded listing includes the swap triple
    let out = bin()
        .args(["enumerate", "--type", "A2", "--mode", "generalized", "--l", "hrho", "--format", "json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let has_swap = v.as_array().unwrap().iter().any(|t| {
        t["gamma1"] == serde_json::json!([1, 2]) && t["tau"]["1"] == serde_json::json!(2)
    });
    assert!(has_swap);
}

#[test]
fn enumerate_rejects_large_rank_and_bad_type() {
    let out = bin()
        .args(["enumerate", "--type", "E7", "--mode", "bd"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["enumerate", "--type", "H3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_verify_roundtrip_constant() {
    let path = tmpfile("const.json");
    let out = bin()
        .args([
            "build", "--type", "A2", "--mode", "constant", "--gamma1", "1", "--gamma2", "2",
            "--tau", "1:2", "--verify", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::json!(true));
    std::fs::remove_file(&path).ok();
}

#[test]
fn build_verify_roundtrip_dynamical_with_numeric() {
    let path = tmpfile("dyn.json");
    let out = bin()
        .args([
            "build", "--type", "A2", "--mode", "dynamical", "--gamma1", "1,2", "--gamma2", "1,2",
            "--tau", "1:2,2:1", "--l", "hrho", "--verify", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin()
        .args(["verify"])
        .arg(&path)
        .args(["--numeric-samples", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::json!(true));
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"cdybe_symbolic"));
    assert!(names.contains(&"cdybe_numeric"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn corrupted_file_fails_verification_with_exit_1() {
    let path = tmpfile("broken.json");
    let out = bin()
        .args([
            "build", "--type", "A1", "--mode", "constant", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // corrupt one coefficient
    v["terms"][0]["coeff"] = serde_json::json!("7/3");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], serde_json::json!(false));
    std::fs::remove_file(&path).ok();
}

#[test]
fn invalid_tau_is_reported_as_input_error() {
    let out = bin()
        .args([
            "build", "--type", "B2", "--mode", "constant", "--gamma1", "1", "--gamma2", "2",
            "--tau", "1:2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("preserve the inner products"), "{err}");
}

#[test]
fn job_file_with_flag_override() {
    let job = tmpfile("job.json");
    std::fs::write(
        &job,
        serde_json::json!({
            "algebra": "A2",
            "mode": "dynamical",
            "gamma1": [1], "gamma2": [2], "tau": {"1": 2},
            "l": "hrho"
        })
        .to_string(),
    )
    .unwrap();
    let out = bin()
        .args(["build", "--job"])
        .arg(&job)
        .args(["--verify"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["mode"], serde_json::json!("dynamical"));
    // flag overrides the job's algebra: A1 has no simple root 2, so this is
    // an input error
    let out = bin()
        .args(["build", "--job"])
        .arg(&job)
        .args(["--type", "A1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&job).ok();
}

#[test]
fn limit_command_cross_checks() {
    let out = bin()
        .args([
            "limit", "--type", "A2", "--gamma1", "1", "--gamma2", "2", "--tau", "1:2",
            "--l", "hrho", "--ray", "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cybe_exact"], serde_json::json!(true));
    assert_eq!(v["matches_constant_bd_r"], serde_json::json!(true));
}

#[test]
fn integrate_command_matches_closed_form() {
    let out = bin()
        .args([
            "integrate", "--type", "A1", "--gamma1", "1", "--gamma2", "1", "--tau", "1:1",
            "--l", "full", "--order", "5", "--base-point", "1/2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eq10_ok"], serde_json::json!(true));
    assert_eq!(v["matches_closed_form"], serde_json::json!(true));
}

#[test]
fn epsilon_rescaling_through_cli() {
    let path = tmpfile("eps.json");
    let out = bin()
        .args([
            "build", "--type", "A1", "--mode", "dynamical", "--gamma1", "1", "--gamma2", "1",
            "--tau", "1:1", "--l", "full", "--epsilon", "2", "--verify", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().arg("verify").arg(&path).output().unwrap();
    assert!(out.status.success());
    std::fs::remove_file(&path).ok();
}
