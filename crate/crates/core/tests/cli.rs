//! End-to-end runs of the `wolffkit` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wolffkit::{wolff_eval, Parameters, PotentialConfig, RadialFunction, WolffOrder};

fn wolffkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wolffkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_params(dir: &Path, params: &Parameters) -> String {
    let path = dir.join("params.json");
    std::fs::write(&path, serde_json::to_string(params).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn bubble() -> Parameters {
    Parameters::scalar(5, 1.0, 2.0, 7.0 / 3.0, 0.0).unwrap()
}

#[test]
fn classify_prints_the_regime_report() {
    let out = wolffkit(&[
        "classify", "--n", "5", "--beta", "1", "--gamma", "2", "--p", "3", "--q", "3", "--sigma1", "0", "--sigma2", "0",
    ]);
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["regime"], "FastFast");
    assert_eq!(json["subcriticality"], "Supercritical");
    assert_eq!(json["u_exponent"], 3.0);
    assert_eq!(json["v_exponent"], 3.0);
    assert_eq!(json["v_log_power"], 0.0);
    assert_eq!(json["integrability"]["u_low"], 5.0 / 3.0);
}

#[test]
fn classify_reads_a_parameter_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_params(dir.path(), &Parameters::new(5, 1.0, 2.0, 1.5, 4.0, 0.0, 0.0).unwrap());
    let out = wolffkit(&["classify", "--params", &params]);
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["regime"], "Intermediate");
    assert!((json["v_exponent"].as_f64().unwrap() - 2.5).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = wolffkit(&["classify", "--n", "5", "--beta", "1", "--p", "3", "--q", "3", "--sigma1", "0", "--sigma2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--gamma"));
}

#[test]
fn domain_errors_exit_with_one_and_json() {
    let out = wolffkit(&[
        "classify", "--n", "5", "--beta", "1", "--gamma", "6", "--p", "3", "--q", "3", "--sigma1", "0", "--sigma2", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string() && err["message"].is_string());
}

#[test]
fn eval_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let params = bubble();
    let params_path = write_params(dir.path(), &params);
    let source = RadialFunction::indicator(1.0, 1e-2, 33).unwrap();
    let source_path = dir.path().join("f.csv");
    source.save(&source_path).unwrap();
    let out_path = dir.path().join("w.csv");
    let out = wolffkit(&[
        "eval",
        "--op",
        "wolff",
        "--params",
        &params_path,
        "--source",
        source_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written = RadialFunction::load(&out_path).unwrap();
    let expected = wolff_eval(WolffOrder::from(&params), &source, &PotentialConfig::default(), source.grid()).unwrap();
    assert_eq!(written, expected);
}

#[test]
fn shoot_writes_the_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_params(dir.path(), &Parameters::scalar(3, 1.0, 2.0, 5.0, 0.0).unwrap());
    let out_dir = dir.path().join("shot");
    let out = wolffkit(&["shoot", "--params", &params, "--r-stop", "1e3", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    let u = RadialFunction::load(&out_dir.join("u.csv")).unwrap();
    let bubble = (1.0f64 + 1.0 / 3.0).powf(-0.5);
    assert!((u.eval(1.0) / bubble - 1.0).abs() < 1e-4);
}

#[test]
fn verify_writes_a_report_and_tolerates_failed_checks() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_params(dir.path(), &bubble());
    let report_path = dir.path().join("report.json");
    let out = wolffkit(&["verify", "--params", &params, "--suite", "loglimit", "--out", report_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["name"].as_str().unwrap().starts_with("log_limit")));
    assert!(report["timestamp"].is_string());
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn reports_are_reproducible_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let params = write_params(dir.path(), &bubble());
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = wolffkit(&[
            "--no-timestamp",
            "verify",
            "--params",
            &params,
            "--suite",
            "loglimit",
            "--seed",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
