use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bmoalab"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("bmoalab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &Path, command: &str, config: &str) -> (i32, Option<Value>) {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let st = bin().arg(command).arg("--config").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    let report = std::fs::read_to_string(out.join("report.json")).ok().map(|t| serde_json::from_str(&t).unwrap());
    (st.status.code().unwrap(), report)
}

#[test]
fn norm_of_constant() {
    let d = scratch("const");
    let (code, r) = run(&d, "norm", r#"{"function": "const(3)", "p": 2, "grid": {"radial": 32, "angular": 64}}"#);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["results"]["estimate"]["value"], 3.0);
    assert_eq!(r["command"], "norm");
    assert_eq!(r["config"]["search"]["rays"], 32);
    assert!(r["error"].is_null());
    assert!(r["tool_version"].is_string() && r["wall_time"].is_number());
}

#[test]
fn norm_of_identity() {
    let d = scratch("id");
    let (code, r) = run(&d, "norm", r#"{"function": "z", "p": 2, "grid": {"radial": 64, "angular": 128}}"#);
    assert_eq!(code, 0);
    let est = &r.unwrap()["results"]["estimate"];
    let v = est["value"].as_f64().unwrap();
    let e = est["error_estimate"].as_f64().unwrap();
    assert!((v - 0.5f64.sqrt()).abs() <= e.max(1e-5), "{v} {e}");
}

#[test]
fn schema_errors_exit_2_without_report() {
    let d = scratch("schema");
    assert_eq!(run(&d, "norm", r#"{"function": "z"}"#), (2, None));
    assert_eq!(run(&d, "norm", r#"{"function": "z", "p": 2, "colour": 1}"#), (2, None));
    assert_eq!(run(&d, "norm", r#"{"function": "zz", "p": 2}"#), (2, None));
    assert_eq!(run(&d, "suite", r#"{"suite": "everything"}"#), (2, None));
    assert_eq!(run(&d, "vmoa", "not json"), (2, None));
    let st = bin().args(["frobnicate", "--config", "x.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_3_with_report() {
    let d = scratch("comp");
    // G vanishes at 0.8, inside the first boxes at angle 0
    let cfg = r#"{"semigroup": {"generator": "-(z-0.8)*(1-0.8*z)", "dw_point": [0.8, 0]}, "p": 1.5,
                  "conditions": ["pLog"], "boxes": {"k_max": 6, "grid": {"radial": 16, "angular": 32}}}"#;
    let (code, r) = run(&d, "condition", cfg);
    assert_eq!(code, 3);
    let r = r.unwrap();
    assert_eq!(r["error"]["kind"], "invalid-region");
    assert!(r["results"].is_null());
}

#[test]
fn vmoa_writes_profile_csv() {
    let d = scratch("vmoa");
    let (code, r) = run(&d, "vmoa", r#"{"function": "log1m(1)", "p": 1.5, "angles": [0, 3.14159], "k_max": 8, "grid": {"radial": 48, "angular": 96}}"#);
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["results"]["profile"]["profiles"][0]["ks"][0], 2);
    let csv = std::fs::read_to_string(d.join("out/profile.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "center_angle,k,param,value");
    assert_eq!(lines.len(), 1 + 2 * 7);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0.0000000000000000e0");
    assert_eq!(fields[2], "2.5000000000000000e-1");
}

#[test]
fn flow_and_gamma_commands() {
    let d = scratch("flow");
    let (code, r) = run(&d, "semigroup-flow", r#"{"semigroup": {"closed_form": "dilation_to_1"}, "samples": 4, "t": 2}"#);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert!(r["results"]["max_closed_form_error"].as_f64().unwrap() < 1e-7);
    assert!((r["results"]["dw_decomposition"]["min_re_p"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(r["results"]["trajectories"].as_array().unwrap().len(), 4);

    let d = scratch("gamma");
    let cfg = r#"{"semigroup": {"closed_form": "dilation"}, "samples": 5, "boxes": {"k_max": 6, "centers": 4, "grid": {"radial": 16, "angular": 32}}}"#;
    let (code, r) = run(&d, "gamma", cfg);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["results"]["case"], "interior");
    assert!(r["results"]["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn volterra_command() {
    let d = scratch("volterra");
    let cfg = r#"{"symbol": "z", "p_to": 1.5, "functions": ["log1m(1)"], "image_k_max": 6,
                  "boxes": {"k_max": 8, "centers": 4}, "grid": {"radial": 32, "angular": 64}}"#;
    let (code, r) = run(&d, "volterra", cfg);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["results"]["logcar"]["compact"], true);
    assert!(r["results"]["lower_bound"].is_null());
    assert!(d.join("out/profile.csv").exists() && d.join("out/profile-image-1.csv").exists());
}
