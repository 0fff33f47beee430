//! End-to-end behaviour of the command-line front end: exit codes, key
//! precedence, manifests and checksums.

use std::fs;
use std::path::Path;
use std::process::Command;

use membrane_cli::main_with_args;
use membrane_cli::output::{read_manifest, sha256_hex};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["membrane"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn dir_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

/// Every file in the manifest exists with the recorded checksum.
fn assert_inventory(dir: &Path) -> Value {
    let manifest = read_manifest(dir).unwrap();
    for f in manifest["files"].as_array().unwrap() {
        let bytes = fs::read(dir.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
        assert_eq!(f["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
    manifest
}

#[test]
fn modes_reports_the_computed_roots() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("modes");
    let (code, _, _) = run(&["modes", "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 0);
    let line = fs::read_to_string(dir.join("modes.jsonl")).unwrap();
    assert_eq!(line.lines().count(), 1);
    let report: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(report["roots"], serde_json::json!([1.0, -4.0]));
    assert_eq!(report["agreement_flag"], Value::Bool(false));
    assert_eq!(report["paper_claimed"], serde_json::json!([4.0, -1.0]));
    let manifest = assert_inventory(&dir);
    assert_eq!(manifest["status"], "ok");
    assert_eq!(manifest["command"], "modes");
    assert_eq!(manifest["files"].as_array().unwrap().len(), 1);
}

#[test]
fn out_of_range_value_is_a_usage_error_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("never");
    let (code, _, err) = run(&["evolve", "--time.cfl", "1.5", "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 1);
    assert!(err.contains("time.cfl"), "{err}");
    assert!(!dir.exists());
}

#[test]
fn malformed_command_lines_exit_with_usage() {
    assert_eq!(run(&["orbit"]).0, 1);
    assert_eq!(run(&["modes", "--grid.m", "3"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    let dir = tmp.path().join("out");
    fs::write(&cfg, format!("seed = 4\n[grid]\nn = 128\n[output]\ndirectory = {:?}\n", dir_arg(&dir)))
        .unwrap();
    let cfg_arg = dir_arg(&cfg);
    assert_eq!(run(&["modes", "--config", &cfg_arg]).0, 0);
    assert_eq!(read_manifest(&dir).unwrap()["config"]["grid.n"], 128);
    assert_eq!(run(&["modes", "--config", &cfg_arg, "--grid.n", "256"]).0, 0);
    let manifest = read_manifest(&dir).unwrap();
    assert_eq!(manifest["config"]["grid.n"], 256);
    assert_eq!(manifest["config"]["seed"], 4);
}

#[test]
fn unknown_file_key_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[time]\ndt = 0.1\n").unwrap();
    let (code, _, err) = run(&["modes", "--config", &dir_arg(&cfg)]);
    assert_eq!(code, 1);
    assert!(err.contains("time.dt"), "{err}");
}

#[test]
fn lightlike_initial_data_reports_degeneracy() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("light");
    let (code, out, _) =
        run(&["evolve", "--ic.kind", "lightlike", "--grid.n", "64", "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 2);
    assert!(out.contains("degenerat"), "{out}");
    let manifest = assert_inventory(&dir);
    assert_eq!(manifest["status"], "degeneracy");
    assert_eq!(manifest["exit_code"], 2);
    let summary: Value =
        serde_json::from_str(fs::read_to_string(dir.join("evolve_summary.jsonl")).unwrap().trim()).unwrap();
    assert_eq!(summary["termination"], "degeneracy");
    assert_eq!(summary["steps"], 0);
}

#[test]
fn verify_passes_on_a_correct_build() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("verify");
    let (code, out, _) = run(&["verify", "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    let rows = fs::read_to_string(dir.join("verify.jsonl")).unwrap();
    for line in rows.lines() {
        let row: Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["passed"], Value::Bool(true), "{line}");
    }
}

#[test]
fn fit_reads_a_series_file() {
    let tmp = tempfile::tempdir().unwrap();
    let series = tmp.path().join("series.csv");
    let mut text = String::from("t,axis_urr\n");
    for k in 0..12 {
        let t = 0.1 * k as f64;
        text.push_str(&format!("{t},{}\n", -2.0 / (1.5 - t)));
    }
    fs::write(&series, text).unwrap();
    let dir = tmp.path().join("fit");
    let (code, _, _) = run(&["fit", "--fit.input", &dir_arg(&series), "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 0);
    let rec: Value =
        serde_json::from_str(fs::read_to_string(dir.join("blowup.jsonl")).unwrap().trim()).unwrap();
    assert!((rec["t_est"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert!((rec["amplitude_c"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(rec["synthetic_blowup_time"], Value::Null);

    let missing = tmp.path().join("absent.csv");
    let dir2 = tmp.path().join("fit2");
    let (code, _, err) =
        run(&["fit", "--fit.input", &dir_arg(&missing), "--output.directory", &dir_arg(&dir2)]);
    assert_eq!(code, 1, "{err}");
    assert!(!dir2.exists());
}

#[test]
fn output_formats_select_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("csv-only");
    let (code, _, _) = run(&["fit", "--output.formats", "csv", "--output.directory", &dir_arg(&dir)]);
    assert_eq!(code, 0);
    assert!(dir.join("fit_series.csv").exists());
    assert!(!dir.join("blowup.jsonl").exists());
    let header = fs::read_to_string(dir.join("fit_series.csv")).unwrap();
    assert!(header.starts_with("t,axis_urr\n"));
}

#[test]
fn environment_overrides_the_file_but_not_the_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, format!("[output]\ndirectory = {:?}\n", dir_arg(&tmp.path().join("file")))).unwrap();
    let bin = env!("CARGO_BIN_EXE_membrane");
    let env_dir = tmp.path().join("env");
    let status = Command::new(bin)
        .args(["modes", "--config", &dir_arg(&cfg)])
        .env("MEMBRANE_OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(env_dir.join("manifest.jsonl").exists());
    assert!(!tmp.path().join("file").exists());

    let flag_dir = tmp.path().join("flag");
    let status = Command::new(bin)
        .args(["modes", "--config", &dir_arg(&cfg), "--output.directory", &dir_arg(&flag_dir)])
        .env("MEMBRANE_OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(flag_dir.join("manifest.jsonl").exists());
}
