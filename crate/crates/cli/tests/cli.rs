//! End-to-end tests against the compiled `genham` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn genham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn last_stdout_line(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .last()
        .unwrap_or_default()
        .to_string()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_passes_and_reports() {
    let output = genham(&["validate", "--seed", "7"]);
    assert!(output.status.success(), "{output:?}");
    assert_eq!(last_stdout_line(&output), "RESULT validate pass");
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("mech-rk4-oracle-error"));
    assert!(text.contains("quantum-unitarity-drift"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn schema_is_valid_json() {
    let output = genham(&["schema"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    let json_part = text.rsplit_once("RESULT").unwrap().0;
    let value: serde_json::Value = serde_json::from_str(json_part).unwrap();
    let listed: Vec<&str> = value["kinds"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|k| k["kind"].as_str())
        .collect();
    assert!(listed.contains(&"classical"), "{listed:?}");
    assert!(listed.contains(&"quantum"), "{listed:?}");
}

#[test]
fn fit_t0_zero_shift_gives_zero() {
    let output = genham(&[
        "fit-t0", "--m", "2", "--n", "1", "--nu-exp", "4.5e14", "--nu-th", "4.5e14",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("T0 = 0.000000000000e0 K"), "{text}");
}

#[test]
fn fit_t0_rejects_bad_quantum_numbers() {
    let output = genham(&[
        "fit-t0", "--m", "1", "--n", "1", "--nu-exp", "1", "--nu-th", "0",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("m > n"));
}

#[test]
fn classical_scenario_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "damped.json",
        r#"{
            "kind": "classical",
            "parameters": {"dt": 1e-3, "steps": 200, "force": "linear-drag", "drag": 0.1}
        }"#,
    );
    let out_dir = dir.path().join("results");
    let output = genham(&[
        "simulate-classical",
        "--config",
        &config,
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    assert_eq!(last_stdout_line(&output), "RESULT classical pass");
    assert!(out_dir.join("timeseries.csv").exists());
    assert!(out_dir.join("timeseries.meta.json").exists());
    let csv = fs::read_to_string(out_dir.join("timeseries.csv")).unwrap();
    assert!(csv.starts_with("t,"));
    assert_eq!(csv.lines().count(), 202); // header + steps + initial sample
}

#[test]
fn param_override_changes_result() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "base.json",
        r#"{"kind": "classical", "parameters": {"dt": 1e-3, "steps": 100}}"#,
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let base = genham(&[
        "simulate-classical",
        "--config",
        &config,
        "--output",
        out_a.to_str().unwrap(),
    ]);
    let bumped = genham(&[
        "simulate-classical",
        "--config",
        &config,
        "-P",
        "q0=2.0",
        "--output",
        out_b.to_str().unwrap(),
    ]);
    assert!(base.status.success() && bumped.status.success());
    let a = fs::read_to_string(out_a.join("timeseries.csv")).unwrap();
    let b = fs::read_to_string(out_b.join("timeseries.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn missing_config_is_a_config_error() {
    let output = genham(&["simulate-classical", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("cfg.json"));
}

#[test]
fn invalid_config_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{"kind": "classical", "parameters": {"dt": -1, "steps": 10, "mystery": 3}}"#,
    );
    let output = genham(&["simulate-classical", "--config", &config]);
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("dt"), "{err}");
    assert!(err.contains("mystery"), "{err}");
}

#[test]
fn kind_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "quantum.json",
        r#"{"kind": "quantum", "parameters": {"dt": 1e-3, "steps": 10}}"#,
    );
    let output = genham(&["simulate-classical", "--config", &config]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("quantum"));
}

#[test]
fn quantum_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "packet.json",
        r#"{
            "kind": "quantum",
            "parameters": {
                "dt": 1e-2, "steps": 50, "grid-points": 128,
                "k": 0.2, "propagator": "factored"
            }
        }"#,
    );
    let output = genham(&["simulate-quantum", "--config", &config]);
    assert!(output.status.success(), "{output:?}");
    assert_eq!(last_stdout_line(&output), "RESULT quantum pass");
}

#[test]
fn thermo_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "spectrum.json",
        r#"{"kind": "thermo-spectrum", "parameters": {"t0": 300.0}}"#,
    );
    let output = genham(&["thermo", "--config", &config]);
    assert!(output.status.success(), "{output:?}");
    assert_eq!(last_stdout_line(&output), "RESULT thermo-spectrum pass");
}
