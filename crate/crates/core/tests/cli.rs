use std::process::{Command, Output};

use restart_rate::{DiscreteLandscape, LandscapeProfile};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restart-rate"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_p4(dir: &std::path::Path) -> String {
    let path = dir.join("p4.json");
    let l = DiscreteLandscape::path(&[0.0, 2.0, 1.0, 3.0]).unwrap();
    std::fs::write(&path, l.to_json().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bounds_constants() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["bounds-constants"])).unwrap();
    let product = v["product"].as_f64().unwrap();
    assert!((product - 8.00874578).abs() < 1e-7);
}

#[test]
fn landscape_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p4 = write_p4(dir.path());

    let profile = LandscapeProfile::from_json(&stdout(&["extract-profile", "--landscape", &p4])).unwrap();
    assert_eq!(profile.p2, vec![0.25, 0.25]);

    let depth: serde_json::Value = serde_json::from_str(&stdout(&["critical-depth", "--landscape", &p4])).unwrap();
    assert_eq!(depth["d_f"].as_f64(), Some(1.0));

    let xi: serde_json::Value =
        serde_json::from_str(&stdout(&["xi-crit", "--landscape", &p4, "--mode", "g1"])).unwrap();
    let expect = ((17f64.sqrt() - 1.0) / 2.0).ln();
    assert!((xi["xi_crit"].as_f64().unwrap() - expect).abs() < 1e-12);

    let est: serde_json::Value = serde_json::from_str(&stdout(&[
        "simulate", "--landscape", &p4, "--runs", "50000", "--format", "json",
    ]))
    .unwrap();
    assert!((est["exact_log_rho"].as_f64().unwrap() + expect).abs() < 1e-12);

    let csv = stdout(&["simulate", "--landscape", &p4, "--runs", "100", "--cap", "5"]);
    assert!(csv.starts_with("N,survivors,p_hat\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn profile_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.json");
    let path = path.to_str().unwrap();
    stdout(&["gen-profile", "--family", "exponential", "--steepness", "2", "--out", path]);
    let r: serde_json::Value =
        serde_json::from_str(&stdout(&["p-best", "--profile", path, "--grid", "64"])).unwrap();
    assert!(r["xi"].as_f64().unwrap() > 0.0);
    let curve = stdout(&["rate-curve", "--profile", path, "--grid", "16", "--format", "svg"]);
    assert!(curve.contains("<polyline"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pt.csv");
    let printed = stdout(&["phase-transition", "--landscapes", "4", "--grid", "8", "--seed", "3"]);
    stdout(&[
        "phase-transition", "--landscapes", "4", "--grid", "8", "--seed", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(out).unwrap(), printed);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["xi-crit", "--profile", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(cli(&["xi-crit", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(cli(&["xi-crit", "--p", "1.5"]).status.code(), Some(1));
    assert_eq!(cli(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}
