use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn formflux(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formflux"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map(|d| {
            d.map(|e| e.unwrap().file_name().into_string().unwrap())
                .collect()
        })
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn example1_worldlines_are_straight() {
    let dir = tempfile::tempdir().unwrap();
    let out = formflux(&["worldlines", "--scenario", "example1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = files(dir.path());
    assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 5);
    assert!(names.contains(&"worldlines.svg".to_string()));
    let csv = fs::read_to_string(dir.path().join("worldline_002.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("param,t,x"));
    // seed (1, 0): x = −(t − 1)/2
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[2] + 0.5 * (v[1] - 1.0)).abs() < 1e-9, "{row}");
    }
}

#[test]
fn empty_seed_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"scenario": "example3", "seeds": []}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = formflux(
        &["worldlines", "--config", cfg.to_str().unwrap()],
        &out_dir,
    );
    assert!(out.status.success());
    assert!(files(&out_dir).is_empty());
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"scenario": "example3", "seeds": [[0.0, 9.0, 1.0]]}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["balance", "--scenario", "example4"],
        vec!["worldlines", "--config", cfg.to_str().unwrap()],
        vec!["worldlines", "--scenario", "example5"],
        vec!["balance", "--ode-step", "-1"],
        vec!["balance", "--param", "rho0=0"],
        vec!["balance", "--config", "/nonexistent.json"],
    ];
    for args in cases {
        let out = formflux(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn perturbed_source_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = formflux(
        &["balance", "--param", "source_perturbation=0.1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("balance.json")).unwrap())
            .unwrap();
    let r = report["spatial"]["max_residual"].as_f64().unwrap();
    assert!((r - 0.1).abs() < 1e-12);
    assert_eq!(report["passed"], Value::Bool(false));
}

#[test]
fn zero_and_example1_pass() {
    for scenario in ["zero", "example1"] {
        let dir = tempfile::tempdir().unwrap();
        let out = formflux(&["balance", "--scenario", scenario], dir.path());
        assert_eq!(out.status.code(), Some(0), "{scenario}");
        let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(printed["passed"], Value::Bool(true));
    }
}

#[test]
fn currents_report_layout_and_vacuous_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = formflux(
        &["currents", "--scenario", "example5", "--tests", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["vacuous"], Value::Bool(true));
    assert_eq!(rep["max_defect"].as_f64(), Some(0.0));

    let out = formflux(
        &["currents", "--scenario", "example5", "--tests", "8", "--seed", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    let tests = rep["tests"].as_array().unwrap();
    assert_eq!(tests.len(), 8);
    for key in ["center", "radius", "lhs", "rhs", "defect"] {
        assert!(tests[0].get(key).is_some(), "{key}");
    }
    assert!(rep.get("convention").is_some());
}

#[test]
fn same_seed_same_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let args = ["currents", "--scenario", "example1", "--tests", "3", "--seed", "11"];
        assert!(formflux(&args, dir.path()).status.success());
        assert!(formflux(&["balance", "--seed", "11"], dir.path()).status.success());
    }
    for name in ["currents.json", "balance.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn scenarios_are_listed() {
    let out = Command::new(env!("CARGO_BIN_EXE_formflux"))
        .arg("scenarios")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "surface-growth"));
}
