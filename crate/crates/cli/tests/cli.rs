use std::fs;
use std::process::{Command, Output};

fn spinstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinstat"))
        .args(args)
        .output()
        .expect("spawn spinstat")
}

#[test]
fn phase_table_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = spinstat(&[
        "phase-table",
        "--twice-spin-max",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "phase-table");
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["config"]["twice_spin_max"], 2);
    let expected: Vec<i64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["expected"].as_i64().unwrap())
        .collect();
    assert_eq!(expected, vec![1, -1, 1]);
}

#[test]
fn tiny_tolerance_fails_with_nonzero_exit() {
    let out = spinstat(&[
        "phase-table",
        "--twice-spin-max",
        "2",
        "--tol",
        "1e-30",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("twice_spin,expected,measured_re,measured_im,residual,passed")
    );
    assert!(lines.any(|l| l.ends_with(",false")));
}

#[test]
fn invalid_config_is_an_error() {
    let out = spinstat(&["tilted", "--twice-spin-max", "17"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("twice_spin_max"));
    let out = spinstat(&["verify-all", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spinstat(&["phase-table", "--format", "xml"]);
    assert!(!out.status.success());
}

#[test]
fn tilted_text_report() {
    let out = spinstat(&["tilted", "--twice-spin-max", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2s = 1: theta = [0.000000, 3.141593]"));
    assert!(text.contains("2s = 2: theta = [0.000000, 1.570796, 3.141593]"));
    assert!(text.trim_end().ends_with("overall: PASS"));
}

#[test]
fn verify_all_seed_changes_residuals_not_verdicts() {
    let a = spinstat(&[
        "verify-all",
        "--twice-spin-max",
        "4",
        "--trials",
        "5",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    let b = spinstat(&[
        "verify-all",
        "--twice-spin-max",
        "4",
        "--trials",
        "5",
        "--seed",
        "2",
        "--format",
        "json",
    ]);
    assert!(a.status.success() && b.status.success());
    let va: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    let verdicts = |v: &serde_json::Value| -> Vec<(String, bool)> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["suite"].as_str().unwrap().to_string(),
                    r["passed"].as_bool().unwrap(),
                )
            })
            .collect()
    };
    assert_eq!(verdicts(&va), verdicts(&vb));
}
