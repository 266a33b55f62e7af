//! End-to-end checks of the binary surface: canonical output, exit codes,
//! and byte-identical reruns.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubicdyn"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn bottcher_emits_canonical_coefficients() {
    let (stdout, _, code) = run(&["bottcher", "--order", "2"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("json");
    // a_1 = -(w/4) c^2: one term [2, 0, "0", "-1/4"].
    assert_eq!(
        doc["coefficients"][0]["terms"][0],
        serde_json::json!([2, 0, "0", "-1/4"])
    );
    assert_eq!(doc["seed"], 42);
}

#[test]
fn bottcher_verify_reports_pass() {
    let (stdout, _, code) = run(&["bottcher", "--order", "4", "--verify"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("json");
    assert_eq!(doc["functional_equation"]["pass"], true);
    assert_eq!(doc["coefficient_bounds"]["pass"], true);
}

#[test]
fn green_single_point_record() {
    let (stdout, _, code) = run(&["green", "--c", "0", "--a", "10"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("json");
    let g0 = doc["g0"].as_f64().unwrap();
    let g1 = doc["g1"].as_f64().unwrap();
    assert!((g0 - g1).abs() < 1e-9, "unicritical: g0 = g1");
    assert!((g0 - 10f64.ln()).abs() < 2.0);
}

#[test]
fn unknown_flag_exits_one_with_no_output() {
    let (stdout, stderr, code) = run(&["green", "--definitely-not-a-flag"]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty(), "no partial output on stdout");
    assert!(!stderr.is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["bottcher", "--order", "3"],
        vec!["classify", "--check", "zset", "--q", "1", "--m", "0", "--zeta=-1"],
        vec!["perm", "--m", "1", "--lambda", "0", "--c-grid=-1,1,3"],
        vec!["multiplier-valuations", "--d", "2", "--m", "1", "--t-minpoly", "1,1"],
    ] {
        let (a, _, code_a) = run(&args);
        let (b, _, code_b) = run(&args);
        assert_eq!(code_a, 0, "{args:?}");
        assert_eq!(code_b, 0);
        assert_eq!(a, b, "output differs across reruns for {args:?}");
        assert!(!a.is_empty());
    }
}

#[test]
fn config_file_fills_defaults() {
    let dir = std::env::temp_dir().join("cubicdyn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"seed": 7}"#).unwrap();
    let (stdout, _, code) = run(&["--config", cfg.to_str().unwrap(), "bottcher", "--order", "2"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["seed"], 7);
}

#[test]
fn threads_flag_does_not_change_output() {
    let base = ["pcf", "--max-orbit", "1"];
    let (a, _, _) = run(&base);
    let mut with_threads = vec!["--threads", "2"];
    with_threads.extend_from_slice(&base);
    let (b, _, _) = run(&with_threads);
    assert_eq!(a, b);
}
