use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mtcalc-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn cardy_round_trip_through_files() {
    let dir = scratch("cardy");
    let file = dir.join("t.json");
    let out = run(&[
        "build-cardy",
        "--builtin",
        "ising",
        "--brane",
        "1+sigma",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "check-cardy",
        "--builtin",
        "ising",
        file.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["pass"], true);

    // a triple built for another category is rejected
    let out = run(&[
        "check-cardy",
        "--builtin",
        "fibonacci",
        file.to_str().unwrap(),
    ]);
    assert_ne!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn eval_loop_value() {
    let out = run(&[
        "eval",
        "--builtin",
        "fibonacci",
        "--json",
        "(trace (id tau))",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((v["scalar"][0].as_f64().unwrap() - golden).abs() < 1e-12);
    assert!(v["scalar"][1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn smatrix_and_info() {
    let out = run(&["smatrix", "--builtin", "z3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["s"].as_array().unwrap().len(), 3);
    let out = run(&["info", "--builtin", "ising", "--double", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rank"], 9);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["run-all"]).status.code(), Some(2));
    assert_eq!(
        run(&["validate", "--builtin", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["validate", "/nonexistent/cat.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn failing_check_exits_1() {
    let dir = scratch("frob");
    let bad = dir.join("alg.json");
    let out = run(&["build-cardy", "--builtin", "fibonacci", "--brane", "tau"]);
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut open = v["open"].take();
    std::fs::write(&bad, open.to_string()).unwrap();
    let ok = run(&[
        "check-frobenius",
        "--builtin",
        "fibonacci",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    open["mu"][1]["v"][0] = serde_json::json!(2.0);
    std::fs::write(&bad, open.to_string()).unwrap();
    let out = run(&[
        "check-frobenius",
        "--builtin",
        "fibonacci",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn schema_is_json() {
    let out = run(&["schema"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["type"], "array");
}
