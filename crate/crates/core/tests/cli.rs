use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symdiam"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symdiam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn threshold_report() {
    let out = run(&["threshold"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("threshold root: 0.632598"), "{text}");
    assert!(text.contains("0.325930"));
}

#[test]
fn json_envelope() {
    let out = run(&["--json", "lemma5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tool"], "symdiam");
    assert_eq!(v["command"], "lemma5");
    assert_eq!(v["passed"], true);
    assert!(v.get("workers").is_none());
    assert_eq!(v["body"]["cases"].as_array().unwrap().len(), 27);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["walk", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["trees", "--kappa", "0"]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--gens", "/nonexistent", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn trees_then_poly() {
    let cat = tmp("family.json");
    let out = run(&["trees", "--kappa", "17", "--max-path", "5", "--power-limit", "5", "--out", cat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["poly", "--catalog", cat.to_str().unwrap(), "--against", "f"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("EXACT MATCH"));
    let out = run(&["poly", "--catalog", cat.to_str().unwrap(), "--against", "h3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("DIFFERS"));
}

#[test]
fn literal_generic_catalog_is_compared() {
    let cat = tmp("literal.json");
    let out = run(&["trees", "--kappa", "16", "--max-path", "4", "--cycle-mode", "none", "--power", "60", "--out", cat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["poly", "--catalog", cat.to_str().unwrap(), "--against", "f"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("EXACT MATCH") || text.contains("DIFFERS"));
    assert_eq!(out.status.code(), Some(if text.contains("EXACT MATCH") { 0 } else { 1 }));
}

#[test]
fn walk_exact_law() {
    let out = run(&["walk", "--n", "6", "--k", "1", "--eps", "0.1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("mixing length bound: 1769"));
}

#[test]
fn reduce_from_bundled_generators() {
    let gens = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sym490.gens");
    let report = tmp("reduce.json");
    let args = ["reduce", "--gens", gens, "--start-elt", "1", "--target", "0.323", "--trials", "20", "--seed", "5"];
    let out = bin().args(args).args(["--report", report.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert!(v["body"]["reduction"]["delta_trace"].as_array().unwrap().len() >= 2);
    assert!(v["body"]["reduction"]["reference_trace"].is_array());
    assert!(v["body"]["reduction"]["ledger"]["history"].is_array());
    assert_eq!(v["body"]["replays"], true);
    assert_eq!(run(&["reduce", "--gens", gens, "--start-elt", "9", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn reports_do_not_depend_on_workers() {
    let gens = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sym490.gens");
    let mut reports = Vec::new();
    for w in ["1", "8"] {
        let out = run(&["--workers", w, "--json", "reduce", "--gens", gens, "--trials", "16", "--seed", "9"]);
        assert_eq!(out.status.code(), Some(0));
        reports.push(out.stdout);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn verify_all_is_byte_identical_across_workers() {
    let (one, eight) = (tmp("verify1.json"), tmp("verify8.json"));
    let a = run(&["--workers", "1", "verify-all", "--seed", "1", "--out", one.to_str().unwrap()]);
    let b = run(&["--workers", "8", "verify-all", "--seed", "1", "--out", eight.to_str().unwrap()]);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    let (x, y) = (std::fs::read(&one).unwrap(), std::fs::read(&eight).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    let failed = v["body"]["failed"].as_u64().unwrap();
    assert_eq!(a.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}
