use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2hitchin")).args(args).output().expect("spawn g2hitchin")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{name}.txt")].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn emit_matches_golden_files() {
    for object in [
        "kummer-v",
        "kummer-u",
        "weddle",
        "classify",
        "inverse",
        "involution",
        "torsion-v",
        "torsion-u",
        "nice-basis",
        "higgs-basis",
        "hamiltonians-rst",
        "vgp",
    ] {
        assert_eq!(stdout(&["emit", "--object", object]), golden(object), "{object}");
    }
    assert_eq!(stdout(&["emit", "--object", "hamiltonians-u", "--source", "table"]), golden("hamiltonians-u-table"));
}

#[test]
fn derived_u_table_differs_from_literal_only_in_h2() {
    let derived = stdout(&["emit", "--object", "hamiltonians-u", "--source", "derived"]);
    assert_eq!(derived, golden("hamiltonians-u-derived"));
    let table = golden("hamiltonians-u-table");
    let differing: Vec<&str> =
        derived.lines().zip(table.lines()).filter(|(a, b)| a != b).map(|(a, _)| a.split(" = ").next().unwrap()).collect();
    assert_eq!(differing, ["N2"]);
}

#[test]
fn emit_formats() {
    let latex = stdout(&["emit", "--object", "hamiltonians-rst", "--format", "latex"]);
    assert_eq!(latex.split("\n\n").filter(|b| !b.trim().is_empty()).count(), 3);
    assert!(latex.starts_with("h_{0} = "));
    let doc: Value = serde_json::from_str(&stdout(&["emit", "--object", "vgp", "--format", "json"])).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert_eq!(entries[5]["name"], "H6");
    assert_eq!(entries[5]["value"]["canonical"], "0");
    let weddle = stdout(&["emit", "--object", "weddle", "--format", "canonical"]);
    assert!(weddle.starts_with("Wed = "));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["emit", "--object", "nothing"]).status.code(), Some(2));
    assert_eq!(run(&["emit", "--object", "weddle", "--format", "pdf"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "kummer", "--params", "1", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "classify", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "classify", "1/0", "2", "3"]).status.code(), Some(2));
    // a module precondition, not a usage error
    assert_eq!(run(&["eval", "classify", "0", "0", "0"]).status.code(), Some(1));
}

#[test]
fn classify_reports_gunning_points() {
    let out = run(&["eval", "classify", "0", "0", "0", "--params", "2", "3", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_[w1]"));
    let out = run(&["classify", "--rst", "2", "3", "5"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_[winf]"));
}

#[test]
fn involution_twice_echoes_input() {
    let once = stdout(&["eval", "involution", "1/2", "-7/3", "4", "--params", "-2", "3/5", "7"]);
    let args: Vec<&str> = once.split_whitespace().collect();
    let mut again = vec!["involute", "--rst"];
    again.extend(&args);
    again.extend(["--params", "-2", "3/5", "7"]);
    assert_eq!(stdout(&again).trim(), "1/2 -7/3 4");
}

#[test]
fn fiber_contains_the_point_and_its_partner() {
    let v = stdout(&["classify", "--rst", "1/2", "3", "-7"]);
    let mut args = vec!["fiber", "--v"];
    args.extend(v.split_whitespace());
    let out = stdout(&args);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "kind generic");
    let partner = stdout(&["involute", "--rst", "1/2", "3", "-7"]);
    assert!(lines.contains(&"1/2 3 -7"));
    assert!(lines.contains(&partner.trim()));
    // an irrational fiber is returned over Q(d)
    let out = stdout(&["fiber", "--v", "1", "2", "3", "4"]);
    assert!(out.lines().nth(1).unwrap().starts_with("d^2 = "));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn hamiltonians_at_zero_covector() {
    assert_eq!(stdout(&["eval", "hamiltonians-rst", "1/2", "3", "-7", "0", "0", "0"]).trim(), "0 0 0");
    assert_eq!(stdout(&["eval", "vgp", "7", "0", "0"]).split_whitespace().next(), Some("14/15"));
}

#[test]
fn verify_torsion_report() {
    let out = run(&["verify", "--suite", "torsion", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["suite"], "torsion");
    assert_eq!(report["seed"], 7);
    let checks = report["checks"].as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["elapsed_ms"].is_null()));
    let group = checks.iter().find(|c| c["id"] == "torsion.group-law").unwrap();
    assert_eq!(group["witness"]["order"], 16);
    assert_eq!(report["summary"]["total"], checks.len());
    assert_eq!(report["summary"]["pass"], checks.len());
}

#[test]
fn verify_is_reproducible_and_reports_the_literal_sign_mismatch() {
    let a = run(&["verify", "--suite", "higgs", "--seed", "3"]);
    let b = run(&["verify", "--suite", "higgs", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["summary"]["fail"], 1);
    let failed = report["checks"].as_array().unwrap().iter().find(|c| c["status"] == "fail").unwrap();
    assert_eq!(failed["id"], "higgs.determinant-identity");
    assert_eq!(failed["witness"]["table_equals_minus_F_det"], serde_json::json!([true, true, true]));
}

#[test]
fn verify_with_fixed_params() {
    let out = run(&["verify", "--suite", "chart", "--params", "2", "3", "5", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["params"]["r"], "2");
    assert_eq!(report["samples"], 10);
}
