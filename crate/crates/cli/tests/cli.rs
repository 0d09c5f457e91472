use std::process::{Command, Output};

use serde_json::{json, Value};

fn hfdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfdlab")).args(args).env_remove("HFDLAB_CAP").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_cyclic_six() {
    let out = hfdlab(&["analyze", "--group", "6", "--classes", "2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["schema"], json!(1));
    assert_eq!(doc["group"], json!({ "moduli": [6] }));
    assert_eq!(doc["atoms"].as_array().unwrap().len(), 4);
    assert_eq!(doc["relations"].as_array().unwrap().len(), 1);
    assert_eq!(doc["good"], json!(["(3,3)"]));
    assert_eq!(doc["analysis"]["hfd"], json!(false));
    let rel = &doc["relations"][0];
    assert_eq!(rel["lengths"], json!([2, 3]));
    assert_eq!(rel["irredundant"], json!(true));
}

#[test]
fn analyze_congruence_and_factorial_cases() {
    let doc = json_of(&hfdlab(&["analyze", "--group", "4", "--classes", "1,3", "--r", "2"]));
    assert_eq!(doc["analysis"]["r_chfd"]["2"], json!(true));
    assert_eq!(doc["analysis"]["hfd"], json!(false));
    let doc = json_of(&hfdlab(&["analyze", "--group", "2", "--classes", "0,1"]));
    assert_eq!(doc["analysis"]["factorial"], json!(true));
}

#[test]
fn analyze_rank_two_classes() {
    let out = hfdlab(&["analyze", "--group", "2,2", "--classes", "1:0,0:1,1:1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["classes"], json!(["0,1", "1,0", "1,1"]));
    assert_eq!(doc["analysis"]["hfd"], json!(false));
}

#[test]
fn analyze_localization_and_config_file() {
    let doc = json_of(&hfdlab(&["analyze", "--group", "4", "--classes", "1,2", "--localize-at", "(2,2)"]));
    let loc = &doc["localization"];
    assert_eq!(loc["c"], json!(["(1,1,2)"]));
    assert_eq!(loc["insertions"][0]["witness"], json!("(2,2)(1,1,1,1) = (1,1,2)^2"));
    assert_eq!(loc["insertions"][0]["verified"], json!(true));

    let dir = std::env::temp_dir().join(format!("hfdlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("setup.json");
    std::fs::write(&path, r#"{"group": {"moduli": [6]}, "classes": ["2", "3", "4"], "s_generators": ["(3,3)"]}"#).unwrap();
    let doc = json_of(&hfdlab(&["analyze", "--config", path.to_str().unwrap()]));
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(doc["localization"]["nagata"]["localized_hfd"], json!(false));
    assert_eq!(doc["localization"]["c"].as_array().unwrap().len(), 3);
}

#[test]
fn csv_lists_atoms() {
    let out = hfdlab(&["analyze", "--group", "6", "--classes", "2,3,4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,literal,length,verdict,witness\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(hfdlab(&["analyze", "--group", "1", "--classes", "0"]).status.code(), Some(2));
    assert_eq!(hfdlab(&["analyze", "--group", "6", "--classes", "2,3,4", "--r", "1"]).status.code(), Some(2));
    assert_eq!(hfdlab(&["analyze", "--group", "6", "--classes", "2,3,4", "--localize-at", "(2,4)"]).status.code(), Some(2));
    assert_eq!(hfdlab(&["analyze", "--group", "6", "--classes", "2,3,4", "--bound", "3"]).status.code(), Some(2));
    assert_eq!(hfdlab(&["survey", "--max-order", "9"]).status.code(), Some(2));
    assert_eq!(hfdlab(&["survey", "--check", "bogus"]).status.code(), Some(2));
    let capped = hfdlab(&["analyze", "--group", "6", "--classes", "0,1,2,3,4,5", "--cap", "1000"]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hfdlab"))
        .args(["analyze", "--group", "6", "--classes", "0,1,2,3,4,5"])
        .env("HFDLAB_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn worked_examples_pass() {
    let out = hfdlab(&["verify-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["passed"], json!(true));
    assert_eq!(doc["fixtures"].as_array().unwrap().len(), 3);
}

#[test]
fn equality_checks() {
    let out = hfdlab(&["check-equality", "--lhs", "3,3,3,3", "--rhs", "5+2i14,5-2i14"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["irredundant"], json!(true));
    assert_eq!(doc["lengths"], json!([4, 2]));

    let tampered = hfdlab(&["check-equality", "--lhs", "3,3,3", "--rhs", "5+2i14,5-2i14"]);
    assert_eq!(tampered.status.code(), Some(1));
    assert_eq!(json_of(&tampered)["equal"], json!(false));

    let poly = hfdlab(&["check-equality", "--lhs", "2,2,X^2+X+1", "--rhs", "2X+1+i3,2X+1-i3"]);
    assert_eq!(poly.status.code(), Some(0));
    assert_eq!(json_of(&poly)["balanced"], json!(false));

    assert_eq!(hfdlab(&["check-equality", "--lhs", "3", "--rhs", "1+i3", "--d", "14"]).status.code(), Some(2));
}

#[test]
fn survey_checks() {
    for (order, check) in [("6", "kaplansky"), ("5", "nagata"), ("6", "r-chfd"), ("6", "prop4")] {
        let out = hfdlab(&["survey", "--max-order", order, "--check", check]);
        assert_eq!(out.status.code(), Some(0), "{check}");
        let doc = json_of(&out);
        assert_eq!(doc["checks"][0]["counterexample_count"], json!(0));
    }
}

#[test]
fn survey_output_is_reproducible() {
    let a = hfdlab(&["survey", "--max-order", "6"]);
    let b = hfdlab(&["survey", "--max-order", "6"]);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
