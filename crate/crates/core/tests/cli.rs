mod common;

use std::fs;
use std::process::{Command, Output};

use common::fixture;
use serde_json::{json, Value};

fn latint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latint")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn check_reports_flags_and_counts() {
    let out = latint(&["check", "--model", &path("ternary2.model.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["join_irreducibles"], 4);
    for a in report["attributes"].as_array().unwrap() {
        assert_eq!(a["flags"]["is_linear"], true);
        assert_eq!(a["flags"]["is_distributive"], true);
        assert_eq!(a["join_irreducibles"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn check_warns_on_m3() {
    let out = latint(&["check", "--model", &path("m3.model.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["attributes"][0]["flags"]["is_lower_locally_distributive"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn check_rejects_non_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("bowtie.json");
    fs::write(
        &model,
        r#"{"attributes":[{"name":"x","elements":["a","b","c","d"],"covers":[["a","c"],["a","d"],["b","c"],["b","d"]]}]}"#,
    )
    .unwrap();
    let out = latint(&["check", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"attributes\": [").unwrap();
    let out = latint(&["check", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = latint(&["interact", "--values", &path("capacity2.values.json"), "--target", "7,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = latint(&["interact", "--values", &path("capacity2.values.json"), "--scheme", "owen"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mobius_of_complementary_capacity() {
    let out = latint(&["mobius", "--values", &path("capacity2.values.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let m: Vec<&str> = doc["values"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(m, ["0", "0", "0", "1"]);
}

#[test]
fn mobius_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let m_path = dir.path().join("m.json");
    let g_path = dir.path().join("g.json");
    let model = path("chains432.model.json");
    let values = path("chains432.values.json");
    let out = latint(&["mobius", "--model", &model, "--values", &values, "--out", m_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = latint(&[
        "mobius", "--inverse", "--model", &model, "--values", m_path.to_str().unwrap(), "--out", g_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let original: Value = serde_json::from_str(&fs::read_to_string(values).unwrap()).unwrap();
    let rebuilt: Value = serde_json::from_str(&fs::read_to_string(g_path).unwrap()).unwrap();
    assert_eq!(original["values"], rebuilt["values"]);
}

#[test]
fn interact_on_capacity() {
    let out = latint(&["interact", "--values", &path("capacity2.values.json"), "--format", "json", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows: Vec<(Value, Value)> = doc["rows"].as_array().unwrap().iter().map(|r| (r["target"].clone(), r["value"].clone())).collect();
    let expect = [(json!(["0", "1"]), json!("1/2")), (json!(["1", "0"]), json!("1/2")), (json!(["1", "1"]), json!("1"))];
    assert_eq!(rows, expect);
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn interact_ternary_square_targets() {
    let out = latint(&[
        "interact", "--model", &path("ternary2.model.json"), "--values", &path("ternary2.values.json"), "--format", "json",
    ]);
    let doc = json(&out);
    let pairs: Vec<&Value> = doc["rows"].as_array().unwrap().iter().filter(|r| r["support"].as_array().unwrap().len() == 2).collect();
    assert_eq!(pairs.len(), 4);
    let at = |a: &str, b: &str| {
        pairs.iter().find(|r| r["target"][0] == a && r["target"][1] == b).unwrap()["value"].as_str().unwrap().to_string()
    };
    // I(∅,∅) = v(∅,∅) - v(∅,1) - v(∅,2) + v(∅,12) = 0 + 3/5 + 1/2 - 1
    assert_eq!(at("0", "0"), "1/10");
    // I({1,2},∅) = v(12,∅) - v(2,∅) - v(1,∅) + v(∅,∅) = 1 - 2/5 - 3/10
    assert_eq!(at("1", "1"), "3/10");
}

#[test]
fn schemes_differ_on_asymmetric_function() {
    let run = |scheme: &str| {
        let out = latint(&[
            "interact", "--model", &path("chains432.model.json"), "--values", &path("chains432.values.json"), "--scheme", scheme,
            "--target", "all-irreducible",
        ]);
        String::from_utf8(out.stdout).unwrap()
    };
    assert_ne!(run("shapley"), run("banzhaf"));
}

#[test]
fn mobius_method_downgrades_on_m3() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("v.json");
    fs::write(&values, r#"{"order":"lex","values":[0,1,2,3,5]}"#).unwrap();
    let out = latint(&["interact", "--model", &path("m3.model.json"), "--values", values.to_str().unwrap(), "--method", "mobius", "--format", "json", "--target", "all", "--target", "top"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["method"], "direct");
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 1);
    let top = doc["rows"].as_array().unwrap().iter().find(|r| r["target"][0] == "top").unwrap();
    assert!(top["skipped"].is_string());
}

#[test]
fn derivative_command() {
    let out = latint(&["derivative", "--values", &path("capacity2.values.json"), "--y", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["value"], "1");
    assert_eq!(doc["boolean"], true);
    assert_eq!(doc["via_mobius"], "1");
}

#[test]
fn verify_suites() {
    let out = latint(&["verify", "--model", &path("diamond_chain.model.json"), "--values", &path("diamond_chain.values.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let status: Vec<&str> = doc["suites"].as_array().unwrap().iter().map(|s| s["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["skipped", "skipped", "pass", "pass"]);

    let out = latint(&["verify", "--model", &path("chains432.model.json"), "--values", &path("chains432.values.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    let out = latint(&["verify", "--values", &path("ternary2.values.json"), "--suite", "efficiency", "--scheme", "banzhaf"]);
    assert_eq!(json(&out)["suites"][0]["status"], "skipped");
}

#[test]
fn max_elements_limit() {
    let out = Command::new(env!("CARGO_BIN_EXE_latint"))
        .args(["mobius", "--model", &path("chains432.model.json"), "--values", &path("chains432.values.json")])
        .env("LATINT_MAX_ELEMENTS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = latint(&["mobius", "--values", &path("ternary2.values.json"), "--max-elements", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bitset path"));
}
