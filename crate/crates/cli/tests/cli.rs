use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vcind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcind")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_analyze_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.vctm");
    let g = vcind(&["generate", "--family", "threshold", "--N", "16", "-o", path(&file)]);
    assert!(g.status.success());
    let a = vcind(&["analyze", path(&file), "--window", "0,2"]);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    assert_eq!(v["distinct_count"], 17);
    assert_eq!(v["width"], 16);
    assert_eq!(v["max_alternation"], 1);
    assert_eq!(v["family_rank"][1]["window"], 2);
    assert_eq!(v["family_rank"][1]["rank"], 1);
    assert_eq!(v["config"]["command"], "analyze");
    assert_eq!(v["joint_cuts"].as_array().unwrap().len(), 15);
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.vctm");
    vcind(&["generate", "--family", "threshold", "--N", "16", "-o", path(&file)]);
    let ok = vcind(&["certify", path(&file), "--rank", "1", "--window", "0"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["status"], "certified");
    let cert = &v["certificate"];
    let raw = String::from_utf8(ok.stdout.clone()).unwrap();
    let body = &raw[raw.find("\"certificate\"").unwrap()..];
    let at: Vec<usize> = ["\"n\"", "\"l\"", "\"R\"", "\"width\"", "\"rows\""].iter().map(|k| body.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "certificate key order {at:?}");
    assert_eq!(cert["R"], 8);
    assert_eq!(cert["rows"].as_array().unwrap().len(), 17);

    let full = dir.path().join("f.vctm");
    vcind(&["generate", "--family", "full", "--N", "8", "-o", path(&full)]);
    let bad = vcind(&["certify", path(&full), "--rank", "1", "--window", "0"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["status"], "failed");
    assert!(v["failure"]["rank"].as_u64().unwrap() >= 2);
}

#[test]
fn fit_expectations() {
    let full = vcind(&["fit", "--family", "full", "--expect", "3"]);
    assert_eq!(full.status.code(), Some(1));
    assert_eq!(json(&full)["estimate"]["verdict"]["kind"], "superpolynomial");

    let alt = vcind(&["fit", "--family", "alt_family", "--n", "2", "--expect", "2"]);
    assert_eq!(alt.status.code(), Some(0));
    let v = json(&alt);
    assert_eq!(v["estimate"]["verdict"], serde_json::json!({"kind": "integer", "value": 2}));
    assert_eq!(v["config"]["family"], "alt_family:2");
    assert_eq!(v["expectation_met"], true);
}

#[test]
fn fit_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let out = vcind(&["fit", "--family", "spikes:1", "--grid", "16,32,64,128,256", "--csv", path(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("N,count,logN,logcount\n16,17,"));
    assert_eq!(text.lines().count(), 6);

    let stdout = vcind(&["fit", "--family", "spikes:1", "--grid", "16,32,64,128,256", "--format", "csv"]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
}

#[test]
fn witness_family() {
    let out = vcind(&["witness", "--n", "2", "--N", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("vctm 1\n7 35\n"));

    let alt = vcind(&["witness", "--n", "1", "--N", "5", "--blocks", "010", "--separators", "10"]);
    assert!(alt.status.success());
    let wrong = vcind(&["witness", "--n", "1", "--N", "5", "--blocks", "010", "--separators", "11"]);
    assert_eq!(wrong.status.code(), Some(2));
    let narrow = vcind(&["witness", "--n", "3", "--N", "2"]);
    assert_eq!(narrow.status.code(), Some(2));
}

#[test]
fn coincide_agrees() {
    let out = vcind(&["coincide", "--family", "spikes", "--n", "2", "--window", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["agree"], true);
    assert_eq!(v["report"]["stabilized_rank"], 2);
    assert_eq!(v["report"]["min_certifiable_n"], 2);
    assert_eq!(v["config"]["command"], "coincide");
}

#[test]
fn product_family_flags() {
    let a = vcind(&["generate", "--family", "product", "--left", "spikes:1", "--right", "spikes:2", "--op", "and", "--N", "8"]);
    let b = vcind(&["generate", "--family", "product(spikes:1,spikes:2,and)", "--N", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let missing = vcind(&["generate", "--family", "product", "--left", "spikes:1", "--N", "8"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn strict_parsing_and_dedup() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dup.vctm");
    std::fs::write(&file, "vctm 1\n3 3\n001\n001\n111\n").unwrap();
    let strict = vcind(&["analyze", path(&file)]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("duplicate row"));
    let lenient = vcind(&["analyze", path(&file), "--dedup"]);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(json(&lenient)["distinct_count"], 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vcind(&["fit"]).status.code(), Some(2));
    assert_eq!(vcind(&["generate", "--family", "banana", "--N", "4"]).status.code(), Some(2));
    assert_eq!(vcind(&["generate", "--family", "threshold", "--n", "2", "--N", "4"]).status.code(), Some(2));
    assert_eq!(vcind(&["fit", "--family", "threshold", "--grid", "16,32"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let runs = [
        vec!["generate", "--family", "spikes:2", "--N", "12", "--sample", "20", "--seed", "7"],
        vec!["fit", "--family", "alt_family:3"],
        vec!["coincide", "--family", "threshold"],
    ];
    for args in runs {
        let a = vcind(&args);
        let b = vcind(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let sampled = vcind(&["generate", "--family", "spikes:2", "--N", "12", "--sample", "20", "--seed", "7"]);
    assert!(String::from_utf8(sampled.stdout).unwrap().starts_with("vctm 1\n12 20\n"));
}

#[test]
fn thread_cap_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_vcind"))
        .args(["fit", "--family", "threshold"])
        .env("VCIND_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_vcind"))
        .args(["fit", "--family", "threshold"])
        .env("VCIND_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
