use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mclosure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mclosure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn isclosed_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.json", r#"{"degree": 5, "generators": ["(0 1 2 3 4)"]}"#);
    let agl = write(dir.path(), "agl.json", r#"{"degree": 5, "generators": ["(0 1 2 3 4)", [0, 2, 4, 1, 3]]}"#);
    assert_eq!(mclosure(&["isclosed", "--group", &c5, "--arity", "2"]).status.code(), Some(0));
    assert_eq!(mclosure(&["isclosed", "--group", &agl, "--arity", "2"]).status.code(), Some(1));
    assert_eq!(mclosure(&["isclosed", "--group", &agl, "--arity", "3"]).status.code(), Some(0));
    let missing = dir.path().join("nope.json");
    assert_eq!(mclosure(&["isclosed", "--group", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn closure_writes_group_json() {
    let dir = tempfile::tempdir().unwrap();
    let agl = write(dir.path(), "agl.json", r#"{"degree": 5, "generators": ["(0 1 2 3 4)", "(1 2 4 3)"]}"#);
    let out = dir.path().join("closed.json");
    let res = mclosure(&["closure", "--group", &agl, "--arity", "2", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let json: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["order"], "120");
    assert_eq!(json["degree"], 5);
}

#[test]
fn product_power_order() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = write(dir.path(), "s3.json", r#"{"degree": 3, "generators": ["(0 1 2)", "(0 1)"]}"#);
    let s2 = write(dir.path(), "s2.json", r#"{"degree": 2, "generators": ["(0 1)"]}"#);
    let res = mclosure(&["product", "--mode", "power", "--k", &s3, "--l", &s2]);
    assert!(res.status.success());
    let json: Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(json["degree"], 9);
    assert_eq!(json["order"], "72");
    let res = mclosure(&["product", "--mode", "power", "--k", &s2, "--l", &s2]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn orbits_binary_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let s4 = write(dir.path(), "s4.json", r#"{"degree": 4, "generators": ["(0 1 2 3)", "(0 1)"]}"#);
    let out = dir.path().join("colors.bin");
    let res = mclosure(&["orbits", "--group", &s4, "--arity", "3", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    assert!(stdout(&res).starts_with("5 orbits"));
    let summary: Value = serde_json::from_str(&fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["num_colors"], 5);
    assert!(fs::metadata(&out).unwrap().len() >= 64);
}

#[test]
fn construct_then_pipeline_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let cdir = dir.path().join("cands");
    let res = mclosure(&["construct", "--p", "3", "--d", "2", "--a", "1", "--e", "2", "--out", cdir.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let candidates = cdir.join("candidates.json");
    let listed: Value = serde_json::from_str(&fs::read_to_string(&candidates).unwrap()).unwrap();
    assert_eq!(listed.as_array().unwrap().len(), 2);

    let constructed = write(dir.path(), "a.json", r#"{"parameters": {"p": 3, "d": 2, "a": 1, "e": 2}}"#);
    let from_file = write(
        dir.path(),
        "b.json",
        &format!(
            r#"{{"parameters": {{"p": 3, "d": 2, "a": 1, "e": 2}}, "candidates": {{"file": {:?}}}}}"#,
            candidates.to_str().unwrap()
        ),
    );
    let mut reports = Vec::new();
    for (cfg, name) in [(&constructed, "ra.json"), (&from_file, "rb.json")] {
        let report = dir.path().join(name);
        let res = mclosure(&["pipeline", "--config", cfg, "--report", report.to_str().unwrap(), "--seed", "5"]);
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
        let json: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
        reports.push(json);
    }
    for r in &reports {
        assert_eq!(r["summary"]["unresolved"], 0);
        assert_eq!(r["summary"]["B"], 1);
        assert_eq!(r["summary"]["transitive"], 1);
    }
    let classes = |r: &Value| -> Vec<(String, String)> {
        r["candidates"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["name"].as_str().unwrap().to_string(), c["classification"].as_str().unwrap().to_string()))
            .collect()
    };
    assert_eq!(classes(&reports[0]), classes(&reports[1]));
}

#[test]
fn pipeline_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"parameters": {"p": 5, "d": 2, "a": 1, "e": 4}}"#);
    let report = dir.path().join("r.json");
    let res = mclosure(&["pipeline", "--config", &cfg, "--report", report.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!report.exists());
}

#[test]
fn verdict_and_huppert() {
    let dir = tempfile::tempdir().unwrap();
    let c2wc3 = write(
        dir.path(),
        "w.json",
        r#"{"degree": 6, "generators": ["(0 1)", "(0 2 4)(1 3 5)"]}"#,
    );
    let res = mclosure(&["verdict", "--group", &c2wc3]);
    assert!(res.status.success());
    let v: Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(v["order"], "24");
    assert_eq!(v["closure_solvable"], true);

    assert_eq!(stdout(&mclosure(&["huppert", "--q", "81"])).trim(), "true");
    assert_eq!(stdout(&mclosure(&["huppert", "--q", "27"])).trim(), "false");
    assert_eq!(mclosure(&["huppert", "--q", "12"]).status.code(), Some(2));
}

#[test]
fn spo_search_small_target() {
    let res = mclosure(&[
        "spo-search", "--group", "Sp(4,2)", "--order", "72", "--core-prime", "3", "--core-order", "9",
        "--core-abelian", "--seed", "1", "--tries", "20000",
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let v: Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(v["words"].as_array().unwrap().len(), 2);
    assert_eq!(v["group"], "Sp(4,2)");
}
