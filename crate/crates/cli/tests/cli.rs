use std::fs;
use std::process::{Command, Output};

fn pframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pframe")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_reports_validity_and_exit_codes() {
    let ok = pframe(&["check", "D4-finite"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("regime Full"));

    let bad = pframe(&["check", "M3-finite"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("distributivity fails"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{not json").unwrap();
    let parse = pframe(&["check", path.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("parse error"));

    assert_eq!(pframe(&["check", "NoSuchThing"]).status.code(), Some(2));
}

#[test]
fn build_summaries() {
    assert!(stdout(&pframe(&["build", "D4-singletons", "free-frame"])).contains("5 ideals, 4 principal"));
    assert!(stdout(&pframe(&["build", "D4-finite", "congruences"])).contains("4 congruences; ∇ surjective"));
    assert!(stdout(&pframe(&["build", "C3-finite", "congruences"])).contains("4 congruences; ∇ image size 3"));
}

#[test]
fn build_writes_artifacts_and_caches_them() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let dot = dir.path().join("ff.dot");
    let json = dir.path().join("ff.json");
    let first = pframe(&[
        "--catalog-dir", d, "build", "D4-singletons", "free-frame",
        "--dot", dot.to_str().unwrap(), "--json", json.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["size"], 5);
    let cached: Vec<_> = fs::read_dir(dir.path().join("cache")).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let second = pframe(&["--catalog-dir", d, "build", "D4-singletons", "free-frame"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn map_analysis_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("collapse.json");
    fs::write(
        &path,
        r#"{"domain":"D4-singletons","codomain":"C2-singletons","map":{"0":"0","a":"0","b":"0","1":"1"}}"#,
    )
    .unwrap();
    let out = pframe(&["map", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("no right adjoint, witness m=0"));

    let madden = pframe(&["--format", "json", "map", "--madden", "C3-singletons"]);
    let v: serde_json::Value = serde_json::from_slice(&madden.stdout).unwrap();
    assert_eq!(v["analysis"]["dense"], true);
    assert_eq!(v["analysis"]["closed"], false);
}

#[test]
fn verify_examples() {
    let base = pframe(&["verify", "D4-singletons", "--suite", "base"]);
    assert_eq!(base.status.code(), Some(0));
    assert!(stdout(&base).contains("∇ formula/generated divergence at a"));

    let trivial = pframe(&["--format", "json", "verify", "C2-finite", "--suite", "all"]);
    let verdicts: Vec<serde_json::Value> = serde_json::from_slice(&trivial.stdout).unwrap();
    assert!(!verdicts.is_empty());
    assert!(verdicts.iter().all(|v| v["holds"] == true));

    let full = pframe(&["verify", "--catalog", "--suite", "full"]);
    assert_eq!(full.status.code(), Some(0));
}

#[test]
fn search_examples() {
    assert!(stdout(&pframe(&["search", "(b) ∧ ¬(a)"])).contains("at size 4: D4-singletons"));
    assert!(stdout(&pframe(&["search", "(c) ∧ ¬(b)"])).contains("M3-singletons"));
    assert!(stdout(&pframe(&["search", "(d) ∧ ¬(c)", "--max-size", "5"])).contains("none up to bound 5"));
    assert_eq!(pframe(&["search", "(a"]).status.code(), Some(2));
    assert_eq!(pframe(&["search", "a", "--max-size", "9"]).status.code(), Some(2));
}

#[test]
fn exported_structures_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(pframe(&["--catalog-dir", d, "export", "catalog"]).status.success());
    assert!(dir.path().join("TwoDiamonds-finite.json").is_file());
    let out = dir.path().join("n5.json");
    assert!(pframe(&["export", "structure", "N5-singletons", "--out", out.to_str().unwrap()]).status.success());
    assert_eq!(pframe(&["check", out.to_str().unwrap()]).status.code(), Some(0));
    let from_dir = pframe(&["--catalog-dir", d, "--format", "json", "verify", "--catalog", "--suite", "full"]);
    let builtin = pframe(&["--format", "json", "verify", "--catalog", "--suite", "full"]);
    assert_eq!(from_dir.stdout, builtin.stdout);
}
