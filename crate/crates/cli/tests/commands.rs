use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wadge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wadge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_doc(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn gallery(dir: &Path, name: &str, n: &str) -> PathBuf {
    let path = dir.join(format!("{name}{n}.json"));
    let o = wadge(&["gallery", "build", name, n, "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn reduce_top_to_bottom_is_none() {
    let dir = TempDir::new().unwrap();
    let l2 = write_doc(dir.path(), "L2.json", r#"{"elements":["bottom","top"],"covers":[["bottom","top"]]}"#);
    let o = wadge(&["reduce", l2.to_str().unwrap(), "{top}", "{bottom}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "NONE\n");

    let o = wadge(&["reduce", l2.to_str().unwrap(), "{top}", "{top}"]);
    assert_eq!(stdout(&o), "bottom -> bottom\ntop -> top\n");

    let o = wadge(&["reduce", l2.to_str().unwrap(), "{top}", "{bottom}", "--kind", "any"]);
    assert_eq!(stdout(&o), "bottom -> top\ntop -> bottom\n");
}

#[test]
fn degrees_of_two_chain() {
    let dir = TempDir::new().unwrap();
    let l2 = gallery(dir.path(), "chain", "2");
    let dot = dir.path().join("d.dot");
    let o = wadge(&["degrees", l2.to_str().unwrap(), "--all", "--dot", dot.to_str().unwrap()]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["class_count"], 4);
    assert_eq!(report["max_antichain"], 2);
    assert_eq!(report["finitely_very_good"], true);
    // {empty} and {X} at the bottom, the open and closed singletons above
    assert_eq!(report["hasse"].as_array().unwrap().len(), 4);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn constant_partitions_are_incomparable() {
    let dir = TempDir::new().unwrap();
    let l3 = gallery(dir.path(), "chain", "3");
    let o = wadge(&["partitions", l3.to_str().unwrap(), "-k", "3", "--constants"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["class_count"], 3);
    assert_eq!(report["max_antichain"], 3);
    assert!(report["hasse"].as_array().unwrap().is_empty());
}

#[test]
fn space_reports_and_errors() {
    let dir = TempDir::new().unwrap();
    let l3 = gallery(dir.path(), "chain", "3");
    let o = wadge(&["space", l3.to_str().unwrap()]);
    assert_eq!(stdout(&o), "elements: 3\nopens: 4\ndimension: 2\nscattered rank: 3\n");

    let empty = write_doc(dir.path(), "empty.json", r#"{"elements":[]}"#);
    let o = wadge(&["space", empty.to_str().unwrap()]);
    assert!(stdout(&o).contains("dimension: -1"));

    let o = wadge(&["space", l3.to_str().unwrap(), "--cap", "2"]);
    assert!(stdout(&o).contains("opens: capped"));

    let cyc = write_doc(dir.path(), "cyc.json", r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#);
    let o = wadge(&["space", cyc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cycle"));

    let bad = write_doc(dir.path(), "bad.json", "{\n  \"elements\": [1]\n}");
    let o = wadge(&["space", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn classify_reports_witnesses() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        dir.path(),
        "two.json",
        r#"{"elements":["x0","x1","y0","y1"],"covers":[["x0","x1"],["y0","y1"]],"sets":{"A":["x0","y1"]}}"#,
    );
    let o = wadge(&["classify", doc.to_str().unwrap(), "A", "--oracle"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["label"], "ProperDelta(2)");
    assert_eq!(r["sigma_rank"], 2);
    assert_eq!(r["pi_rank"], 2);
    assert_eq!(r["witness_chain_in"], serde_json::json!(["x0", "x1"]));
    assert_eq!(r["witness_chain_out"], serde_json::json!(["y0", "y1"]));
    assert_eq!(r["oracle_agrees"], true);
}

#[test]
fn caps_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let l7 = gallery(dir.path(), "chain", "7");
    assert_eq!(wadge(&["degrees", l7.to_str().unwrap(), "--all"]).status.code(), Some(2));
    assert_eq!(wadge(&["partitions", l7.to_str().unwrap(), "-k", "2", "--all"]).status.code(), Some(2));
    assert_eq!(wadge(&["verify", "duality", "--max", "6"]).status.code(), Some(2));
    let l9 = gallery(dir.path(), "chain", "9");
    assert_eq!(wadge(&["classify", l9.to_str().unwrap(), "{1}", "--oracle"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    for suite in ["finite-t0-very-good", "classify-oracle", "duality", "enumeration"] {
        let o = wadge(&["verify", suite, "--max", "4"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("PASS\n"));
    }
    let o = wadge(&["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn level_coherence_reports_the_n_poset() {
    let o = wadge(&["verify", "level-coherence", "--max", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains(r#"[("0", "2"), ("0", "3"), ("1", "3")]"#), "{text}");
}

#[test]
fn fan_document_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = gallery(dir.path(), "fan", "2");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(doc["elements"].as_array().unwrap().len(), 8);
    assert!(doc["sets"]["A"].is_array());
    let o = wadge(&["classify", f.to_str().unwrap(), "D0"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["label"], "ProperSigma(1)");
    let o = wadge(&["degrees", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(wadge(&["gallery", "build", "fan", "40"]).status.code(), Some(1));
    assert_eq!(wadge(&["gallery", "build", "nope", "1"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = gallery(dir.path(), "fan", "2");
    let run = || stdout(&wadge(&["degrees", f.to_str().unwrap(), "--all", "--cap", "8"]));
    assert_eq!(run(), run());
}
