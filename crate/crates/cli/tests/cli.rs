use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn gammoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammoid")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// U_{2,4}: targets 1 and 2, elements 3 and 4 joined to both.
fn u24() -> Value {
    json!({
        "digraph": {
            "vertices": ["1", "2", "3", "4"],
            "arcs": [["3", "1"], ["3", "2"], ["4", "1"], ["4", "2"]]
        },
        "targets": ["1", "2"],
        "ground": ["1", "2", "3", "4"]
    })
}

fn u12() -> Value {
    json!({"ground": ["a", "b"], "bases": [["a"], ["b"]]})
}

#[test]
fn eval_uniform() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let out = gammoid(&["eval", s(&rep)]);
    assert!(out.status.success());
    let m = stdout_json(&out);
    assert_eq!(m["rank"], 2);
    assert_eq!(m["bases"].as_array().unwrap().len(), 6);
}

#[test]
fn eval_arc_free_is_free() {
    let dir = TempDir::new().unwrap();
    let rep = write(
        &dir,
        "free.json",
        &json!({"digraph": {"vertices": ["x", "y"], "arcs": []}, "targets": ["x", "y"], "ground": ["x", "y"]}),
    );
    let m = stdout_json(&gammoid(&["eval", s(&rep)]));
    assert_eq!(m["bases"], json!([["x", "y"]]));
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"digraph\": [").unwrap();
    let out = gammoid(&["eval", s(&p)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(gammoid(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gammoid(&["conjecture-uniform", "1", "2", "--limits.max-arcs", "0"]).status.code(), Some(2));
}

#[test]
fn dualize_twice_is_identity() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let out = gammoid(&["transform", "dualize", s(&rep), "--verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dual = stdout_json(&out);
    let dual_path = write(&dir, "dual.json", &dual);
    let back = stdout_json(&gammoid(&["transform", "dualize", s(&dual_path)]));
    let original: gammoid_core::Representation = serde_json::from_value(u24()).unwrap();
    let back: gammoid_core::Representation = serde_json::from_value(back).unwrap();
    assert_eq!(back, original);
}

#[test]
fn dualize_needs_standard_input() {
    let dir = TempDir::new().unwrap();
    let mut v = u24();
    v["digraph"]["arcs"].as_array_mut().unwrap().push(json!(["1", "3"]));
    let rep = write(&dir, "bad.json", &v);
    let out = gammoid(&["transform", "dualize", s(&rep)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sink"));
}

#[test]
fn restrict_to_everything_is_identity() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let out = gammoid(&["transform", "restrict", s(&rep), "--x", "1,2,3,4", "--verify"]);
    assert!(out.status.success());
    let got: gammoid_core::Representation = serde_json::from_value(stdout_json(&out)).unwrap();
    let original: gammoid_core::Representation = serde_json::from_value(u24()).unwrap();
    assert_eq!(gammoid_core::gamma(&got).unwrap(), gammoid_core::gamma(&original).unwrap());
}

#[test]
fn contract_u24_to_three_elements() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let out = gammoid(&["transform", "contract", s(&rep), "--x", "2,3,4", "--verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let contracted = write(&dir, "c.json", &stdout_json(&out));
    let m = stdout_json(&gammoid(&["eval", s(&contracted)]));
    assert_eq!(m["rank"], 1);
    assert_eq!(m["bases"].as_array().unwrap().len(), 3);
}

#[test]
fn standardize_and_rebase_keep_matroid() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    for args in [vec!["standardize", "--base", "3,4"], vec!["rebase", "--base", "1,4"], vec!["standardize"]] {
        let mut all = vec!["transform", args[0], s(&rep), "--verify"];
        all.extend(&args[1..]);
        let out = gammoid(&all);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = gammoid(&["transform", "rebase", s(&rep), "--base", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let target = dir.path().join("out.json");
    let out = gammoid(&["eval", s(&rep), "--output", s(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(m["rank"], 2);
}

#[test]
fn arc_complexity_of_u12() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "u12.json", &u12());
    let out = gammoid(&["arc-complexity", s(&m), "--workers", "2"]);
    assert!(out.status.success());
    let c = stdout_json(&out);
    assert_eq!(c["value"], 1);
    assert_eq!(c["exhaustive"], true);
    let w: gammoid_core::Representation = serde_json::from_value(c["witness"].clone()).unwrap();
    assert_eq!(w.arc_count(), 1);
}

#[test]
fn arc_complexity_accepts_representations() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let c = stdout_json(&gammoid(&["arc-complexity", s(&rep)]));
    assert_eq!(c["value"], 4);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let out = gammoid(&["arc-complexity", s(&rep), "--limits.max-arcs", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fwidth_of_u12() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "u12.json", &u12());
    let w = stdout_json(&gammoid(&["fwidth", s(&m), "--f", "fhat"]));
    assert_eq!(w["value"], "1/2");
    assert_eq!(w["argmax"], json!([["a", "b"], ["a", "b"]]));
    let w = stdout_json(&gammoid(&["fwidth", s(&m), "--f", "linear:2"]));
    assert_eq!(w["value"], "1/4");
}

#[test]
fn fwidth_table_from_file_and_rejects_constant() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "u12.json", &u12());
    let table = write(&dir, "f.json", &json!([1, 1, 2, 3, 4, 5]));
    let w = stdout_json(&gammoid(&["fwidth", s(&m), "--f", &format!("table:{}", s(&table))]));
    assert_eq!(w["value"], "1/2");
    let out = gammoid(&["fwidth", s(&m), "--f", "table:1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn in_class_verdicts() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "u12.json", &u12());
    let out = gammoid(&["in-class", s(&m), "--q", "1/4"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["member"], false);
    assert_eq!(stdout_json(&gammoid(&["in-class", s(&m), "--q", "1/2"]))["member"], true);
    assert_eq!(gammoid(&["in-class", s(&m), "--q", "1/0"]).status.code(), Some(1));
}

#[test]
fn conjecture_small_cases() {
    let out = gammoid(&["conjecture-uniform", "2", "4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["certificate"]["value"], 4);
}

#[test]
fn check_suites() {
    let out = gammoid(&["check", "closure", "--size", "5", "--samples", "20", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    assert_eq!(reports[0]["name"], "closure");
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass"));
    let out = gammoid(&["check", "all", "--size", "3", "--samples", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 6);
    assert_eq!(gammoid(&["check", "nope"]).status.code(), Some(1));
}

#[test]
fn emitted_json_reparses() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "u24.json", &u24());
    let m = stdout_json(&gammoid(&["eval", s(&rep)]));
    let parsed: gammoid_core::Matroid = serde_json::from_value(m.clone()).unwrap();
    assert_eq!(parsed.rank(), 2);
    let std = stdout_json(&gammoid(&["transform", "standardize", s(&rep)]));
    let parsed: gammoid_core::Representation = serde_json::from_value(std.clone()).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), std);
}
