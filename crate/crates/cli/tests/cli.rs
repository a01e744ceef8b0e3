use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = r#"{"vertices":["u","v","w"],"arrows":[
 {"id":"a","tail":"v","head":"u"},{"id":"x","tail":"u","head":"v"},
 {"id":"y","tail":"v","head":"w"},{"id":"b","tail":"w","head":"v"},
 {"id":"c","tail":"u","head":"w"},{"id":"z","tail":"w","head":"u"}]}"#;
const LOOP: &str = r#"{"vertices":["v"],"arrows":[{"id":"x","tail":"v","head":"v"}]}"#;

fn quivar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quivar")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn worked_example_words() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "ex.json", EXAMPLE);
    let h1 = file(&dir, "h1.json", r#"{"word":["c","z","c","z","x","y","b","a"]}"#);
    let h2 = file(&dir, "h2.json", r#"{"word":["c","z","c","b","y","z","x","a"]}"#);
    let out = quivar(&["equiv-zero", "--quiver", s(&q), "--word", s(&h1), "--char", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equiv_zero"], true);
    let out = quivar(&["equiv-zero", "--quiver", s(&q), "--word", s(&h2), "--char", "2"]);
    assert_eq!(json(&out)["equiv_zero"], false);
}

#[test]
fn bound_for_equal_parameters() {
    let out = quivar(&["m-bound", "--n", "2", "--d", "2", "--m", "2", "--char", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "M": 4 }));
    let out = quivar(&["class-nonempty", "--n", "3", "--d", "2", "--m", "1"]);
    assert_eq!(json(&out)["class_nonempty"], false);
}

#[test]
fn injected_fault_exits_one() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "loop1.json", LOOP);
    let out = quivar(&["cross-validate", "--quiver", s(&q), "--cutoff", "4", "--char", "2", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["mismatches"].as_array().unwrap().len(), 4);
    let out = quivar(&["cross-validate", "--quiver", s(&q), "--cutoff", "4", "--char", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(quivar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(quivar(&["m-bound", "--n", "2", "--d", "2", "--m", "2", "--char", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(quivar(&["m-bound", "--n", "2", "--d", "2", "--m", "2", "--char", "5"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "bad.json", r#"{"vertices":["u"],"arrows":[{"id":"a","tail":"u","head":"v"}]}"#);
    let w = file(&dir, "w.json", r#"{"word":["a"]}"#);
    let out = quivar(&["equiv-zero", "--quiver", s(&q), "--word", s(&w), "--char", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let missing = dir.path().join("nope.json");
    assert_eq!(quivar(&["equiv-zero", "--quiver", s(&missing), "--word", s(&w), "--char", "2"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_with_sorted_keys() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "ex.json", EXAMPLE);
    let t = file(&dir, "d.json", r#"{"a":1,"x":1,"y":1,"b":1,"c":2,"z":2}"#);
    let args = ["omega", "--quiver", s(&q), "--delta", s(&t), "--char", "2"];
    let (a, b) = (quivar(&args), quivar(&args));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["omega0"], true);
    assert_eq!(v["omega2"], false);
    assert_eq!(v["omega_equiv"], "yes");
}

#[test]
fn chain_and_tree_for_a_double_vector() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "c2.json", r#"{"vertices":["u","v"],"arrows":[{"id":"a","tail":"u","head":"v"},{"id":"b","tail":"v","head":"u"},{"id":"x","tail":"u","head":"u"},{"id":"y","tail":"v","head":"v"}]}"#);
    let t = file(&dir, "d.json", r#"{"a":2,"b":2,"x":1,"y":1}"#);
    let out = quivar(&["chain", "--quiver", s(&q), "--delta", s(&t)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["checked"], true);
    let out = quivar(&["tree", "--quiver", s(&q), "--delta", s(&t)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checked"], true);
}

#[test]
fn extremal_witnesses() {
    let out = quivar(&["extremal", "--family", "d", "--n", "7", "--d", "9", "--m", "3", "--char", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verification"]["passed"], true);
    assert!(v["witness"]["quiver"]["arrows"].as_array().unwrap().len() == 9);
    // outside the range of family c
    let out = quivar(&["extremal", "--family", "c", "--n", "7", "--d", "9", "--m", "3", "--char", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = quivar(&["extremal", "--family", "e", "--n", "4", "--d", "9", "--m", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verification"]["degree"], 12);
}

#[test]
fn survey_csv() {
    let out = quivar(&["survey", "--n", "1-2", "--d", "1-3", "--m", "1-2", "--char", "not2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,d,m,char,M,D,gap,holds"));
    assert!(lines.all(|l| l.ends_with(",true")));
}

#[test]
fn oracle_on_a_square() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "loop1.json", LOOP);
    let w = file(&dir, "xx.json", r#"{"word":["x","x"]}"#);
    let out = quivar(&["oracle", "decomp", "--quiver", s(&q), "--word", s(&w), "--field", "gf2"]);
    assert_eq!(json(&out)["decomposable"], true);
    let out = quivar(&["oracle", "decomp", "--quiver", s(&q), "--word", s(&w), "--field", "q"]);
    assert_eq!(json(&out)["decomposable"], false);
    let a = file(&dir, "as.json", r#"{"x":"J"}"#);
    let x = file(&dir, "x.json", r#"{"word":["x"]}"#);
    let out = quivar(&["oracle", "subst", "--quiver", s(&q), "--word", s(&x), "--assign", s(&a)]);
    assert_eq!(json(&out)["nonzero"], false);
}

#[test]
fn max_degree_defaults_to_the_bound() {
    let dir = TempDir::new().unwrap();
    let q = file(&dir, "ex.json", EXAMPLE);
    let out = quivar(&["max-degree", "--quiver", s(&q), "--char", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cutoff"], v["upper_bound"]);
    assert_eq!(v["within_bound"], true);
}

#[test]
fn accept_single_criterion() {
    let out = quivar(&["accept", "--only", "1", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS [ 1]"));
}
