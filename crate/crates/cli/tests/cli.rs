use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const WORKED: &str = r#"{"n":1,"m":2,"psi":"x1 | y1 | ~y2","rho":"~(z1 & (z2 | x1))"}"#;

fn zhcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhcount")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_reports_the_counting_state() {
    let o = zhcount(&["count", "(x1 & x2) & (x1 & ~x3)", "--vars", "x1,x2,x3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("|1⟩ + 7|0⟩"), "{out}");
    assert!(out.contains("count 1 (brute force 1)"), "{out}");

    let o = zhcount(&["count", "x1 | x2", "--json"]);
    let v = json(&o);
    assert_eq!(v["count"], 3);
    assert_eq!(v["brute_force"], 3);
    assert_eq!(v["state"], "3|1⟩ + |0⟩");
}

#[test]
fn worked_state_equality_pipeline() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", WORKED);
    let out = dir.path().join("se");
    assert_eq!(zhcount(&["reduce", "state-eq", &inst, "--out-dir", p(&out)]).status.code(), Some(0));
    let (d1, d2) = (out.join("d1.json"), out.join("d2.json"));
    assert_eq!(stdout(&zhcount(&["eval", p(&d1)])).trim(), "[3 4]");
    assert_eq!(stdout(&zhcount(&["eval", p(&d2)])).trim(), "[3 2]");

    let o = zhcount(&["solve", "state-eq", p(&d1), p(&d2)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o), serde_json::json!({"answer": true, "witness": "0", "entry": null}));

    let pair = json(&zhcount(&["reduce", "state-eq", &inst]));
    assert!(pair["d1"]["nodes"].is_array() && pair["d2"]["edges"].is_array());
}

#[test]
fn contains_entry_pipeline() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", WORKED);
    let d = zhcount(&["reduce", "contains-entry", &inst, "--k", "0"]);
    let path = write(&dir, "d.json", &stdout(&d));
    assert_eq!(stdout(&zhcount(&["eval", &path])).trim(), "[ 0 -2]");
    let o = zhcount(&["solve", "contains-entry", &path, "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["witness"], "0");
    assert_eq!(v["entry"], serde_json::json!({"a": "0", "b": "0", "e": 0}));

    let o = zhcount(&["solve", "contains-entry", &path, "--k", "-2"]);
    assert_eq!(json(&o)["witness"], "1");
    let o = zhcount(&["solve", "contains-entry", &path, "--k", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["answer"], false);

    let d = zhcount(&["reduce", "contains-entry", &inst, "--k", "3/2^2"]);
    let path = write(&dir, "q.json", &stdout(&d));
    assert_eq!(json(&zhcount(&["solve", "contains-entry", &path, "--k", "3/4"]))["witness"], "0");
}

#[test]
fn eval_of_the_empty_diagram_is_one() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "empty.json", r#"{"nodes":[],"edges":[],"inputs":[],"outputs":[]}"#);
    let o = zhcount(&["eval", &e]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let m = json(&zhcount(&["eval", &e, "--json"]));
    assert_eq!(m["n_out"], 0);
    assert_eq!(m["entries"][0]["val"]["a"], "1");
}

#[test]
fn circuit_extraction_and_encoding() {
    let dir = TempDir::new().unwrap();
    let o = zhcount(&["reduce", "circuit-extraction", "(x1 & x2) & (x1 & ~x3)"]);
    let c = write(&dir, "c.json", &stdout(&o));
    assert_eq!(stdout(&zhcount(&["eval", &c])), "[ 7  1]\n[ 1 -7]\n");
    for order in ["greedy", "sequential"] {
        assert_eq!(stdout(&zhcount(&["--order", order, "eval", &c])), "[ 7  1]\n[ 1 -7]\n");
    }

    let o = zhcount(&["encode", "a & ~b", "--vars", "a,b"]);
    let e = write(&dir, "e.json", &stdout(&o));
    assert_eq!(stdout(&zhcount(&["eval", &e])), "[1 1 0 1]\n[0 0 1 0]\n");
    let o = zhcount(&["encode", "a & ~b", "--counting"]);
    let s = write(&dir, "s.json", &stdout(&o));
    assert_eq!(stdout(&zhcount(&["eval", &s])), "[3]\n[1]\n");
}

#[test]
fn compare_and_is_zero() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &stdout(&zhcount(&["encode", "x & y"])));
    let b = write(&dir, "b.json", &stdout(&zhcount(&["encode", "~(~x | ~y)"])));
    let c = write(&dir, "c.json", &stdout(&zhcount(&["encode", "x | y"])));
    assert_eq!(zhcount(&["solve", "compare", &a, &b]).status.code(), Some(0));
    assert_eq!(zhcount(&["solve", "compare", &a, &c]).status.code(), Some(1));
    let z = write(&dir, "z.json", &stdout(&zhcount(&["encode", "x & ~x", "--counting"])));
    assert_eq!(zhcount(&["solve", "is-zero", &z]).status.code(), Some(1));
    assert_eq!(zhcount(&["solve", "is-zero", &a]).status.code(), Some(1));
    let zero = write(&dir, "zero.json", r#"{"nodes":[{"id":0,"kind":"XNot"}],"edges":[],"inputs":[],"outputs":[]}"#);
    assert_eq!(zhcount(&["eval", &zero]).status.code(), Some(0), "{}", stdout(&zhcount(&["eval", &zero])));
    assert_eq!(zhcount(&["solve", "is-zero", &zero]).status.code(), Some(0));
}

#[test]
fn verify_and_corpus_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", WORKED);
    let o = zhcount(&["verify", &inst]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS: 1 of 1"));

    let o = zhcount(&["verify", "--random", "12", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("DISAGREE"));

    let a = stdout(&zhcount(&["corpus", "--seed", "9", "--count", "4"]));
    let b = stdout(&zhcount(&["corpus", "--seed", "9", "--count", "4"]));
    assert_eq!(a, b);
    let items: Vec<Value> = serde_json::from_str(&a).unwrap();
    assert_eq!(items.len(), 4);
    let first = write(&dir, "first.json", &items[0].to_string());
    let sat = zhcount(&["solve", "sat-compare", &first]);
    assert!(matches!(sat.status.code(), Some(0 | 1)));
    assert!(json(&sat)["answer"].is_boolean());
}

#[test]
fn word_codec() {
    let o = zhcount(&["word", "encode", "x1 & (x2 | ~x3)"]);
    assert_eq!(stdout(&o).trim(), "10 00 00  00 10 01  11 00 00");
    let o = zhcount(&["word", "decode", "10 00 00 00 10 01 11 00 00"]);
    assert!(stdout(&o).starts_with("x1 & (x2 | ~x3) & (x1 | ~x1)\np cnf 3 3\n"));
    assert_eq!(zhcount(&["word", "decode", "101"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "f.cnf", &stdout(&zhcount(&["cnf", "x1 & (x2 | ~x3)"])));
    assert_eq!(stdout(&zhcount(&["word", "encode", "--dimacs", &cnf])).trim(), "10 00 00  00 10 01  11 00 00");
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"nodes":[{"id":0,"kind":"Star"}],"edges":[[{"node":0,"port":0},{"boundary":"out","pos":0}]],"inputs":[],"outputs":[{"boundary":"out","pos":0}]}"#);
    let o = zhcount(&["eval", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("star"));
    assert_eq!(zhcount(&["eval", "/definitely/missing.json"]).status.code(), Some(2));
    assert_eq!(zhcount(&["count", "x1 &"]).status.code(), Some(2));
    assert_eq!(zhcount(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zhcount(&["count", "x1 | x2", "--max-vars", "1"]).status.code(), Some(2));
}
