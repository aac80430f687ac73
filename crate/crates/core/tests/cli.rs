use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revzimin")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn decide_exit_codes() {
    let out = run(&["decide", "--no-evidence", "x y x~"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "unavoidable");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["certificate"]["kind"], "zimin_division");

    let out = run(&["decide", "--no-evidence", "x x~"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "avoidable");

    let out = run(&["decide", "y~ c a y a b"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["status"], "unknown");
    assert!(v["evidence"]["word"].is_string());

    let out = run(&["decide", "x .. y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    assert_eq!(run(&["decide"]).status.code(), Some(2));
}

#[test]
fn divides_and_occurs() {
    let v = json(&run(&["divides", "x y x . y~", "x y z x y z . z~ y~ z~"]));
    assert_eq!(v["status"], "found");
    assert_eq!(v["morphism"]["x"], "x");
    assert_eq!(v["morphism"]["y"], "y z");

    let v = json(&run(&["occurs", "x x~", "abba"]));
    assert_eq!(v["morphism"]["x"], "b");
    let v = json(&run(&["occurs", "--common-image", "x . x~", "abc"]));
    assert_eq!(v["status"], "found");
    let v = json(&run(&["occurs", "x x", "abc"]));
    assert_eq!(v["status"], "absent");
    assert!(v.get("morphism").is_none());
}

#[test]
fn small_commands() {
    let v = json(&run(&["flatten", "x y~ . z~"]));
    assert_eq!(v["flattened"], "x y . z");

    let v = json(&run(&["zimin", "2", "1"]));
    assert_eq!(v["template"], "X1 X2 y1 X1 X2");
    assert_eq!(v["fragments"], 16);
    assert_eq!(v["length"], 5);
    let v = json(&run(&["zimin", "1", "1", "--list"]));
    assert_eq!(v["fragment_list"].as_array().unwrap().len(), 4);

    let v = json(&run(&["reduce", "x y x"]));
    assert_eq!(v["reducible"], true);
    assert_eq!(json(&run(&["reduce", "x x"]))["reducible"], false);

    let v = json(&run(&["powerfree", "3", "2", "60"]));
    assert_eq!(v["status"], "found");
    assert_eq!(v["word"].as_str().unwrap().len(), 60);

    let v = json(&run(&["--alphabet-size", "3", "--max-word-len", "30", "avoid", "x x"]));
    assert_eq!(v["mode"], "avoider_found");

    let v = json(&run(&["probe", "x y x~"]));
    assert_eq!(v["residual"], "y");
    assert_eq!(v["consistent"], true);

    let out = run(&["--pretty", "flatten", "x"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\n  \""));
}

#[test]
fn corpus_mismatch_exit_code() {
    let dir = std::env::temp_dir().join(format!("revzimin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# comment").unwrap();
    writeln!(f, r#"{{"formula":"x y x","expected_status":"unavoidable"}}"#).unwrap();
    writeln!(f, r#"{{"formula":"x x","expected_status":"unavoidable","tags":["wrong"]}}"#).unwrap();
    drop(f);
    let out = run(&["corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["summary"]["total"], 2);
    assert_eq!(v["summary"]["mismatches"], serde_json::json!([3]));

    std::fs::write(&path, "{\"formula\": \"x ..\"}\n").unwrap();
    let out = run(&["corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_corpus_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/binary_patterns.jsonl");
    let out = run(&["--jobs", "2", "corpus", path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["total"], 340);
    assert_eq!(v["summary"]["unavoidable"], 28);
    assert_eq!(v["summary"]["unknown"], 0);
}
