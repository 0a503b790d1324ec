use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn scell(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scell")).env("SCELL_CACHE_DIR", cache).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pi_examples() {
    let dir = tempfile::tempdir().unwrap();
    let id = scell(dir.path(), &["pi", "--n", "2", "--window", "1,2"]);
    assert_eq!(id.status.code(), Some(0));
    let v = json(&id);
    assert_eq!(v["pibar"], serde_json::json!([2]));
    assert_eq!(v["delta"], 0);
    assert_eq!(v["is_minimal"], true);

    let s0 = json(&scell(dir.path(), &["pi", "--n", "2", "--window", "0,3"]));
    assert_eq!(s0["pibar"], serde_json::json!([1, 1]));
    assert_eq!(s0["pi"]["rvals"][0][2], "1/1");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = scell(dir.path(), &["pi", "--n", "2", "--window", "2,2"]);
    assert_eq!(bad.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("NonBijective"));
    assert_eq!(scell(dir.path(), &["pi", "--n", "3", "--window", "1,2"]).status.code(), Some(64));
    assert_eq!(scell(dir.path(), &["pi", "--n", "2", "--window", "1,2", "--prime", "10"]).status.code(), Some(64));
    assert_eq!(scell(dir.path(), &["frobnicate"]).status.code(), Some(64));
    assert_eq!(scell(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(scell(dir.path(), &["verify", "--n", "2"]).status.code(), Some(64));
}

#[test]
fn gl_windows_are_taken_modulo_the_centre() {
    let dir = tempfile::tempdir().unwrap();
    let a = json(&scell(dir.path(), &["pi", "--n", "2", "--mode", "GL", "--window", "3,4"]));
    assert_eq!(a["x"], "2:1,2");
    assert_eq!(a["pibar"], serde_json::json!([2]));
}

#[test]
fn cells_small_balls() {
    let dir = tempfile::tempdir().unwrap();
    let t = json(&scell(dir.path(), &["cells", "--n", "2", "--max-length", "1"]));
    assert_eq!(t["entries"].as_array().unwrap().len(), 3);
    assert_eq!(t["cells"]["(2)"], serde_json::json!(["2:1,2"]));
    assert_eq!(t["cells"]["(1,1)"].as_array().unwrap().len(), 2);

    let t = json(&scell(dir.path(), &["cells", "--n", "2", "--max-length", "0"]));
    assert_eq!(t["cells"], serde_json::json!({"(2)": ["2:1,2"]}));

    let t = json(&scell(dir.path(), &["cells", "--n", "3", "--max-length", "2"]));
    let entries = t["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 10);
    assert!(entries.iter().all(|e| e["pibar"].is_array()));
}

#[test]
fn cold_and_warm_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cells", "--n", "3", "--max-length", "4", "--seed", "7"];
    let cold = scell(dir.path(), &args);
    assert!(dir.path().join("pi.jsonl").exists());
    let warm = scell(dir.path(), &args);
    let uncached = scell(dir.path(), &[&args[..], &["--no-cache"]].concat());
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);
    let lines = fs::read_to_string(dir.path().join("pi.jsonl")).unwrap().lines().count();
    assert_eq!(lines, 31);
}

#[test]
fn cache_survives_garbage_lines() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["pi", "--n", "3", "--window", "0,2,4"];
    let first = scell(dir.path(), &args);
    let path = dir.path().join("pi.jsonl");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{not json\n");
    fs::write(&path, text).unwrap();
    assert_eq!(scell(dir.path(), &args).stdout, first.stdout);
}

#[test]
fn csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let r = scell(dir.path(), &["cells", "--n", "2", "--max-length", "2", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,length,pibar,rvals,delta,certified,is_minimal,error"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_passes_and_catches_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let ok = scell(dir.path(), &["verify", "--n", "2", "--max-length", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["pass"], true);

    let table = dir.path().join("t.json");
    let r = scell(dir.path(), &["cells", "--n", "2", "--max-length", "6", "--out", table.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(scell(dir.path(), &["verify", "--table", table.to_str().unwrap()]).status.code(), Some(0));

    let original: Value = serde_json::from_str(&fs::read_to_string(&table).unwrap()).unwrap();
    let mutations: [fn(&mut Value); 4] = [
        // move an element into the wrong cell
        |t| {
            let x = t["cells"]["(1,1)"].as_array_mut().unwrap().pop().unwrap();
            t["cells"]["(2)"].as_array_mut().unwrap().push(x);
        },
        // drop an element
        |t| {
            t["entries"].as_array_mut().unwrap().pop();
        },
        // replace a class by a non-minimal one
        |t| {
            let e = &mut t["entries"][1];
            e["pi"]["rvals"][0][2] = "2/1".into();
        },
        // lose the only elliptic element
        |t| {
            t["entries"].as_array_mut().unwrap().remove(0);
            t["cells"].as_object_mut().unwrap().remove("(2)");
        },
    ];
    for (i, mutate) in mutations.iter().enumerate() {
        let mut t = original.clone();
        mutate(&mut t);
        let path = dir.path().join(format!("bad{i}.json"));
        fs::write(&path, serde_json::to_string(&t).unwrap()).unwrap();
        let r = scell(dir.path(), &["verify", "--table", path.to_str().unwrap()]);
        assert_eq!(r.status.code(), Some(1), "mutation {i} went unnoticed");
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn growth_window_beyond_the_ball_fails() {
    let dir = tempfile::tempdir().unwrap();
    let r = scell(dir.path(), &["verify", "--n", "2", "--max-length", "4", "--growth-at", "2,4,6"]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn finite_cells_table() {
    let dir = tempfile::tempdir().unwrap();
    let r = scell(dir.path(), &["finite-cells", "--n", "3"]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    assert_eq!(v["total"], 6);
    assert_eq!(v["agree"], 6);
    let r = json(&scell(dir.path(), &["finite-cells", "--n", "2"]));
    assert_eq!(r["rows"][1]["w"], "[2,1]");
    assert_eq!(r["rows"][1]["jordan"], serde_json::json!([1, 1]));
    assert_eq!(scell(dir.path(), &["finite-cells", "--n", "7"]).status.code(), Some(64));
}

#[test]
fn minimal_table() {
    let dir = tempfile::tempdir().unwrap();
    let r = scell(dir.path(), &["minimal", "--n", "3"]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let by_delta: Vec<(String, u64)> =
        rows.iter().map(|r| (r["class"]["rvals"][0][2].as_str().unwrap().to_string(), r["delta"].as_u64().unwrap())).collect();
    assert_eq!(by_delta, vec![("1/3".into(), 0), ("1/2".into(), 1), ("1/1".into(), 3)]);
    assert!(rows.iter().all(|r| r["oracle"] == "agrees"));
}
