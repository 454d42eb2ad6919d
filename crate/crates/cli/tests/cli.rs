use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn butterfly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_butterfly")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn gen_round_trips_through_zf_closure() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bf3.txt");
    let out = butterfly(&["gen", "-r", "3", "--out", graph.to_str().unwrap()]);
    assert!(out.status.success());

    // Level 0 alone does not force BF(3).
    let set = dir.path().join("set.txt");
    fs::write(&set, "0 1 2 3 4 5 6 7\n").unwrap();
    let trace = dir.path().join("trace.json");
    let out = butterfly(&[
        "zf",
        "closure",
        "--graph",
        graph.to_str().unwrap(),
        "--set",
        set.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["n"], 32);
    assert_eq!(v["forcing"], false);
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["pt"], Value::Null);
    assert_eq!(t["initial"].as_array().unwrap().len(), 8);

    // A path 0-1-2 forced from one end.
    let path = dir.path().join("p3.txt");
    fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
    fs::write(&set, "0").unwrap();
    let out = butterfly(&["zf", "closure", "--graph", path.to_str().unwrap(), "--set", set.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!((v["forcing"].clone(), v["pt"].clone()), (Value::Bool(true), Value::from(2)));
}

#[test]
fn gen_formats() {
    let out = butterfly(&["gen", "-r", "2", "--order", "recursive", "--format", "matrix"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[2], "1 1 0 0 0 0 0 0 1 0 1 0");
    let out = butterfly(&["gen", "-r", "1", "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("\"(1,1)\""));
}

#[test]
fn zf_check_and_min() {
    let out = butterfly(&["zf", "check", "-r", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["size"], 78);
    assert_eq!(v["ok"], true);

    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bf2.txt");
    assert!(butterfly(&["gen", "-r", "2", "--out", graph.to_str().unwrap()]).status.success());
    let v = json(&butterfly(&["zf", "min", "--graph", graph.to_str().unwrap()]));
    assert_eq!(v["z"], 6);
}

#[test]
fn rank_over_fields() {
    for field in ["q", "gf2", "gf3"] {
        let out = butterfly(&["rank", "-r", "4", "--field", field]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["rank"], 46);
        assert_eq!(v["match"], true);
    }
    assert_eq!(butterfly(&["rank", "-r", "4", "--field", "gf4"]).status.code(), Some(2));
    assert_eq!(butterfly(&["rank", "--field", "gf2"]).status.code(), Some(2));
}

#[test]
fn cert_build_and_show() {
    let dir = tempfile::tempdir().unwrap();
    let book = dir.path().join("book_5.json");
    let out = butterfly(&["cert", "build", "-r", "5", "--verify", "--out", book.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["certificates"], 78);
    let saved: Value = serde_json::from_str(&fs::read_to_string(&book).unwrap()).unwrap();
    assert_eq!(saved["r"], 5);
    assert_eq!(saved["certs"].as_array().unwrap().len(), 78);

    let v = json(&butterfly(&["cert", "show", "-r", "4", "--target", "65"]));
    assert_eq!(v["two_level"]["k1minus"], serde_json::json!([14, 18, 46, 50]));
    assert_eq!(v["two_level"]["k2minus"], serde_json::json!([76, 77, 80]));
    assert_eq!(v["verified"], true);
    assert_eq!(butterfly(&["cert", "show", "-r", "4", "--target", "66"]).status.code(), Some(0));
    assert_eq!(butterfly(&["cert", "show", "-r", "4", "--target", "2"]).status.code(), Some(2));
}

#[test]
fn pd_commands() {
    assert_eq!(json(&butterfly(&["pd", "bound", "-r", "4"]))["lower_bound"], 9);
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bf1.txt");
    assert!(butterfly(&["gen", "-r", "1", "--out", graph.to_str().unwrap()]).status.success());
    let v = json(&butterfly(&["pd", "min", "--graph", graph.to_str().unwrap()]));
    assert_eq!(v["exact"], 1);
    assert_eq!(v["ppt"], 2);
    assert!(v["lower_bound"].as_u64().unwrap() <= 1);

    let big = dir.path().join("bf4.txt");
    assert!(butterfly(&["gen", "-r", "4", "--out", big.to_str().unwrap()]).status.success());
    let out = butterfly(&["pd", "min", "--graph", big.to_str().unwrap(), "--budget", "0.05"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["exact"], Value::Null);
    assert!(v["lower_bound"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_table_and_json() {
    let out = butterfly(&["verify", "-r", "1..4", "--fields", "q,gf2"]);
    assert!(out.status.success());
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 4);
    assert_eq!(reports[3]["mr_formula"], 46);
    assert_eq!(reports[1]["z_brute_force"], 6);

    let out = butterfly(&["--pretty", "verify-theorem", "-r", "2,3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("match"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn usage_and_resource_exit_codes() {
    assert_eq!(butterfly(&["gen", "-r", "0"]).status.code(), Some(2));
    assert_eq!(butterfly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        butterfly(&["zf", "closure", "--graph", "/nonexistent", "--set", "/nonexistent"]).status.code(),
        Some(2)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_butterfly"))
        .args(["rank", "-r", "12"])
        .env("BUTTERFLY_MEM_MB", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BUTTERFLY_MEM_MB"));
    let out = Command::new(env!("CARGO_BIN_EXE_butterfly"))
        .args(["zf", "check", "-r", "3"])
        .env("BUTTERFLY_MEM_MB", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_reports_timings() {
    let v = json(&butterfly(&["--jobs", "1", "bench", "-r", "5"]));
    assert_eq!(v["n"], 192);
    assert_eq!(v["rank_gf2"], 114);
    assert!(v["rank_gf2_ms"].as_f64().unwrap() >= 0.0);
}
