use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cokernel-lab"));
    c.env_remove("COKLAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cokernel-lab")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn factor_reports_lifts_and_residue_fields() {
    let v = run_json(&["factor", "--p", "2", "--k", "3", "--poly", "0,1,1"]);
    assert_eq!(v["manifest"]["command"], "factor");
    assert_eq!(v["ring"]["squarefree"], true);
    let f = v["factors"].as_array().unwrap();
    assert_eq!(f.len(), 2);
    let mut lifts: Vec<&Value> = f.iter().map(|x| &x["lift"]).collect();
    lifts.sort_by_key(|l| l.to_string());
    assert_eq!(lifts, [&json!([0, 1]), &json!([1, 1])]);
    assert!(f.iter().all(|x| x["field_size"] == 2 && x["multiplicity"] == 1));

    let v = run_json(&["factor", "--p", "2", "--k", "1", "--poly", "0,0,1"]);
    assert_eq!(v["ring"]["squarefree"], false);
    assert_eq!(v["factors"][0]["multiplicity"], 2);
}

#[test]
fn snf_of_a_diagonal_matrix() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &json!({"rows": 2, "cols": 2, "entries": [4, 0, 0, 2]}));
    let v = run_json(&["snf", "--p", "2", "--k", "3", "--matrix", s(&m), "--transforms"]);
    assert_eq!(v["valuations"], json!([1, 2]));
    assert_eq!(v["cokernel"], json!([2, 1]));
    assert_eq!(v["log_size"], 3);
    assert!(v["transforms"]["u"]["entries"].is_array());
}

#[test]
fn coktype_of_a_small_matrix() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "x.json", &json!({"rows": 2, "cols": 2, "entries": [3, 0, 0, 1]}));
    let v = run_json(&["coktype", "--p", "3", "--k", "2", "--poly", "0,1", "--matrix", s(&m)]);
    assert_eq!(v["type"], "(1)");
    assert_eq!(v["log_size"], 1);
    assert_eq!(v["saturated"], false);
    assert_eq!(v["module"]["abelian"], json!([1]));
}

#[test]
fn theory_rows_follow_the_catalog() {
    let v = run_json(&["theory", "--p", "2", "--k", "2", "--poly", "0,1", "--max-size", "4"]);
    let rows = v["rows"].as_array().unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r["type"].as_str().unwrap()).collect();
    assert_eq!(ids, ["()", "(1)", "(2)", "(1,1)"]);
    let p0 = rows[0]["probability"].as_f64().unwrap();
    assert!((p0 - 0.2887880950866024).abs() < 1e-12);
    assert_eq!(rows[3]["aut"], "6");
    let total = v["total"].as_f64().unwrap();
    assert!((total + v["deficit"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn explicit_modules_for_repeated_factors() {
    let dir = TempDir::new().unwrap();
    let z4 = write(dir.path(), "z4.json", &json!({"abelian": [2], "t_action": [[0]]}));
    let v = run_json(&[
        "theory", "--p", "2", "--k", "2", "--poly", "0,0,1", "--module", s(&z4),
    ]);
    let rows = v["rows"].as_array().unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r["type"].as_str().unwrap()).collect();
    assert_eq!(ids, ["0", "F_2", "z4"]);
    assert_eq!(rows[1]["probability"], 0.0);
    assert_eq!(rows[1]["vanishing"], true);
}

#[test]
fn simulate_then_compare_is_a_pure_join() {
    let dir = TempDir::new().unwrap();
    let theory = dir.path().join("theory.json");
    let tally = dir.path().join("tally.json");
    let csv = dir.path().join("tally.csv");
    let ring = ["--p", "2", "--k", "1", "--poly", "0,1", "--max-size", "8"];
    let mut args = vec!["theory"];
    args.extend(ring);
    args.extend(["--out", s(&theory)]);
    assert!(run(&args).status.success());
    let mut args = vec!["simulate"];
    args.extend(ring);
    args.extend(["--n", "3,6", "--samples", "3000", "--seed", "5", "--out", s(&tally)]);
    args.extend(["--csv", s(&csv)]);
    assert!(run(&args).status.success());

    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,type,count,freq,theory,ci_lo,ci_hi\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 4);

    let compare = |path: &Path| run_json(&["compare", "--tally", s(path), "--theory", s(&theory)]);
    let base = compare(&tally);
    // Reordering the tally entries must not change the comparison.
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&tally).unwrap()).unwrap();
    for r in doc["results"].as_array_mut().unwrap() {
        let t = &mut r["tally"];
        t["ids"].as_array_mut().unwrap().reverse();
        t["counts"].as_array_mut().unwrap().reverse();
    }
    let shuffled = write(dir.path(), "shuffled.json", &doc);
    let again = compare(&shuffled);
    assert_eq!(base["results"], again["results"]);

    let sim: Value = serde_json::from_str(&fs::read_to_string(&tally).unwrap()).unwrap();
    for (a, b) in sim["results"].as_array().unwrap().iter().zip(base["results"].as_array().unwrap()) {
        assert_eq!(a["tv"], b["tv"]);
        for (x, y) in a["rows"].as_array().unwrap().iter().zip(b["rows"].as_array().unwrap()) {
            assert_eq!(x["type"], y["type"]);
            assert_eq!(x["z"], y["z"]);
        }
    }
}

#[test]
fn oracle_reports_exact_rationals() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "z2.json", &json!({"abelian": [1], "t_action": [[0]]}));
    let csv = dir.path().join("oracle.csv");
    let v = run_json(&[
        "oracle", "--p", "2", "--k", "1", "--poly", "0,1", "--n", "1,2", "--max-size", "4",
        "--moment-module", s(&g), "--csv", s(&csv),
    ]);
    let rows = v["rows"].as_array().unwrap();
    let zero_n2 = rows
        .iter()
        .find(|r| r["n"] == 2 && r["type"] == "()")
        .unwrap();
    assert_eq!(zero_n2["probability"], "3/8");
    assert_eq!(zero_n2["count"], 6);
    assert_eq!(v["moments"][1]["mobius"], "3/4");
    assert_eq!(v["moments"][1]["direct"], "3/4");
    assert!(fs::read_to_string(&csv).unwrap().starts_with("n,type,count,total,probability,value"));
}

#[test]
fn moments_and_manifest_options() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "z2.json", &json!({"abelian": [1], "t_action": [[0]]}));
    let out = dir.path().join("m.json");
    let o = run(&[
        "moments", "--p", "2", "--k", "1", "--poly", "0,1", "--module", s(&g), "--n", "4",
        "--samples", "500", "--out", s(&out), "--timing",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["manifest"]["wall_time_s"].is_number());
    assert_eq!(v["manifest"]["config"]["module"], s(&g));
    assert_eq!(v["module"], "z2");
    let m = &v["results"][0];
    assert_eq!(m["samples"], 500);
    assert!((m["mean"].as_f64().unwrap() - 0.9375).abs() < 0.2);
}

#[test]
fn thread_count_only_changes_speed() {
    let args = ["simulate", "--p", "3", "--k", "1", "--poly", "0,1", "--n", "5"];
    let go = |t: &str| {
        let o = bin()
            .args(args)
            .args(["--samples", "2000", "--seed", "1"])
            .env("COKLAB_THREADS", t)
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(go("1"), go("3"));
}

#[test]
fn exit_codes() {
    // Usage errors.
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--p", "2", "--k", "1", "--poly", "0,1"]).status.code(), Some(2));
    // Computation errors.
    let o = run(&["theory", "--p", "2", "--k", "1", "--poly", "0,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("square-free"));
    assert_eq!(run(&["factor", "--p", "4", "--k", "1", "--poly", "0,1"]).status.code(), Some(1));
    assert_eq!(run(&["factor", "--p", "2", "--k", "1", "--poly", "1,x"]).status.code(), Some(1));
    assert_eq!(
        run(&["simulate", "--p", "2", "--k", "1", "--poly", "0,1", "--n", "2", "--measure", "cauchy"])
            .status
            .code(),
        Some(1)
    );
    let o = bin()
        .args(["simulate", "--p", "2", "--k", "1", "--poly", "0,1", "--n", "2", "--samples", "10"])
        .env("COKLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
