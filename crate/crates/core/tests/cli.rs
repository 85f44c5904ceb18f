use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiassoc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn error_kind(args: &[&str]) -> (i32, String) {
    let out = run(args);
    assert!(!out.status.success(), "{args:?} should fail");
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON error object");
    (out.status.code().unwrap(), v["error"]["kind"].as_str().unwrap().to_string())
}

fn scratch(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("antiassoc-cli-{}-{name}", std::process::id()))
}

#[test]
fn terms() {
    let v = json(&["terms", "enumerate", "-k", "4"]);
    assert_eq!(v["count"], 5);
    assert_eq!(v["terms"][0], serde_json::json!([[["x1", "x2"], "x3"], "x4"]));
    assert_eq!(v["terms"][4], serde_json::json!(["x1", ["x2", ["x3", "x4"]]]));
    assert_eq!(json(&["terms", "count", "-k", "12"])["count"], 58786);
    let text = run(&["terms", "enumerate", "-k", "3", "--format", "text"]);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "(x1*x2)*x3\nx1*(x2*x3)\n");
    assert_eq!(error_kind(&["terms", "enumerate", "-k", "0"]), (2, "usage".into()));
    assert_eq!(error_kind(&["terms", "enumerate", "-k", "20"]).1, "resource-bound");
    assert_eq!(error_kind(&["terms", "count", "-k", "40"]).1, "overflow");
}

#[test]
fn unify_reports_trace_and_result() {
    let v = json(&["unify", "(x*y)*(z*y)", "z*((x*y)*(x*x))"]);
    assert_eq!(v["result"], "unifier");
    assert_eq!(v["bindings"]["y"], serde_json::json!(["x", "x"]));
    assert!(v["trace"].as_array().unwrap().len() >= 3);
    let v = json(&["unify", "x", "x*x"]);
    assert_eq!(v["result"], "not-unifiable");
    assert_eq!(v["trace"].as_array().unwrap().last().unwrap()["rule"], "Check");
    let v = json(&["unify", "x*y", "x*y"]);
    assert_eq!(v["bindings"], serde_json::json!({}));
    assert_eq!(error_kind(&["unify", "(x*y", "x"]), (1, "syntax".into()));
}

#[test]
fn separate_cover_with_table() {
    let csv = scratch("cover.csv");
    let affine = scratch("cover.json");
    let v = json(&[
        "separate",
        "(x*y)*z",
        "x*(y*z)",
        "--emit-table",
        csv.to_str().unwrap(),
        "--emit-affine",
        affine.to_str().unwrap(),
    ]);
    assert_eq!(v["verdict"], "separated");
    assert_eq!(v["construction"], "cover");
    assert_eq!(v["lambda"], serde_json::json!([0]));
    assert_eq!(v["opsum"][0], serde_json::json!({"m": 1, "p": "l", "n": 0, "tweaked": false, "internal": []}));
    let table = antiassoc::cayley::CayleyGroupoid::from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(table.order(), 4);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                assert_ne!(table.op(table.op(a, b), c), table.op(a, table.op(b, c)));
            }
        }
    }
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&affine).unwrap()).unwrap();
    assert_eq!(g, v["groupoid"]);
    std::fs::remove_file(csv).unwrap();
    std::fs::remove_file(affine).unwrap();
}

#[test]
fn separate_cycle_search_and_unifier() {
    let v = json(&["separate", "(y0*y1)*(z0*(z1*y0))", "((z2*y1)*y2)*(z3*y2)"]);
    assert_eq!(v["construction"], "cycle");
    let specs: Vec<String> = v["opsum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| format!("{},{},{},{}", o["m"], o["p"].as_str().unwrap(), o["n"], o["tweaked"]))
        .collect();
    assert_eq!(specs, ["3,ll,0,false", "4,lr,1,false", "4,rr,2,false", "4,r,3,true", "3,r,4,false"]);

    let v = json(&["separate", "(x*y)*(z*y)", "z*((y*y)*(x*x))"]);
    assert_eq!(v["construction"], "search");

    let v = json(&["separate", "x*y", "y*x"]);
    assert_eq!(v["verdict"], "not-separable");
    assert_eq!(v["construction"], "unifier");
    assert_eq!(v["unifier"], serde_json::json!({"y": "x"}));

    let v = json(&["separate", "(x*y)*(z*y)", "z*((y*y)*(x*x))", "--budget-candidates", "1"]);
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn antiassoc_build_then_verify() {
    let file = scratch("k3.json");
    let out = run(&["antiassoc", "build", "-k", "3"]);
    assert!(out.status.success());
    std::fs::write(&file, &out.stdout).unwrap();
    let v = json(&["antiassoc", "verify", "--input", file.to_str().unwrap()]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["pairs"][0]["exhaustive_factor"], true);
    std::fs::remove_file(file).unwrap();

    let v = json(&["antiassoc", "build", "-k", "4"]);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 10);
    let v = json(&["antiassoc", "verify", "-k", "4"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(error_kind(&["antiassoc", "build", "-k", "2"]), (2, "usage".into()));
    assert_eq!(error_kind(&["antiassoc", "build", "-k", "6", "--max-pairs", "10"]).1, "budget-exceeded");
}

#[test]
fn census_and_demos() {
    let v = json(&["census", "-n", "3", "--workers", "2"]);
    assert_eq!(v["total_tables"], 19683);
    assert_eq!(v["literally_deranged_count"], 16);
    assert_eq!(v["workers"], 2);
    assert_eq!(error_kind(&["census", "-n", "4"]), (2, "usage".into()));
    assert_eq!(error_kind(&["census", "-n", "5", "--long"]), (2, "usage".into()));
    for name in ["affine-example", "deranged-product", "figure2"] {
        let v = json(&["demo", name]);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true), "{name}");
    }
    assert_eq!(error_kind(&["demo", "nope"]), (2, "usage".into()));
    let v = json(&["lemmas", "--trials", "50", "--seed", "4"]);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(error_kind(&["terms", "count"]), (2, "usage".into()));
    assert_eq!(error_kind(&["census", "-n", "3", "--workers", "0"]), (2, "usage".into()));
    assert!(run(&["--help"]).status.success());
}
