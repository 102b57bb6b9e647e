mod common;

use std::process::{Command, Output};

use common::data_path;
use serde_json::Value;

fn sgmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgmc"))
        .args(args)
        .env_remove("SGMC_SEED")
        .output()
        .unwrap()
}

fn input(name: &str) -> String {
    data_path(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_d2_is_uniform() {
    let o = sgmc(&["analyze", "--input", &input("d2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["mode"], "general");
    let psis: Vec<&str> = r["stationary"].as_array().unwrap().iter().map(|e| e["psi"].as_str().unwrap()).collect();
    assert_eq!(psis, ["1/4"; 4]);
    assert_eq!(r["numeric"]["states"], serde_json::json!(["1/4", "1/4", "1/4", "1/4"]));
    assert_eq!(r["verification"]["passed"], true);
    assert_eq!(r["ergodicity"]["period"], 2);
}

#[test]
fn analyze_example_reports_psi() {
    let o = sgmc(&["analyze", "--input", &input("example210.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["mode"], "left_zero");
    assert_eq!(r["stationary"][0]["psi"], "(x_1 + x_2*x_3)/(1 - x_3^2)");
    let t32 = r["terminals"].as_array().unwrap().iter().find(|t| t["word"] == "32").unwrap();
    assert_eq!(t32["kleene"], "3(33)*2");
    assert_eq!(r["sizes"]["mc"], 9);
}

#[test]
fn analyze_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = sgmc(&["analyze", "--input", &input("d2c.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["ergodicity"]["ergodic"], true);
}

#[test]
fn reports_are_deterministic() {
    let a = sgmc(&["analyze", "--input", &input("d2.json"), "--seed", "7"]);
    let b = sgmc(&["analyze", "--input", &input("d2.json"), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_sgmc"))
        .args(["analyze", "--input", &input("d2.json")])
        .env("SGMC_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, env.stdout);
    let other = sgmc(&["analyze", "--input", &input("d2.json"), "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
    let d1 = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "mc"]);
    let d2 = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "mc"]);
    assert_eq!(d1.stdout, d2.stdout);
}

#[test]
fn mixing_example_bound() {
    let o = sgmc(&[
        "mixing",
        "--input",
        &input("example210.json"),
        "--eval",
        "x1=1/3,x2=1/3,x3=1/3",
        "--epsilon",
        "1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("t_mix ≤ 3"), "{text}");
    assert!(text.contains("0           1  1.000000"), "{text}");
    assert!(text.contains("holds"), "{text}");
    assert!(!text.contains("false"), "{text}");
}

#[test]
fn mixing_eval_aliases() {
    for eval in ["x_1=1/3,x_2=1/3", "1=1/3,2=1/3,3=1/3"] {
        let o = sgmc(&["mixing", "--input", &input("example210.json"), "--eval", eval, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{eval}");
        let r = json(&o);
        assert_eq!(r["expected_tau_value"], "3/2");
        assert_eq!(r["tail"][0]["tail"], "1");
    }
}

#[test]
fn mixing_epsilon_one_without_table() {
    let o = sgmc(&["mixing", "--input", &input("d2.json"), "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("t_mix ≤ 1"), "{text}");
    assert!(text.contains("TV bound table skipped"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn mixing_symbolic_needs_eval() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("sym.json");
    std::fs::write(
        &f,
        r#"{"states":["1","2"],"generators":[
            {"label":"a","action":[0,0],"prob":"sym"},
            {"label":"b","action":[1,0],"prob":"sym"}]}"#,
    )
    .unwrap();
    let path = f.to_str().unwrap();
    assert_eq!(sgmc(&["mixing", "--input", path]).status.code(), Some(1));
    assert_eq!(sgmc(&["mixing", "--input", path, "--eval", "a=1/4"]).status.code(), Some(0));
    assert_eq!(sgmc(&["mixing", "--input", path, "--eval", "zz=1/4"]).status.code(), Some(1));
    assert_eq!(sgmc(&["mixing", "--input", path, "--eval", "a=3/4,b=3/4"]).status.code(), Some(1));
    let o = sgmc(&["analyze", "--input", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o).get("numeric").is_none());
}

#[test]
fn export_rcay_has_two_blue_edges() {
    let o = sgmc(&["export", "--input", &input("d2.json"), "--graph", "rcay"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 5);
    assert_eq!(dot.matches("color=blue").count(), 2);
}

#[test]
fn export_mc_and_loop_graph() {
    let o = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "mc"]);
    let dot = stdout(&o);
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    assert_eq!(nodes, 30);
    let o = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "loop:ab□"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph \"ab□\""));
    assert!(dot.contains("style=dashed"));
    let o = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "loop:zz"]);
    assert_eq!(o.status.code(), Some(1));
    let o = sgmc(&["export", "--input", &input("d2box.json"), "--graph", "tree"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn export_kr() {
    let o = sgmc(&["export", "--input", &input("d2.json"), "--graph", "kr"]);
    let dot = stdout(&o);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 9);
}

#[test]
fn verify_passes() {
    let o = sgmc(&["verify", "--input", &input("d2.json"), "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], true);
    assert_eq!(r["oracle"]["points"].as_array().unwrap().len(), 6);
    let o = sgmc(&["verify", "--input", &input("example210.json"), "--maxlen", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["paths"].as_array().unwrap().len(), 6);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data_path("example210.json")).unwrap();
    std::fs::write(&f, text.replace("[1, 0]", "[1, 2]")).unwrap();
    let o = sgmc(&["analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"3\"") && err.contains("action[1]"), "{err}");
    assert_eq!(sgmc(&["analyze", "--input", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(sgmc(&["analyze"]).status.code(), Some(1));
    assert_eq!(sgmc(&["--version"]).status.code(), Some(0));
}

#[test]
fn caps_exit_three() {
    for cap in [["--max-elements", "3"], ["--max-kr", "3"], ["--max-mc", "3"]] {
        let o = sgmc(&["analyze", "--input", &input("d2.json"), cap[0], cap[1]]);
        assert_eq!(o.status.code(), Some(3), "{cap:?}");
    }
}
