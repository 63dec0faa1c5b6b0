use std::path::Path;
use std::process::{Command, Output};

use machine_cover::rational::{self, int};
use machine_cover::{cover_of, parse_instance, Assignment, Rational};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_machine-cover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TIGHT: &str = r#"{"jobs":["1/2","1/4","1/4"],"bids":["1/3","1"]}"#;
const WORKED: &str = r#"{"jobs":["2","1","1"],"bids":["1","1"]}"#;

fn reevaluate(instance_text: &str, doc: &Value) -> Rational {
    let instance = parse_instance(instance_text).unwrap();
    let ids: Vec<usize> = doc["assignment"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    cover_of(&Assignment::from_external(&instance, &ids).unwrap(), &instance)
}

#[test]
fn solve_snc2_tight_sequence() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "tight.json", TIGHT);
    let out = run(&["solve", "--alg", "snc2", "--instance", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["cover"], "1/6");
    assert_eq!(doc["algorithm"], "snc2");
    assert_eq!(rational::format(&reevaluate(TIGHT, &doc)), "1/6");
}

#[test]
fn solve_fptas_worked_example() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "worked.json", WORKED);
    let out = run(&["solve", "--alg", "fptas", "--instance", &path, "--epsilon", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["cover"], "2");
    assert_eq!(doc["epsilon"], "1/4");
    assert_eq!(reevaluate(WORKED, &doc), int(2));
}

#[test]
fn every_algorithm_reports_a_consistent_cover() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"jobs":["3","5/2","2","1","1","1/2"],"bids":["1","3/2"],"machine_ids":[1,0]}"#;
    let path = write(&dir, "inst.json", text);
    for alg in ["snc", "snc2", "ssnc2", "ssnc-multi", "round-robin", "ptas", "fptas", "mechanism", "oracle"] {
        let out = run(&["solve", "--alg", alg, "--instance", &path]);
        assert_eq!(out.status.code(), Some(0), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = json(&out);
        let printed = rational::parse(doc["cover"].as_str().unwrap()).unwrap();
        assert_eq!(reevaluate(text, &doc), printed, "{alg}");
    }
}

#[test]
fn oracle_subcommand_matches_solve() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "tight.json", TIGHT);
    let a = run(&["oracle", "--instance", &path]);
    let b = run(&["solve", "--alg", "oracle", "--instance", &path]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["cover"], "1/4");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["ratio", "--alg", "snc", "--trials", "20", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let csv = run(&["ratio", "--alg", "ssnc2", "--trials", "5", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("algorithm,trial,m,n,opt,planted,cover,ratio,bound,within\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn monotone_reports_three_machine_violation() {
    let out = run(&["monotone", "--alg", "ssnc-multi", "--gen-params", "family=nonmono3,a=3/2"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["pass"], false);
    let violations = doc["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["machine_id"], 0);
    assert_eq!(violations[0]["new_work"], "29/8");
}

#[test]
fn monotone_passes_for_round_robin() {
    let out = run(&["monotone", "--alg", "round_robin", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["trials"], 50);
    assert_eq!(doc["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn gen_writes_a_loadable_document() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("lb.json");
    let out = run(&["gen", "--family", "snc_lb1", "--params", "s=3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    parse_instance(&text).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["meta"]["family"], "snc_lb1");

    let random = run(&["gen", "--family", "random", "--params", "m=3,n=5", "--seed", "4"]);
    let instance = parse_instance(std::str::from_utf8(&random.stdout).unwrap()).unwrap();
    assert_eq!((instance.m(), instance.n()), (3, 5));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "worked.json", WORKED);
    assert_eq!(run(&["solve", "--alg", "snc", "--instance", &path, "--epsilon", "2/5"]).status.code(), Some(0));
    assert_eq!(run(&["solve", "--alg", "snc", "--instance", &path, "--epsilon", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--alg", "fptas", "--instance", &path, "--epsilon", "2/7"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--alg", "lpt", "--instance", &path]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/instance.json").to_str().unwrap();
    assert_eq!(run(&["solve", "--alg", "snc", "--instance", missing]).status.code(), Some(2));
    let bad = write(&dir, "bad.json", r#"{"jobs":["-1"],"bids":["1"]}"#);
    assert_eq!(run(&["solve", "--alg", "snc", "--instance", &bad]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "worked.json", WORKED);
    let out = run(&["oracle", "--instance", &path, "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
