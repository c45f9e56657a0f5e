use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmlcause")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_exit_codes() {
    let t1 = fixture("t1.aut");
    assert_eq!(run(&["check", &t1, "<a><h>tt"]).status.code(), Some(0));
    assert_eq!(run(&["check", &t1, "<h>tt"]).status.code(), Some(1));
    assert_eq!(run(&["check", "missing.aut", "tt"]).status.code(), Some(2));
    let bad = run(&["check", &t1, "<a"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));
}

#[test]
fn formula_can_come_from_a_file() {
    let o = run(&["check", &fixture("t1.aut"), &fixture("t1.hml")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn causes_of_t4() {
    let o = run(&["causes", &fixture("t4.aut"), "<h>tt", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("core:")).map(String::from).collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("core: a | kills: ah, abb, abh"));
}

#[test]
fn causes_of_t3_is_empty() {
    assert_eq!(run(&["causes", &fixture("t3.aut"), "<h>tt", "--bound", "3"]).status.code(), Some(1));
}

#[test]
fn immediate_effect_note() {
    let o = run(&["causes", &fixture("t2.aut"), "<h>tt", "--bound", "3", "--format", "json"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("immediate"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["policy"], "immediate");
    assert_eq!(v["causes"].as_array().unwrap().len(), 0);
}

#[test]
fn cyclic_default_bound_is_noted() {
    let o = run(&["causes", &fixture("t5.aut"), "<h>tt"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cyclic"));
    assert!(stdout(&o).starts_with("bound 3, bounded"));
}

#[test]
fn projections() {
    let o = run(&["project", &fixture("t1.aut"), "<h>tt", "--format", "aut"]);
    let out = stdout(&o);
    assert!(out.starts_with("des (0,1,2)\n(0,\"a\",1)\n"), "{out}");

    let o = run(&["project", &fixture("t3.aut"), "<h>tt"]);
    assert!(stdout(&o).starts_with("des (0,0,1)"));

    let o = run(&["project", &fixture("pair_right.aut"), "<h'>tt"]);
    assert!(stdout(&o).starts_with("des (0,2,3)"));

    let o = run(&["project", &fixture("t1.aut"), "<h>tt", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn compose_ops() {
    let (l, r) = (fixture("pair_left.aut"), fixture("pair_right.aut"));
    let o = run(&["compose", &l, &r]);
    assert!(stdout(&o).starts_with("des (0,31,20)"), "{}", stdout(&o));
    let o = run(&["compose", &l, &r, "--op", "choice"]);
    assert!(stdout(&o).starts_with("des (0,7,8)"), "{}", stdout(&o));
}

#[test]
fn verify_pair() {
    let (l, r) = (fixture("pair_left.aut"), fixture("pair_right.aut"));
    for theorem in ["disjunction", "conjunction", "lemmas"] {
        let o = run(&["verify", &l, &r, "<h>tt", "<h'>tt", "--theorem", theorem, "--bound", "4"]);
        assert_eq!(o.status.code(), Some(0), "{theorem}: {}", stdout(&o));
    }
    let o = run(&["verify", &l, &r, "<h>tt", "<h'>tt", "--bound", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["witness"].as_object().unwrap().len(), 4);
}

#[test]
fn verify_precondition_failure() {
    let o = run(&["verify", &fixture("pair_left.aut"), &fixture("t1.aut"), "<h>tt", "<h>tt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("precondition"));
}

#[test]
fn verify_random_corpus() {
    let o = run(&["verify", "--random", "--seed", "7", "--count", "200", "--theorem", "disjunction"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("200/200 hold"));
    let o = run(&["verify", "--random", "--seed", "7", "--count", "50", "--theorem", "conjunction"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failing_instance_writes_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("left.aut");
    let right = dir.path().join("right.aut");
    std::fs::write(&left, "des (0,2,3)\n(0,\"a\",1)\n(1,\"h\",2)\n").unwrap();
    std::fs::write(&right, "des (0,3,4)\n(0,\"d\",1)\n(0,\"d\",2)\n(1,\"g\",3)\n").unwrap();
    let bundles = dir.path().join("out");
    let o = run(&[
        "verify",
        left.to_str().unwrap(),
        right.to_str().unwrap(),
        "<h>tt",
        "<g>tt",
        "--bundle-dir",
        bundles.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(bundles.join("instance-0/manifest.json").is_file());
}

#[test]
fn dot_highlights_causal_transitions() {
    let o = run(&["dot", &fixture("t4.aut"), "<h>tt"]);
    let out = stdout(&o);
    assert_eq!(out.matches("style=dashed").count(), 1);
    assert!(out.contains("\"0\" -> \"1\" [label=\"a\", style=dashed]"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["causes"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--theorem", "nope"]).status.code(), Some(2));
}
