use std::process::{Command, Output};

fn dpw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpw")).args(args).output().expect("spawn dpw")
}

fn stdout(args: &[&str]) -> String {
    let out = dpw(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf8")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).expect("json output")
}

#[test]
fn counts() {
    assert_eq!(stdout(&["roots", "--n", "6", "count"]).trim(), "36");
    assert_eq!(stdout(&["roots", "--n", "7"]).trim(), "63");
    assert_eq!(stdout(&["lines", "--n", "6"]).trim(), "27");
    assert_eq!(stdout(&["subsystems", "--n", "7", "--type", "A3xA3", "count"]).trim(), "630");
    assert_eq!(stdout(&["subsystems", "--n", "6", "--type", "A2^3", "count"]).trim(), "40");
    assert_eq!(stdout(&["strata", "--type", "a4", "count"]).trim(), "135");
    assert_eq!(json(&["strata", "--type", "b", "count"])["count"], 40);
}

#[test]
fn listings_match_counts() {
    assert_eq!(stdout(&["roots", "--n", "5", "list"]).lines().count(), 20);
    assert_eq!(stdout(&["subsystems", "--n", "7", "--type", "A7", "list"]).lines().count(), 36);
    let j = json(&["lines", "--n", "5", "list"]);
    assert_eq!(j["lines"].as_array().unwrap().len(), 16);
}

#[test]
fn complex_stats() {
    let j = json(&["complex", "--n", "6", "--mode", "geometric", "stats"]);
    assert_eq!(j["vertex_counts_by_type"]["A1"], 36);
    assert_eq!(j["f_vector_prefix"][0], 76);
}

#[test]
fn walls() {
    let out = stdout(&["walls", "--degree", "3"]);
    assert_eq!(out.lines().next().unwrap(), "2/3 1/2 1/3 1/4 1/6");
    assert_eq!(stdout(&["walls", "--degree", "4"]).lines().next().unwrap(), "1/2");
    let j = json(&["walls", "--degree", "3"]);
    let tags: Vec<&str> = j["chambers"].as_array().unwrap().iter().filter_map(|c| c["crossing_tag"].as_str()).collect();
    assert_eq!(tags, ["isomorphism", "isomorphism", "isomorphism", "contraction", "isomorphism"]);
}

#[test]
fn fiber_and_stable_model() {
    let out = stdout(&["fiber", "--type", "a", "--weight", "1", "show"]);
    assert!(out.lines().next().unwrap().ends_with("8 components"), "{out}");
    assert_eq!(json(&["fiber", "--type", "deg4_div", "show"])["components"].as_array().unwrap().len(), 6);
    let j = json(&["stable-model", "--type", "deg4_codim2", "--weight", "1/3"]);
    let comps = j["components"].as_array().unwrap();
    assert_eq!(comps.len(), 4);
    assert!(comps.iter().all(|c| c["role"] == "P2"));
    assert_eq!(json(&["stable-model", "--type", "b", "--weight", "1/8"])["components"].as_array().unwrap().len(), 3);
}

#[test]
fn json_is_stable_under_reparse() {
    let out = stdout(&["fiber", "--type", "ab", "show", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap(), out.trim_end());
}

#[test]
fn deterministic_across_threads() {
    let a = stdout(&["walls", "--degree", "3", "--format", "json", "--threads", "1"]);
    let b = stdout(&["walls", "--degree", "3", "--format", "json", "--threads", "4"]);
    assert_eq!(a, b);
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("dpw-walls-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    assert!(stdout(&["walls", "--degree", "4", "--out", p]).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().next().unwrap(), "1/2");
}

#[test]
fn exit_codes() {
    assert_eq!(dpw(&["stable-model", "--type", "a", "--weight", "0.5"]).status.code(), Some(2));
    assert_eq!(dpw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dpw(&["roots", "--n", "6", "--bogus"]).status.code(), Some(2));
    assert_eq!(dpw(&["check"]).status.code(), Some(2));
    assert_eq!(dpw(&["fiber", "--type", "nope", "show"]).status.code(), Some(1));
    assert_eq!(dpw(&["roots", "--n", "9"]).status.code(), Some(1));
    assert_eq!(dpw(&["stable-model", "--type", "a", "--weight", "2"]).status.code(), Some(1));
    assert_eq!(dpw(&["stable-model", "--type", "a", "--weight", "1/9"]).status.code(), Some(1));
}

#[test]
fn check_all_passes() {
    let out = stdout(&["check", "--all"]);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    assert_eq!(out.lines().count(), 9);
}
