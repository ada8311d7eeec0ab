use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    root.join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn entcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcap")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn mincut_prints_value_and_witness() {
    let out = entcap(&["mincut", &fixture("fig2_counterexample")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["mc"], 15);
    assert_eq!(v["s_side"], serde_json::json!(["n1", "n2", "s"]));
    assert_eq!(v["crossing_edges"], serde_json::json!(["e3", "e4"]));
}

#[test]
fn rank_of_square_path() {
    let out = entcap(&["rank", &fixture("path_3_3")]);
    assert!(out.status.success());
    assert_eq!(json(&out)["r1_lower"], 3);
}

#[test]
fn reproduce_rank_gap_line() {
    let out = entcap(&["reproduce", "--claim", "r1-gap"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().next().unwrap().ends_with("R1=14 MC=15 PASS"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let cases: [&[&str]; 3] = [
        &["rank", &fixture("fig2_counterexample"), "--seed", "9"],
        &["c1", &fixture("n4_split"), "--l", "6"],
        &["bounds", &fixture("n_d5_2")],
    ];
    for args in cases {
        let one = entcap(&[&["--threads", "1"], args].concat());
        let four = entcap(&[&["--threads", "4"], args].concat());
        assert!(one.status.success(), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn coding_search_outcomes() {
    let out = entcap(&["c1", &fixture("n2_up"), "--l", "6"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["outcome"], "impossible");
    let out = entcap(&["c1", &fixture("n2_up"), "--exact-up-to", "6"]);
    assert_eq!(json(&out)["c1"], 5);
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_entcap"))
        .args(["c1", &fixture("n4_split"), "--l", "6"])
        .env("ENTCAP_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["outcome"], "budget_exceeded");
}

#[test]
fn bad_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("entcap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"vertices":["s","t"],"sources":["s"],"sinks":["t"],"edges":[{"id":"e","u":"s","v":"t","dim":0}]}"#).unwrap();
    assert_eq!(entcap(&["mincut", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(entcap(&["mincut", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(entcap(&["transform", &fixture("n_d5_4"), "--op", "split:e1:1:2"]).status.code(), Some(2));
    assert_eq!(entcap(&["c1", &fixture("n_d5_2"), "--l", "2"]).status.code(), Some(2));
    assert_eq!(entcap(&["reproduce", "--claim", "nope"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    let out = Command::new(env!("CARGO_BIN_EXE_entcap"))
        .args(["bounds", &fixture("fig2_counterexample"), "--r1-exact", "13"])
        .env("ENTCAP_BUDGET", "10000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn transforms_print_networks() {
    let out = entcap(&["transform", &fixture("n_d5_4"), "--op", "split:e5:2:2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("n4_split")).unwrap());
    let out = entcap(&["transform", &fixture("n_d5_2"), "--op", "scale:2"]);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("fig1_scaled_k2")).unwrap());
    let out = entcap(&["transform", &fixture("n_d5_2"), "--op", "round:2"]);
    let v = json(&out);
    let dims: Vec<u64> = v["upper"]["edges"].as_array().unwrap().iter().map(|e| e["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [4, 16, 16, 4, 4]);
    let out = entcap(&["transform", &fixture("fig1_scaled_k2"), "--op", "teleport:2"]);
    assert_eq!(json(&out)["through_rank"], 4);
}

#[test]
fn bounds_on_path() {
    let out = entcap(&["bounds", &fixture("path_2_3")]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["mc", "q1_lower", "q1_upper", "q1"] {
        assert_eq!(v[key], 2, "{key}");
    }
    assert_eq!(v["regularized"]["R"], 2);
    assert_eq!(v["regularized"]["Q"], 2);
    assert_eq!(v["regularized"]["C_directed"], 2);
}

#[test]
fn sandwich_holds_for_n2() {
    let out = entcap(&["sandwich", &fixture("n_d5_2"), "--n", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["mc_lower"], 32);
    assert_eq!(v["mc_upper"], 64);
}

#[test]
fn fixtures_listing() {
    let out = entcap(&["fixtures"]);
    assert!(stdout(&out).lines().any(|l| l == "fig2_counterexample"));
    let out = entcap(&["fixtures", "protocol_n4"]);
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("protocol_n4")).unwrap());
}
