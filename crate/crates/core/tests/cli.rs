//! End-to-end tests of the command-line binary: output formats, exit codes,
//! and the environment override for the enumeration guard.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use treebalance::builders::gfb;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treebalance"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn index_reports_the_example_shape() {
    let out = run(&["index", "--newick", "((a,b),(c,(d,e)));"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("n: 5"));
    assert!(text.contains("colless: 2"));
    assert!(text.contains("sackin: 12"));
    assert!(text.contains("root partition: (3, 2)"));
}

#[test]
fn index_json_round_trips() {
    let out = run(&["index", "--newick", "((a,b),(c,(d,e)));", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v["n"], 5);
    assert_eq!(v["colless"], 2);
    assert_eq!(v["sackin"], 12);
    assert_eq!(v["height"], 3);
    assert_eq!(v["cherries"], 2);
    assert_eq!(v["root_partition"], serde_json::json!([3, 2]));
}

#[test]
fn index_reads_stdin() {
    let mut child = bin()
        .args(["index", "--stdin", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("piped stdin")
        .write_all(b"((,),(,(,)));\n")
        .expect("write to child");
    let out = child.wait_with_output().expect("child finishes");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v["n"], 5);
}

#[test]
fn bad_newick_exits_one() {
    let out = run(&["index", "--newick", "((,);"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).expect("utf8 stderr");
    assert!(stderr.contains("byte 4"), "stderr: {stderr}");
}

#[test]
fn min_methods_and_json() {
    let out = run(&["min", "--n", "24", "--method", "both"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "8, 8");

    let out = run(&["min", "--n", "23"]);
    assert_eq!(stdout_of(&out).trim(), "10");

    let out = run(&["min", "--n", "24", "--method", "both", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v["n"], 24);
    assert_eq!(v["recursive"], 8);
    assert_eq!(v["explicit"], 8);
}

#[test]
fn build_matches_library() {
    let out = run(&["build", "gfb", "--n", "11"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), gfb(11).to_newick());

    let out = run(&["build", "fully-balanced", "--k", "3"]);
    assert_eq!(stdout_of(&out).trim(), "(((,),(,)),((,),(,)));");

    // fully-balanced via --n demands a power of two.
    let out = run(&["build", "fully-balanced", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn qb_lists_partitions() {
    let out = run(&["qb", "--n", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "8 4\n6 6\n");

    let out = run(&["qb", "--n", "12", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v, serde_json::json!([[8, 4], [6, 6]]));
}

#[test]
fn enumerate_streams_and_counts() {
    let out = run(&["enumerate", "--n", "5"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.contains(&"(((,),),(,));"));

    let out = run(&["enumerate", "--n", "6", "--count-only"]);
    assert_eq!(stdout_of(&out).trim(), "6");
}

#[test]
fn enumeration_guard_exits_three_and_env_overrides() {
    let out = run(&["enumerate", "--n", "30"]);
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .args(["enumerate", "--n", "5", "--count-only"])
        .env("TREEBALANCE_ENUM_GUARD", "4")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .args(["enumerate", "--n", "5", "--count-only"])
        .env("TREEBALANCE_ENUM_GUARD", "5")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).trim(), "3");

    let out = bin()
        .args(["enumerate", "--n", "5"])
        .env("TREEBALANCE_ENUM_GUARD", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_table_and_cap() {
    let out = run(&["count", "--kind", "colless", "--max", "12"]);
    assert!(out.status.success());
    let expected = "1 1\n2 1\n3 1\n4 1\n5 1\n6 2\n7 1\n8 1\n9 1\n10 3\n11 3\n12 4\n";
    assert_eq!(stdout_of(&out), expected);

    let out = run(&["count", "--kind", "sackin", "--max", "513"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["count", "--kind", "bound-b", "--max", "23", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v[22], serde_json::json!({ "n": 23, "count": "25" }));
}

#[test]
fn curve_csv_is_bit_exact() {
    let out = run(&["curve", "--max-n", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "n,c_n,g_n\n1,0,\n2,0,1\n3,1,2\n4,0,2\n5,2,4\n6,2,4\n");
}

#[test]
fn curve_writes_file() {
    let dir = std::env::temp_dir().join(format!("treebalance-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("curve.csv");
    let out = run(&["curve", "--max-n", "24", "--out", path.to_str().expect("utf8 path")]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let csv = std::fs::read_to_string(&path).expect("file written");
    assert!(csv.starts_with("n,c_n,g_n\n1,0,\n"));
    assert!(csv.ends_with("24,8,16\n"));
    std::fs::remove_dir_all(&dir).expect("cleanup");
}

#[test]
fn verify_passes_at_reduced_scale() {
    let out = run(&["verify", "--max-n-enum", "8", "--max-n-formula", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("all 20 checks passed"), "stdout: {text}");
    assert!(!text.contains("FAIL"));

    let out = run(&["verify", "--max-n-enum", "8", "--max-n-formula", "128", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["checks"].as_array().expect("array").len(), 20);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = run(&["nosuchcommand"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["min"]); // missing required --n
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["index", "--newick", ";", "--stdin"]); // two sources
    assert_eq!(out.status.code(), Some(1));
}
