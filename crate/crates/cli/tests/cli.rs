//! End-to-end runs of the compiled binary: exit codes, output formats,
//! and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cutlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn jsonl(out: &Output) -> Vec<serde_json::Value> {
    stdout_of(out)
        .lines()
        .map(|line| serde_json::from_str(line).expect("each line parses as JSON"))
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("cutlab-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn same_invocation_streams_identical_bytes() {
    let args = [
        "foreach", "roundtrip", "--k", "2", "--beta", "4", "--n", "16", "--seed", "7",
        "--trials", "3", "--oracle", "noise:0.01",
    ];
    let first = cutlab(&args);
    let second = cutlab(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn roundtrip_accounts_for_every_bit() {
    let out = cutlab(&[
        "foreach", "roundtrip", "--k", "2", "--beta", "1", "--n", "8", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for rec in jsonl(&out) {
        let bits = rec["bit_count"].as_u64().unwrap();
        let failures = rec["failures"].as_u64().unwrap();
        let correct = rec["correct"].as_u64().unwrap();
        assert_eq!(correct, bits - failures, "exact oracle decodes all surviving bits");
        assert_eq!(rec["preset"], "desk");
        assert!(rec["constants"]["c_sample"].is_number(), "constants are spelled out");
    }
}

#[test]
fn unknown_flags_exit_one() {
    let out = cutlab(&["foreach", "roundtrip", "--definitely-not-a-flag", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_geometry_exits_two_with_a_suggestion() {
    let out = cutlab(&["foreach", "roundtrip", "--k", "2", "--beta", "1", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("try --n 8"), "stderr was: {err}");
}

#[test]
fn forall_roundtrip_reports_the_decided_side() {
    let out = cutlab(&[
        "forall", "roundtrip", "--d", "4", "--beta", "4", "--n", "32", "--seed", "11",
        "--trials", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out);
    assert_eq!(records.len(), 2);
    for rec in records {
        assert!(rec["side_decided"] == "high" || rec["side_decided"] == "low");
        assert_eq!(rec["correct"], true, "exact oracle decodes the promise side");
        assert!(rec["queries"].as_u64().unwrap() > 0);
    }
}

#[test]
fn estimate_reads_a_graph_file() {
    let path = temp_path("estimate.graph");
    let mut text = String::from("n 40 undirected\n");
    for v in 0..40usize {
        text.push_str(&format!("{} {}\n", v, (v + 1) % 40));
        text.push_str(&format!("{} {}\n", v, (v + 2) % 40));
    }
    std::fs::write(&path, text).unwrap();
    let out = cutlab(&[
        "mincut", "estimate", "--graph", path.to_str().unwrap(), "--eps", "0.25",
        "--seed", "3",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let rec = &jsonl(&out)[0];
    let k_hat = rec["k_hat"].as_f64().unwrap();
    assert!((3.0..=5.0).contains(&k_hat), "squared cycle cut is 4, got {k_hat}");
    assert!(rec["queries"]["neighbor"].as_u64().unwrap() > 0);
}

#[test]
fn missing_graph_file_exits_one() {
    let out = cutlab(&["mincut", "estimate", "--graph", "/nonexistent/g.txt", "--eps", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mincut_sweep_emits_the_fixed_columns() {
    let out = cutlab(&[
        "mincut", "sweep", "--n", "48,64", "--k", "2", "--eps", "0.3", "--runs", "2",
        "--seed", "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,k,eps,k_hat,degree_q,neighbor_q,adjacency_q,correct"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4, "2 cells x 2 runs");
    for row in rows {
        assert_eq!(row.split(',').count(), 9);
    }
}

#[test]
fn lemma_check_trials_emit_parseable_records() {
    let out = cutlab(&["twosum", "lemma-check", "--N", "16", "--trials", "4", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out);
    assert_eq!(records.len(), 4);
    for rec in &records {
        assert_eq!(rec["holds"], true);
        assert!(rec["mincut"].as_f64().is_some());
    }
}

#[test]
fn reduce_with_exact_estimator_recovers_the_count() {
    let out = cutlab(&[
        "twosum", "reduce", "--t", "16", "--L", "16", "--alpha", "4", "--eps", "0.25",
        "--seed", "13",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out);
    let summary = records.last().unwrap();
    assert_eq!(summary["answer"], summary["true_disjoint"].as_u64().unwrap() as f64);
    assert_eq!(summary["additive_error"], 0.0);
}

#[test]
fn mismatched_eps_exits_two_with_a_suggestion() {
    let out = cutlab(&[
        "twosum", "reduce", "--t", "16", "--L", "16", "--alpha", "4", "--eps", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("try --eps 0.25"), "stderr was: {err}");
}

#[test]
fn generic_sweep_substitutes_axes_and_derives_seeds() {
    let out = cutlab(&[
        "sweep", "--grid", "k=1,2", "--seed", "21", "--", "foreach", "roundtrip", "--k",
        "{k}", "--beta", "1", "--n", "8", "--oracle", "exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    assert_eq!(rows[0][col("cell.k")], "1");
    assert_eq!(rows[1][col("cell.k")], "2");
    assert_eq!(rows[0][col("bit_count")], "3");
    assert_eq!(rows[1][col("bit_count")], "9");
    assert_ne!(rows[0][col("seed")], rows[1][col("seed")], "cells get derived seeds");
}

#[test]
fn sweep_rejects_global_flags_in_the_template() {
    let out = cutlab(&[
        "sweep", "--grid", "k=1", "--", "foreach", "encode", "--k", "{k}", "--beta", "1",
        "--n", "4", "--seed", "9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_empty() {
    let path = temp_path("records.jsonl");
    let out = cutlab(&[
        "--out", path.to_str().unwrap(), "foreach", "encode", "--k", "1", "--beta", "1",
        "--n", "4", "--seed", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 1);
    serde_json::from_str::<serde_json::Value>(written.lines().next().unwrap()).unwrap();
}

#[test]
fn quick_selftest_passes_and_exits_zero() {
    let out = cutlab(&["selftest", "--quick", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let records = jsonl(&out);
    assert!(records.len() >= 8);
    assert!(records.iter().all(|r| r["pass"] == true));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[PASS]"), "human lines go to stderr");
}
