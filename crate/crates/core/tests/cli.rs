// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TOY: &str = "1 2 5\n2 3 4\n1 2 3 5\n1 2 3 4 5\n2 5\n1 3 5\n2 3 5\n1 2 3\n";

fn clusterfpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterfpm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_toy(dir: &Path) -> String {
    let p = dir.join("toy.dat");
    fs::write(&p, TOY).unwrap();
    p.to_string_lossy().into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn mine_output_is_policy_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let mut outputs = Vec::new();
    for policy in ["cilk", "clustered", "fifo", "lifo", "priority"] {
        let out = path(dir.path(), &format!("{policy}.txt"));
        let o = clusterfpm(&[
            "mine", "--input", &input, "--minsup", "0.25", "--policy", policy, "--threads", "8", "--out", &out,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(&out).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with("1 (5)\n2 (7)\n"), "{text}");
    assert!(text.contains("1 2 5 (3)\n"), "{text}");
}

#[test]
fn fractional_support_is_echoed_in_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let stats = path(dir.path(), "stats.json");
    let o = clusterfpm(&[
        "mine", "--input", &input, "--minsup", "0.25", "--policy", "clustered", "--threads", "8", "--stats", &stats,
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    // ceil(0.25 * 8)
    assert_eq!(v["threshold"], 2);
    assert_eq!(v["minsup"]["fraction"], 0.25);
    assert_eq!(v["transactions"], 8);
    assert_eq!(v["workers"].as_array().unwrap().len(), 8);
    assert_eq!(v["policy"]["name"], "clustered");
    assert_eq!(v["policy"]["buckets"], 4096);
    let executed: u64 = v["workers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["tasks_executed"].as_u64().unwrap())
        .sum();
    let tasks: u64 = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["k"].as_u64().unwrap() > 1)
        .map(|l| l["candidates"].as_u64().unwrap())
        .sum();
    assert_eq!(executed, tasks);
}

#[test]
fn bad_policy_is_usage_error() {
    let o = clusterfpm(&["mine", "--input", "x.dat", "--minsup", "0.5", "--policy", "roundrobin"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown policy"));
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "bad.dat");
    fs::write(&input, "1 2\n3 x\n").unwrap();
    let o = clusterfpm(&["mine", "--input", &input, "--minsup-count", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_input_fails() {
    let o = clusterfpm(&["mine", "--input", "/nonexistent/x.dat", "--minsup", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_reports_normalized_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let stats = path(dir.path(), "bench.json");
    let out = path(dir.path(), "items.txt");
    let o = clusterfpm(&[
        "bench", "--input", &input, "--minsup", "0.25", "--policy", "cilk,clustered", "--threads", "4", "--stats",
        &stats, "--out", &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("normalized to cilk"), "{stdout}");
    let rows: Vec<&str> = stdout
        .lines()
        .filter(|l| l.starts_with("cilk") || l.starts_with("clustered"))
        .collect();
    assert_eq!(rows.len(), 2, "{stdout}");

    let v: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    let policies = v["policies"].as_array().unwrap();
    assert_eq!(policies.len(), 2);
    assert_eq!(policies[0]["normalized"], 1.0);
    for p in policies {
        assert_eq!(p["wall_times_s"].as_array().unwrap().len(), 5);
        assert_eq!(p["runs"].as_array().unwrap().len(), 5);
        for run in p["runs"].as_array().unwrap() {
            let t = &run["totals"];
            assert!(t["tasks_stolen"].as_u64() >= t["steals_successful"].as_u64());
        }
    }
    assert!(fs::read_to_string(&out).unwrap().contains("1 2 (4)\n"));
}

#[test]
fn distributed_affinity_and_prune_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let a = path(dir.path(), "a.txt");
    let b = path(dir.path(), "b.txt");
    let stats = path(dir.path(), "s.json");
    let base = ["mine", "--input", &input, "--minsup-count", "2", "--policy", "clustered:64"];
    assert!(clusterfpm(&[&base[..], &["--out", &a, "--stats", &stats]].concat()).status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(v["policy"]["buckets"], 64);
    assert!(clusterfpm(&[&base[..], &["--out", &b, "--affinity", "distributed", "--prune"]].concat())
        .status
        .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
