// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Mine one synthetic dataset under every policy and compare wall time and
//! steal behaviour. Every policy must produce the same itemsets.
//!
//! Run with `cargo run --release --example policy_comparison`.

use clusterfpm::apriori::MineOptions;
use clusterfpm::synth::{patterned, PatternParams};
use clusterfpm::{mine_parallel_with, mine_sequential, PolicyKind, SupportThreshold, WorkerPool};

fn main() {
    let db = patterned(3, PatternParams::default());
    let minsup = SupportThreshold::fraction(0.02).unwrap();
    let expected = mine_sequential(&db, minsup);
    let total: usize = expected.iter().map(|l| l.frequent.len()).sum();
    println!("{} transactions, {total} frequent itemsets", db.len());
    println!("{:<16} {:>10} {:>8} {:>8} {:>12}", "policy", "wall", "steals", "stolen", "per steal");

    for kind in PolicyKind::all() {
        let pool = WorkerPool::new(8, kind, 42).unwrap();
        let run = mine_parallel_with(&db, minsup, &pool, MineOptions::default()).unwrap();
        assert_eq!(run.levels, expected, "{kind} disagrees with sequential");
        let t = run.metrics.totals();
        let per = t.tasks_stolen as f64 / t.steals_successful.max(1) as f64;
        println!(
            "{:<16} {:>10.2?} {:>8} {:>8} {:>12.1}",
            kind.to_string(),
            run.metrics.total_wall,
            t.steals_successful,
            t.tasks_stolen,
            per
        );
    }
}
