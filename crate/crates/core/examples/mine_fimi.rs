// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Parse a FIMI-format file (or a built-in sample), mine it in parallel and
//! print the frequent itemsets plus a JSON stats record.
//!
//! Run with `cargo run --example mine_fimi [path] [minsup]`.

use std::io::{self, Cursor};

use clusterfpm::apriori::{MineOptions, Placement};
use clusterfpm::{
    mine_parallel_with, parse_fimi, read_fimi, write_itemsets, write_stats, PolicyKind, StatsRecord,
    SupportThreshold, WorkerPool,
};

const SAMPLE: &str = "\
1 2 5
2 3 4
1 2 3 5
1 2 3 4 5
2 5
1 3 5
2 3 5
1 2 3
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (name, db) = match args.next() {
        Some(path) => (path.clone(), read_fimi(&path)?),
        None => ("sample".to_string(), parse_fimi(Cursor::new(SAMPLE))?),
    };
    let minsup = SupportThreshold::fraction(args.next().map_or(Ok(0.25), |s| s.parse())?)?;

    let policy = PolicyKind::clustered(4096)?;
    let pool = WorkerPool::new(4, policy, 0)?;
    let opts = MineOptions {
        prune: true,
        placement: Placement::Local,
    };
    let run = mine_parallel_with(&db, minsup, &pool, opts)?;

    println!("{} transactions, threshold {}", db.len(), run.threshold);
    write_itemsets(&run.levels, io::stdout().lock())?;
    let stats = StatsRecord::from_run(&name, policy, 0, opts.placement, minsup, db.len(), &run);
    write_stats(&stats, io::stdout().lock())?;
    println!();
    Ok(())
}
