// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! `clusterfpm mine` and `clusterfpm bench`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::apriori::{mine_parallel_with, MineError, MineOptions, MiningRun, Placement};
use crate::ingest::{itemsets_to_bytes, read_fimi, write_json, IngestError, StatsRecord};
use crate::itemset::{SupportThreshold, ThresholdError, TransactionDB};
use crate::policy::{PolicyError, PolicyKind};
use crate::runtime::{PoolError, WorkerPool};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: IngestError },
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("itemset output of {policy} run {run} differs from {baseline}")]
    OutputMismatch {
        policy: String,
        run: usize,
        baseline: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

impl From<ThresholdError> for CliError {
    fn from(e: ThresholdError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<PolicyError> for CliError {
    fn from(e: PolicyError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "clusterfpm", version, about = "Apriori frequent-itemset mining under pluggable task schedulers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine one dataset under one policy.
    Mine(MineArgs),
    /// Compare policies over repeated runs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// FIMI dataset file.
    #[arg(long)]
    input: PathBuf,
    /// Minimum support as a fraction of transactions.
    #[arg(long, group = "support", required_unless_present = "minsup_count")]
    minsup: Option<f64>,
    /// Minimum support as an absolute transaction count.
    #[arg(long, group = "support")]
    minsup_count: Option<u32>,
    #[arg(long, default_value_t = 8)]
    threads: usize,
    /// Bucket count for the clustered policy (power of two). Overrides a
    /// `clustered:<n>` policy spelling [default: 4096].
    #[arg(long)]
    buckets: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AffinityMode::Local)]
    affinity: AffinityMode,
    /// Prune candidates with an infrequent subset before counting.
    #[arg(long)]
    prune: bool,
    /// Frequent itemset output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON stats output file.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_parser = parse_policy, default_value = "clustered")]
    policy: PolicyKind,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated policies; runtimes are normalized to the first.
    #[arg(long, value_parser = parse_policy, value_delimiter = ',', default_value = "cilk,clustered")]
    policy: Vec<PolicyKind>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AffinityMode {
    Local,
    Distributed,
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse::<PolicyKind>().map_err(|e| e.to_string())
}

/// Validated settings for one `mine` or `bench` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub minsup: SupportThreshold,
    pub policies: Vec<PolicyKind>,
    pub nworkers: usize,
    pub seed: u64,
    pub repeats: usize,
    pub placement: Placement,
    pub prune: bool,
    pub out: Option<PathBuf>,
    pub stats: Option<PathBuf>,
}

impl RunConfig {
    fn from_args(c: CommonArgs, policies: Vec<PolicyKind>, repeats: usize) -> Result<Self, CliError> {
        let minsup = match (c.minsup, c.minsup_count) {
            (Some(f), None) => SupportThreshold::fraction(f)?,
            (None, Some(n)) => SupportThreshold::count(n)?,
            _ => return Err(CliError::Config("give exactly one of --minsup, --minsup-count".into())),
        };
        if c.threads == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        if repeats == 0 {
            return Err(CliError::Config("--repeats must be >= 1".into()));
        }
        if policies.is_empty() {
            return Err(CliError::Config("no policy given".into()));
        }
        let policies = match c.buckets {
            Some(n) => policies
                .into_iter()
                .map(|p| p.with_buckets(n))
                .collect::<Result<Vec<_>, _>>()?,
            None => policies,
        };
        Ok(RunConfig {
            input: c.input,
            minsup,
            policies,
            nworkers: c.threads,
            seed: c.seed,
            repeats,
            placement: match c.affinity {
                AffinityMode::Local => Placement::Local,
                AffinityMode::Distributed => Placement::Distributed,
            },
            prune: c.prune,
            out: c.out,
            stats: c.stats,
        })
    }

    fn options(&self) -> MineOptions {
        MineOptions {
            prune: self.prune,
            placement: self.placement,
        }
    }

    fn dataset_name(&self) -> String {
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }

    fn load(&self) -> Result<TransactionDB, CliError> {
        read_fimi(&self.input).map_err(|source| CliError::Input {
            path: self.input.clone(),
            source,
        })
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing human-readable output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Mine(a) => cmd_mine(&RunConfig::from_args(a.common, vec![a.policy], 1)?, out),
        Command::Bench(a) => cmd_bench(&RunConfig::from_args(a.common, a.policy, a.repeats)?, out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn mine_once(db: &TransactionDB, config: &RunConfig, policy: PolicyKind, seed: u64) -> Result<MiningRun, CliError> {
    // pool start-up stays outside the timed region
    let pool = WorkerPool::new(config.nworkers, policy, seed)?;
    Ok(mine_parallel_with(db, config.minsup, &pool, config.options())?)
}

/// Mines the input once with the first configured policy.
pub fn cmd_mine(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let db = config.load()?;
    let policy = config.policies[0];
    let run = mine_once(&db, config, policy, config.seed)?;
    let record = StatsRecord::from_run(
        &config.dataset_name(),
        policy,
        config.seed,
        config.placement,
        config.minsup,
        db.len(),
        &run,
    );

    if let Some(path) = &config.out {
        create(path)?.write_all(&itemsets_to_bytes(&run.levels))?;
    }
    if let Some(path) = &config.stats {
        write_json(&record, create(path)?)?;
    }

    let totals = run.metrics.totals();
    writeln!(
        out,
        "{}: {} transactions, threshold {}, policy {}, {} workers",
        record.dataset, record.transactions, record.threshold, policy, config.nworkers
    )?;
    for l in &record.levels {
        writeln!(
            out,
            "  k={:<2} candidates {:>9} frequent {:>9} {:>10.4}s",
            l.k, l.candidates, l.frequent, l.wall_time_s
        )?;
    }
    writeln!(
        out,
        "  total {:.4}s, steals {} ({} tasks, {} attempts)",
        record.total_wall_time_s, totals.steals_successful, totals.tasks_stolen, totals.steal_attempts
    )?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicyBench {
    pub policy: PolicyKind,
    pub wall_times_s: Vec<f64>,
    pub mean_s: f64,
    pub median_s: f64,
    /// Mean wall time over the baseline policy's mean.
    pub normalized: f64,
    pub median_steals_successful: f64,
    pub median_tasks_stolen: f64,
    pub median_steal_attempts: f64,
    pub runs: Vec<StatsRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub transactions: usize,
    pub minsup: SupportThreshold,
    pub threshold: u32,
    pub nworkers: usize,
    pub seed: u64,
    pub repeats: usize,
    pub placement: Placement,
    pub baseline: String,
    pub policies: Vec<PolicyBench>,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Runs every policy `repeats` times. Runs must all produce byte-identical
/// itemset output; otherwise nothing is reported and the command fails.
pub fn bench(db: &TransactionDB, config: &RunConfig, dataset: &str) -> Result<(BenchRecord, Vec<u8>), CliError> {
    let mut baseline_output: Option<Vec<u8>> = None;
    let mut policies = Vec::new();
    for &policy in &config.policies {
        let mut runs = Vec::with_capacity(config.repeats);
        for r in 0..config.repeats {
            let seed = config.seed.wrapping_add(r as u64);
            let run = mine_once(db, config, policy, seed)?;
            let bytes = itemsets_to_bytes(&run.levels);
            match &baseline_output {
                None => baseline_output = Some(bytes),
                Some(b) if *b != bytes => {
                    return Err(CliError::OutputMismatch {
                        policy: policy.to_string(),
                        run: r,
                        baseline: format!("{} run 0", config.policies[0]),
                    })
                }
                Some(_) => {}
            }
            runs.push(StatsRecord::from_run(
                dataset,
                policy,
                seed,
                config.placement,
                config.minsup,
                db.len(),
                &run,
            ));
        }
        let wall: Vec<f64> = runs.iter().map(|r| r.total_wall_time_s).collect();
        let med = |f: fn(&StatsRecord) -> u64| median(&runs.iter().map(|r| f(r) as f64).collect::<Vec<_>>());
        policies.push(PolicyBench {
            policy,
            mean_s: mean(&wall),
            median_s: median(&wall),
            normalized: f64::NAN,
            median_steals_successful: med(|r| r.totals.steals_successful),
            median_tasks_stolen: med(|r| r.totals.tasks_stolen),
            median_steal_attempts: med(|r| r.totals.steal_attempts),
            wall_times_s: wall,
            runs,
        });
    }
    let base = policies[0].mean_s;
    for p in &mut policies {
        p.normalized = if base > 0.0 { p.mean_s / base } else { f64::NAN };
    }
    let threshold = config.minsup.resolve(db.len());
    Ok((
        BenchRecord {
            dataset: dataset.to_owned(),
            transactions: db.len(),
            minsup: config.minsup,
            threshold,
            nworkers: config.nworkers,
            seed: config.seed,
            repeats: config.repeats,
            placement: config.placement,
            baseline: config.policies[0].to_string(),
            policies,
        },
        baseline_output.unwrap_or_default(),
    ))
}

pub fn write_bench_table(record: &BenchRecord, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{}: {} transactions, threshold {}, {} workers, {} runs per policy (normalized to {})",
        record.dataset, record.transactions, record.threshold, record.nworkers, record.repeats, record.baseline
    )?;
    writeln!(
        out,
        "{:<16} {:>10} {:>10} {:>10} {:>10} {:>12} {:>12}",
        "policy", "mean_s", "median_s", "normalized", "steals", "tasks_stolen", "attempts"
    )?;
    for p in &record.policies {
        writeln!(
            out,
            "{:<16} {:>10.4} {:>10.4} {:>10.3} {:>10} {:>12} {:>12}",
            p.policy.to_string(),
            p.mean_s,
            p.median_s,
            p.normalized,
            p.median_steals_successful,
            p.median_tasks_stolen,
            p.median_steal_attempts
        )?;
    }
    Ok(())
}

pub fn cmd_bench(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let db = config.load()?;
    let (record, itemsets) = bench(&db, config, &config.dataset_name())?;
    if let Some(path) = &config.out {
        create(path)?.write_all(&itemsets)?;
    }
    if let Some(path) = &config.stats {
        write_json(&record, create(path)?)?;
    }
    write_bench_table(&record, out)?;
    Ok(())
}
