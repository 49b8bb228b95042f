// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! FIMI transaction files, frequent-itemset output and run statistics.
//!
//! A FIMI file has one transaction per non-empty line, each a list of
//! whitespace-separated non-negative integers. Items inside a transaction are
//! sorted and deduplicated on input.
//!
//! Itemset output is one line per frequent itemset, `i1 i2 ... (support)`,
//! ordered by level and then lexicographically. Stats are written as JSON.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::apriori::{LevelResult, MiningRun, Placement};
use crate::itemset::{Item, SupportThreshold, TransactionDB};
use crate::metrics::WorkerMetrics;
use crate::policy::PolicyKind;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason} `{token}`")]
    Parse {
        line: usize,
        token: String,
        reason: &'static str,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl IngestError {
    pub fn line(&self) -> Option<usize> {
        match self {
            IngestError::Parse { line, .. } => Some(*line),
            IngestError::Io(_) => None,
        }
    }
}

fn parse_token(tok: &str, line: usize) -> Result<Item, IngestError> {
    tok.parse::<Item>().map_err(|_| {
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let reason = match tok.strip_prefix('-') {
            Some(rest) if digits(rest) => "negative item",
            _ if digits(tok) => "item out of range",
            _ => "not an integer",
        };
        IngestError::Parse {
            line,
            token: tok.to_owned(),
            reason,
        }
    })
}

/// Reads a FIMI stream. Either the whole database parses or nothing is
/// returned; errors carry the 1-based line number.
pub fn parse_fimi<R: BufRead>(reader: R) -> Result<TransactionDB, IngestError> {
    let mut txns = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let items = line
            .split_whitespace()
            .map(|t| parse_token(t, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        if !items.is_empty() {
            txns.push(items);
        }
    }
    Ok(TransactionDB::new(txns))
}

pub fn read_fimi(path: impl AsRef<Path>) -> Result<TransactionDB, IngestError> {
    parse_fimi(BufReader::new(File::open(path)?))
}

/// Writes a database back out in FIMI format.
pub fn write_fimi<W: Write>(db: &TransactionDB, mut out: W) -> io::Result<()> {
    for txn in db.transactions() {
        let mut first = true;
        for item in txn {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{item}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_itemsets<W: Write>(results: &[LevelResult], out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    for level in results {
        for (set, support) in &level.frequent {
            for item in set.items() {
                write!(out, "{item} ")?;
            }
            writeln!(out, "({support})")?;
        }
    }
    out.flush()
}

/// The itemset file as a byte buffer.
pub fn itemsets_to_bytes(results: &[LevelResult]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_itemsets(results, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub k: usize,
    pub candidates: usize,
    pub frequent: usize,
    pub wall_time_s: f64,
}

/// One mining run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRecord {
    pub dataset: String,
    pub policy: PolicyKind,
    pub nworkers: usize,
    pub seed: u64,
    pub placement: Placement,
    pub minsup: SupportThreshold,
    pub threshold: u32,
    pub transactions: usize,
    pub levels: Vec<LevelStats>,
    pub total_wall_time_s: f64,
    pub workers: Vec<WorkerMetrics>,
    pub totals: WorkerMetrics,
}

impl StatsRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn from_run(
        dataset: &str,
        policy: PolicyKind,
        seed: u64,
        placement: Placement,
        minsup: SupportThreshold,
        transactions: usize,
        run: &MiningRun,
    ) -> Self {
        let levels = run
            .levels
            .iter()
            .zip(&run.metrics.level_wall)
            .map(|(l, t)| LevelStats {
                k: l.k,
                candidates: l.candidates_counted,
                frequent: l.frequent.len(),
                wall_time_s: t.as_secs_f64(),
            })
            .collect();
        StatsRecord {
            dataset: dataset.to_owned(),
            policy,
            nworkers: run.metrics.workers.len(),
            seed,
            placement,
            minsup,
            threshold: run.threshold,
            transactions,
            levels,
            total_wall_time_s: run.metrics.total_wall.as_secs_f64(),
            workers: run.metrics.workers.clone(),
            totals: run.metrics.totals(),
        }
    }

    /// Counting tasks spawned: every candidate above level 1.
    pub fn tasks_spawned(&self) -> usize {
        self.levels.iter().filter(|l| l.k > 1).map(|l| l.candidates).sum()
    }
}

/// Writes any serializable record as pretty JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(record: &T, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, record)?;
    out.write_all(b"\n")?;
    out.flush()
}

pub fn write_stats<W: Write>(record: &StatsRecord, out: W) -> io::Result<()> {
    write_json(record, out)
}
