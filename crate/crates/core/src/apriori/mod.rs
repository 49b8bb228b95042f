// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Level-synchronous Apriori.
//!
//! Level 1 is counted while building the vertical index. For every later
//! level the coordinator joins frequent (k-1)-itemsets that share their first
//! k-2 items, spawns one counting task per candidate, waits for the level to
//! drain, and keeps the candidates whose support reaches the threshold.
//!
//! Each counting task carries its itemset as the task priority, which is what
//! the clustered policy hashes to pick a bucket.

mod vertical;

use std::collections::HashSet;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::hash::cluster_hash;
use crate::itemset::{Itemset, SupportThreshold, TransactionDB};
use crate::metrics::RunMetrics;
use crate::policy::PolicyKind;
use crate::runtime::{SpawnError, TaskFailure, WaitError, WorkerPool};
use crate::task::{Task, TaskAttributes, TaskError};

pub use vertical::{build_vertical, count_support, intersect, intersect_into, MissingItem, Tid, VerticalIndex};

/// Frequent itemsets of one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelResult {
    pub k: usize,
    /// Sorted lexicographically by itemset.
    pub frequent: Vec<(Itemset, u32)>,
    pub candidates_counted: usize,
}

#[derive(Debug, Error)]
pub enum MineError {
    #[error(transparent)]
    Spawn(#[from] SpawnError),
    #[error("wait_all called from inside a pool worker")]
    FromWorker,
    #[error("{} counting task(s) failed, first: {}", .0.len(), .0[0].error)]
    TaskFailures(Vec<TaskFailure>),
}

impl From<WaitError> for MineError {
    fn from(e: WaitError) -> Self {
        match e {
            WaitError::FromWorker => MineError::FromWorker,
            WaitError::TaskFailures { failures, .. } => MineError::TaskFailures(failures),
        }
    }
}

/// Where counting tasks are queued.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// On the spawner's queue. The coordinator is not a worker, so this is
    /// worker 0 and the other workers get work only by stealing.
    #[default]
    Local,
    /// Affinity `cluster_hash mod nworkers` under the clustered policy,
    /// round-robin otherwise.
    Distributed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MineOptions {
    /// Drop candidates with an infrequent (k-1)-subset before counting.
    /// Changes the amount of work, never the result.
    pub prune: bool,
    pub placement: Placement,
}

/// Result of a parallel run, with timings and the pool counters it consumed.
#[derive(Debug, Clone)]
pub struct MiningRun {
    pub levels: Vec<LevelResult>,
    pub threshold: u32,
    pub metrics: RunMetrics,
}

/// Candidates for level k from the frequent (k-1)-itemsets.
pub fn generate_candidates(prev: &LevelResult) -> Vec<Itemset> {
    generate_candidates_with(prev, false)
}

pub fn generate_candidates_with(prev: &LevelResult, prune: bool) -> Vec<Itemset> {
    let sets: Vec<&[u32]> = prev.frequent.iter().map(|(s, _)| s.items()).collect();
    let prefix_len = prev.k.saturating_sub(1);
    let known: HashSet<&[u32]> = if prune { sets.iter().copied().collect() } else { HashSet::new() };

    let mut out = Vec::new();
    let mut start = 0;
    while start < sets.len() {
        let prefix = &sets[start][..prefix_len];
        let end = start + sets[start..].iter().take_while(|s| &s[..prefix_len] == prefix).count();
        for i in start..end {
            for j in i + 1..end {
                let mut items = sets[i].to_vec();
                items.push(sets[j][prefix_len]);
                if prune && !all_subsets_known(&items, &known) {
                    continue;
                }
                out.push(Itemset::from_sorted(items));
            }
        }
        start = end;
    }
    out
}

/// Every (k-1)-subset obtained by dropping one of the first k-2 items is in
/// `known`; the two remaining subsets are the join parents.
fn all_subsets_known(items: &[u32], known: &HashSet<&[u32]>) -> bool {
    let k = items.len();
    let mut buf = Vec::with_capacity(k - 1);
    (0..k.saturating_sub(2)).all(|skip| {
        buf.clear();
        buf.extend(items.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x));
        known.contains(buf.as_slice())
    })
}

fn filter_level(k: usize, candidates: Vec<Itemset>, supports: &[u32], threshold: u32) -> LevelResult {
    let candidates_counted = candidates.len();
    let frequent = candidates
        .into_iter()
        .zip(supports)
        .filter(|&(_, &s)| s >= threshold)
        .map(|(c, &s)| (c, s))
        .collect();
    LevelResult {
        k,
        frequent,
        candidates_counted,
    }
}

/// Runs the level loop with `count` supplying the supports of each level's
/// candidates. Returns the levels and the wall time spent in each.
fn run_levels<F>(
    db: &TransactionDB,
    minsup: SupportThreshold,
    prune: bool,
    mut count: F,
) -> Result<(Vec<LevelResult>, Vec<Duration>), MineError>
where
    F: FnMut(&[Itemset], &Arc<VerticalIndex>) -> Result<Vec<u32>, MineError>,
{
    let threshold = minsup.resolve(db.len());
    let t0 = Instant::now();
    let (index, level1) = build_vertical(db, minsup);
    let index = Arc::new(index);
    let mut times = vec![t0.elapsed()];
    let mut levels = vec![level1];

    loop {
        let prev = levels.last().expect("level 1 is always present");
        if prev.frequent.is_empty() {
            break;
        }
        let t = Instant::now();
        let candidates = generate_candidates_with(prev, prune);
        if candidates.is_empty() {
            break;
        }
        let supports = count(&candidates, &index)?;
        let level = filter_level(prev.k + 1, candidates, &supports, threshold);
        times.push(t.elapsed());
        levels.push(level);
    }
    Ok((levels, times))
}

/// Single-threaded Apriori; the reference for every parallel run.
pub fn mine_sequential(db: &TransactionDB, minsup: SupportThreshold) -> Vec<LevelResult> {
    mine_sequential_with(db, minsup, false)
}

pub fn mine_sequential_with(db: &TransactionDB, minsup: SupportThreshold, prune: bool) -> Vec<LevelResult> {
    let (levels, _) = run_levels(db, minsup, prune, |cands, index| {
        Ok(cands
            .iter()
            .map(|c| count_support(c, index).expect("candidates are built from indexed items"))
            .collect())
    })
    .expect("sequential counting cannot fail");
    levels
}

/// Parallel Apriori with default options.
pub fn mine_parallel(
    db: &TransactionDB,
    minsup: SupportThreshold,
    pool: &WorkerPool,
) -> Result<Vec<LevelResult>, MineError> {
    mine_parallel_with(db, minsup, pool, MineOptions::default()).map(|r| r.levels)
}

pub fn mine_parallel_with(
    db: &TransactionDB,
    minsup: SupportThreshold,
    pool: &WorkerPool,
    opts: MineOptions,
) -> Result<MiningRun, MineError> {
    let start_metrics = pool.metrics();
    let t0 = Instant::now();
    let (levels, times) = run_levels(db, minsup, opts.prune, |cands, index| {
        count_level(pool, cands, index, opts.placement)
    })?;
    let total_wall = t0.elapsed();

    let mut metrics = pool.metrics().since(&start_metrics);
    metrics.level_wall = times;
    metrics.total_wall = total_wall;
    Ok(MiningRun {
        levels,
        threshold: minsup.resolve(db.len()),
        metrics,
    })
}

fn count_level(
    pool: &WorkerPool,
    candidates: &[Itemset],
    index: &Arc<VerticalIndex>,
    placement: Placement,
) -> Result<Vec<u32>, MineError> {
    let slots: Arc<[AtomicU32]> = candidates.iter().map(|_| AtomicU32::new(0)).collect();
    let n = pool.nworkers();
    let clustered = matches!(pool.policy(), PolicyKind::Clustered { .. });

    for (i, cand) in candidates.iter().enumerate() {
        let mut attrs = TaskAttributes::itemset(cand.clone());
        if placement == Placement::Distributed {
            attrs.affinity = Some(match cluster_hash(cand) {
                Ok(h) if clustered => (h % n as u64) as usize,
                _ => i % n,
            });
        }
        let (cand, index, slots) = (cand.clone(), Arc::clone(index), Arc::clone(&slots));
        pool.spawn(Task::fallible(attrs, move || {
            let s = count_support(&cand, &index).map_err(|e| TaskError(e.to_string()))?;
            slots[i].store(s, Ordering::Relaxed);
            Ok(())
        }))?;
    }
    pool.wait_all()?;
    Ok(slots.iter().map(|s| s.load(Ordering::Relaxed)).collect())
}

/// All frequent itemsets of a run, in level then lexicographic order.
pub fn flatten(levels: &[LevelResult]) -> Vec<(Itemset, u32)> {
    levels.iter().flat_map(|l| l.frequent.iter().cloned()).collect()
}
