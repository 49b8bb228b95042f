// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Software scheduling counters.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::Serialize;

use crate::task::TaskId;

#[derive(Debug, Default)]
pub(crate) struct WorkerCounters {
    pub tasks_executed: AtomicU64,
    pub steal_attempts: AtomicU64,
    pub steals_successful: AtomicU64,
    pub tasks_stolen: AtomicU64,
}

impl WorkerCounters {
    pub fn bump(c: &AtomicU64, by: u64) {
        // single writer per worker
        c.store(c.load(Ordering::Relaxed) + by, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> WorkerMetrics {
        WorkerMetrics {
            tasks_executed: self.tasks_executed.load(Ordering::Relaxed),
            steal_attempts: self.steal_attempts.load(Ordering::Relaxed),
            steals_successful: self.steals_successful.load(Ordering::Relaxed),
            tasks_stolen: self.tasks_stolen.load(Ordering::Relaxed),
        }
    }
}

/// Counters for one worker.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct WorkerMetrics {
    pub tasks_executed: u64,
    pub steal_attempts: u64,
    /// Steals that returned at least one task.
    pub steals_successful: u64,
    /// Tasks moved between workers by steals.
    pub tasks_stolen: u64,
}

impl WorkerMetrics {
    fn minus(&self, o: &WorkerMetrics) -> WorkerMetrics {
        WorkerMetrics {
            tasks_executed: self.tasks_executed - o.tasks_executed,
            steal_attempts: self.steal_attempts - o.steal_attempts,
            steals_successful: self.steals_successful - o.steals_successful,
            tasks_stolen: self.tasks_stolen - o.tasks_stolen,
        }
    }

    fn plus(&self, o: &WorkerMetrics) -> WorkerMetrics {
        WorkerMetrics {
            tasks_executed: self.tasks_executed + o.tasks_executed,
            steal_attempts: self.steal_attempts + o.steal_attempts,
            steals_successful: self.steals_successful + o.steals_successful,
            tasks_stolen: self.tasks_stolen + o.tasks_stolen,
        }
    }
}

/// Per-worker counters plus wall times of a mining run.
///
/// Snapshots from the pool are cumulative since pool creation; the timing
/// fields are filled in by the miner.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub workers: Vec<WorkerMetrics>,
    pub level_wall: Vec<Duration>,
    pub total_wall: Duration,
}

impl RunMetrics {
    /// Sum over all workers.
    pub fn totals(&self) -> WorkerMetrics {
        self.workers
            .iter()
            .fold(WorkerMetrics::default(), |acc, w| acc.plus(w))
    }

    /// Counter increments between `earlier` and `self`.
    pub fn since(&self, earlier: &RunMetrics) -> RunMetrics {
        let workers = self
            .workers
            .iter()
            .enumerate()
            .map(|(i, w)| match earlier.workers.get(i) {
                Some(e) => w.minus(e),
                None => *w,
            })
            .collect();
        RunMetrics {
            workers,
            level_wall: Vec::new(),
            total_wall: Duration::ZERO,
        }
    }
}

/// One instrumented steal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StealRecord {
    pub thief: usize,
    pub victim: usize,
    /// Bucket the batch came from, for bucketed policies.
    pub bucket: Option<usize>,
    pub tasks: Vec<TaskId>,
}
