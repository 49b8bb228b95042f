// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! A task-parallel runtime with pluggable scheduling policies, and an
//! Apriori frequent-itemset miner that runs its support counting on it.
//!
//! The pool ([`WorkerPool`]) owns one queue per worker. Which queue
//! discipline is used is picked at construction through [`PolicyKind`]:
//! Cilk-style deques, FIFO, LIFO, priority, or the clustered policy, which
//! groups itemset tasks by their (k-1)-prefix into hash buckets and lets
//! thieves take a whole bucket at a time.
//!
//! ```
//! use clusterfpm::{mine_parallel, mine_sequential, PolicyKind, SupportThreshold, TransactionDB, WorkerPool};
//!
//! let db = TransactionDB::new(vec![vec![1, 2, 3], vec![1, 2], vec![2, 3], vec![1, 2, 3]]);
//! let minsup = SupportThreshold::fraction(0.5).unwrap();
//! let pool = WorkerPool::new(4, PolicyKind::Clustered { buckets: 4096 }, 7).unwrap();
//! let levels = mine_parallel(&db, minsup, &pool).unwrap();
//! assert_eq!(levels, mine_sequential(&db, minsup));
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod apriori;
pub mod cli;
pub mod hash;
pub mod ingest;
pub mod itemset;
pub mod metrics;
pub mod policy;
pub mod runtime;
pub mod synth;
pub mod task;

pub use apriori::{
    build_vertical, count_support, generate_candidates, intersect, mine_parallel, mine_parallel_with,
    mine_sequential, LevelResult, MineError, MineOptions, MiningRun, Placement, VerticalIndex,
};
pub use hash::{cluster_hash, item_hash};
pub use ingest::{parse_fimi, read_fimi, write_itemsets, write_stats, StatsRecord};
pub use itemset::{Item, Itemset, SupportThreshold, TransactionDB};
pub use metrics::{RunMetrics, StealRecord, WorkerMetrics};
pub use policy::{PolicyKind, StolenBatch, TaskQueue};
pub use runtime::{current_worker, PoolConfig, PoolError, SpawnError, Spawner, WaitError, WorkerPool};
pub use task::{Priority, Task, TaskAttributes, TaskError, TaskId};
