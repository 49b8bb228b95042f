// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Spawn a batch of tasks, wait for them, read back per-worker counters.
//!
//! Run with `cargo run --example pool_basics`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use clusterfpm::{current_worker, PolicyKind, Task, TaskAttributes, TaskError, WaitError, WorkerPool};

fn main() {
    let pool = WorkerPool::new(4, PolicyKind::Cilk, 7).expect("pool");
    let sum = Arc::new(AtomicU64::new(0));

    for i in 1..=10_000u64 {
        let sum = Arc::clone(&sum);
        pool.spawn(Task::new(TaskAttributes::default(), move || {
            sum.fetch_add(i, Ordering::Relaxed);
        }))
        .unwrap();
    }
    let metrics = pool.wait_all().unwrap();
    println!("sum = {}", sum.load(Ordering::Relaxed));
    for (w, m) in metrics.workers.iter().enumerate() {
        println!(
            "worker {w}: executed {:>5}, steals {}/{} attempts",
            m.tasks_executed, m.steals_successful, m.steal_attempts
        );
    }

    // Pin a task and observe where it ran.
    pool.spawn(Task::new(TaskAttributes::default().on_worker(2), || {
        println!("pinned task ran on worker {:?}", current_worker());
    }))
    .unwrap();
    pool.wait_all().unwrap();

    // Failures are collected and reported at the barrier.
    pool.spawn(Task::fallible(TaskAttributes::default(), || Err(TaskError("disk full".into()))))
        .unwrap();
    pool.spawn(Task::new(TaskAttributes::default(), || panic!("boom"))).unwrap();
    match pool.wait_all() {
        Err(WaitError::TaskFailures { failures, .. }) => {
            for f in failures {
                println!("task {:?} on worker {} failed: {}", f.task, f.worker, f.error.0);
            }
        }
        other => println!("unexpected: {other:?}"),
    }
}
