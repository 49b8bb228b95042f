// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Recursive fork/join: tasks spawn children through a cloned `Spawner`.
//! Children land on the spawning worker's queue; idle workers steal them.
//!
//! Run with `cargo run --example nested_spawn`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use clusterfpm::{PolicyKind, Spawner, Task, TaskAttributes, WorkerPool};

fn fib(n: u64) -> u64 {
    if n < 2 {
        n
    } else {
        fib(n - 1) + fib(n - 2)
    }
}

fn split(sp: Spawner, n: u64, acc: Arc<AtomicU64>) {
    if n < 18 {
        acc.fetch_add(fib(n), Ordering::Relaxed);
        return;
    }
    for m in [n - 1, n - 2] {
        let (sp2, acc) = (sp.clone(), Arc::clone(&acc));
        sp.spawn(Task::new(TaskAttributes::default(), move || split(sp2, m, acc)))
            .unwrap();
    }
}

fn main() {
    let n = 30;
    for policy in [PolicyKind::Cilk, PolicyKind::Fifo, PolicyKind::Lifo] {
        let pool = WorkerPool::new(4, policy, 1).unwrap();
        let acc = Arc::new(AtomicU64::new(0));
        let (sp, a) = (pool.spawner(), Arc::clone(&acc));
        let t0 = Instant::now();
        pool.spawn(Task::new(TaskAttributes::default(), move || split(sp, n, a)))
            .unwrap();
        let m = pool.wait_all().unwrap();
        let t = m.totals();
        println!(
            "{:<6} fib({n}) = {} in {:.2?}: {} tasks, {} steals",
            policy.to_string(),
            acc.load(Ordering::Relaxed),
            t0.elapsed(),
            t.tasks_executed,
            t.steals_successful
        );
    }
}
