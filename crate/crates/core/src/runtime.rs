// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Fixed-size worker pool with per-worker queues and random-victim stealing.
//!
//! Each worker owns one queue of the policy chosen at construction. A spawn
//! from inside a worker lands on that worker's queue; a spawn from any other
//! thread lands on worker 0's queue unless the task names an affinity. An idle
//! worker picks a uniformly random victim other than itself and steals from
//! it, backing off exponentially between failed rounds before it parks.
//!
//! Completion is tracked with one pool-wide counter of outstanding tasks;
//! [`WorkerPool::wait_all`] blocks until it reaches zero.

use std::any::Any;
use std::cell::Cell;
use std::io;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{fence, AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use crossbeam_utils::CachePadded;
use parking_lot::{Condvar, Mutex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::metrics::{RunMetrics, StealRecord, WorkerCounters};
use crate::policy::{PolicyError, PolicyKind, PolicyQueue, TaskQueue};
use crate::task::{Schedulable, Task, TaskError, TaskId};

const SPIN_ROUNDS: u32 = 6;
const YIELD_ROUNDS: u32 = 12;
const PARK_TIMEOUT: Duration = Duration::from_millis(20);

static NEXT_POOL_ID: AtomicUsize = AtomicUsize::new(1);

thread_local! {
    // (pool id, worker index) of the current thread
    static CURRENT: Cell<Option<(usize, usize)>> = const { Cell::new(None) };
}

/// Index of the worker running the current thread, if it is a pool worker.
pub fn current_worker() -> Option<usize> {
    CURRENT.with(|c| c.get()).map(|(_, w)| w)
}

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("a pool needs at least one worker")]
    NoWorkers,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("failed to start worker thread: {0}")]
    Spawn(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpawnError {
    #[error("pool has been shut down")]
    Shutdown,
    #[error("affinity {affinity} out of range for {nworkers} workers")]
    BadAffinity { affinity: usize, nworkers: usize },
    #[error(transparent)]
    Rejected(#[from] PolicyError),
}

/// A task body that returned an error or panicked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskFailure {
    pub task: TaskId,
    pub worker: usize,
    pub error: TaskError,
}

#[derive(Debug, Error)]
pub enum WaitError {
    #[error("wait_all called from inside a pool worker")]
    FromWorker,
    #[error("{} task(s) failed, first: {}", failures.len(), failures[0].error)]
    TaskFailures {
        failures: Vec<TaskFailure>,
        metrics: RunMetrics,
    },
}

/// Pool construction parameters.
#[derive(Debug, Clone)]
pub struct PoolConfig {
    pub nworkers: usize,
    pub policy: PolicyKind,
    /// Seeds the per-worker victim selection streams.
    pub rng_seed: u64,
    /// Keep a [`StealRecord`] for every successful steal.
    pub record_steals: bool,
}

impl PoolConfig {
    pub fn new(nworkers: usize, policy: PolicyKind, rng_seed: u64) -> Self {
        PoolConfig {
            nworkers,
            policy,
            rng_seed,
            record_steals: false,
        }
    }

    pub fn record_steals(mut self, on: bool) -> Self {
        self.record_steals = on;
        self
    }
}

struct Shared {
    id: usize,
    policy: PolicyKind,
    rng_seed: u64,
    queues: Vec<PolicyQueue<Task>>,
    counters: Vec<CachePadded<WorkerCounters>>,
    outstanding: CachePadded<AtomicUsize>,
    next_task: AtomicU64,
    shutdown: AtomicBool,
    sleepers: AtomicUsize,
    sleep_lock: Mutex<()>,
    wake: Condvar,
    done_lock: Mutex<()>,
    done: Condvar,
    failures: Mutex<Vec<TaskFailure>>,
    steal_log: Option<Mutex<Vec<StealRecord>>>,
}

impl Shared {
    fn nworkers(&self) -> usize {
        self.queues.len()
    }

    fn local_worker(&self) -> Option<usize> {
        match CURRENT.with(|c| c.get()) {
            Some((pool, w)) if pool == self.id => Some(w),
            _ => None,
        }
    }

    fn spawn(&self, mut task: Task) -> Result<TaskId, SpawnError> {
        if self.shutdown.load(Ordering::Acquire) {
            return Err(SpawnError::Shutdown);
        }
        let n = self.nworkers();
        let target = match task_affinity(&task) {
            Some(a) if a >= n => {
                return Err(SpawnError::BadAffinity {
                    affinity: a,
                    nworkers: n,
                })
            }
            Some(a) => a,
            None => self.local_worker().unwrap_or(0),
        };
        let queue = &self.queues[target];
        queue.accepts(Schedulable::attrs(&task))?;

        let id = TaskId(self.next_task.fetch_add(1, Ordering::Relaxed));
        task.set_id(id);
        self.outstanding.fetch_add(1, Ordering::SeqCst);
        if let Err(e) = queue.put(task) {
            self.finish_one();
            return Err(e.into());
        }

        fence(Ordering::SeqCst);
        if self.sleepers.load(Ordering::SeqCst) > 0 {
            let _g = self.sleep_lock.lock();
            self.wake.notify_one();
        }
        Ok(id)
    }

    fn finish_one(&self) {
        if self.outstanding.fetch_sub(1, Ordering::AcqRel) == 1 {
            let _g = self.done_lock.lock();
            self.done.notify_all();
        }
    }

    fn execute(&self, me: usize, task: Task) {
        let id = task.id();
        let work = task.into_work();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(work)) {
            Ok(r) => r,
            Err(payload) => Err(TaskError(panic_message(payload))),
        };
        if let Err(error) = outcome {
            self.failures.lock().push(TaskFailure {
                task: id,
                worker: me,
                error,
            });
        }
        WorkerCounters::bump(&self.counters[me].tasks_executed, 1);
        self.finish_one();
    }

    fn all_queues_empty(&self) -> bool {
        self.queues.iter().all(|q| q.is_empty())
    }

    fn metrics(&self) -> RunMetrics {
        RunMetrics {
            workers: self.counters.iter().map(|c| c.snapshot()).collect(),
            ..Default::default()
        }
    }

    fn worker_loop(&self, me: usize) {
        CURRENT.with(|c| c.set(Some((self.id, me))));
        let n = self.nworkers();
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(me as u64);
        let counters = &self.counters[me];
        let mut idle = 0u32;

        while !self.shutdown.load(Ordering::Acquire) {
            if let Some(task) = self.queues[me].get() {
                self.execute(me, task);
                idle = 0;
                continue;
            }

            if n > 1 {
                let victim = pick_victim(&mut rng, me, n);
                WorkerCounters::bump(&counters.steal_attempts, 1);
                let batch = self.queues[victim].steal();
                if !batch.is_empty() {
                    WorkerCounters::bump(&counters.steals_successful, 1);
                    WorkerCounters::bump(&counters.tasks_stolen, batch.len() as u64);
                    if let Some(log) = &self.steal_log {
                        log.lock().push(StealRecord {
                            thief: me,
                            victim,
                            bucket: batch.bucket,
                            tasks: batch.tasks.iter().map(Task::id).collect(),
                        });
                    }
                    for task in batch.tasks {
                        self.execute(me, task);
                    }
                    idle = 0;
                    continue;
                }
            }

            idle += 1;
            if idle <= SPIN_ROUNDS {
                for _ in 0..(1u32 << idle) {
                    std::hint::spin_loop();
                }
            } else if idle <= YIELD_ROUNDS {
                thread::yield_now();
            } else {
                self.park();
                idle = SPIN_ROUNDS;
            }
        }
        CURRENT.with(|c| c.set(None));
    }

    fn park(&self) {
        let mut g = self.sleep_lock.lock();
        self.sleepers.fetch_add(1, Ordering::SeqCst);
        if !self.shutdown.load(Ordering::SeqCst) && self.all_queues_empty() {
            self.wake.wait_for(&mut g, PARK_TIMEOUT);
        }
        self.sleepers.fetch_sub(1, Ordering::SeqCst);
    }
}

fn task_affinity(task: &Task) -> Option<usize> {
    Schedulable::attrs(task).affinity
}

/// Uniform over every worker except `me`. Requires `n >= 2`.
fn pick_victim<R: Rng>(rng: &mut R, me: usize, n: usize) -> usize {
    let v = rng.random_range(0..n - 1);
    if v >= me {
        v + 1
    } else {
        v
    }
}

fn panic_message(payload: Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("task panicked: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("task panicked: {s}")
    } else {
        "task panicked".to_owned()
    }
}

/// Cloneable handle for spawning into a pool, usable from task bodies.
#[derive(Clone)]
pub struct Spawner {
    shared: Arc<Shared>,
}

impl Spawner {
    pub fn spawn(&self, task: Task) -> Result<TaskId, SpawnError> {
        self.shared.spawn(task)
    }

    pub fn nworkers(&self) -> usize {
        self.shared.nworkers()
    }
}

pub struct WorkerPool {
    shared: Arc<Shared>,
    handles: Vec<JoinHandle<()>>,
}

impl WorkerPool {
    pub fn new(nworkers: usize, policy: PolicyKind, rng_seed: u64) -> Result<Self, PoolError> {
        Self::with_config(PoolConfig::new(nworkers, policy, rng_seed))
    }

    pub fn with_config(config: PoolConfig) -> Result<Self, PoolError> {
        if config.nworkers == 0 {
            return Err(PoolError::NoWorkers);
        }
        let queues = (0..config.nworkers)
            .map(|_| config.policy.build())
            .collect::<Result<Vec<_>, _>>()?;
        let shared = Arc::new(Shared {
            id: NEXT_POOL_ID.fetch_add(1, Ordering::Relaxed),
            policy: config.policy,
            rng_seed: config.rng_seed,
            queues,
            counters: (0..config.nworkers).map(|_| Default::default()).collect(),
            outstanding: CachePadded::new(AtomicUsize::new(0)),
            next_task: AtomicU64::new(0),
            shutdown: AtomicBool::new(false),
            sleepers: AtomicUsize::new(0),
            sleep_lock: Mutex::new(()),
            wake: Condvar::new(),
            done_lock: Mutex::new(()),
            done: Condvar::new(),
            failures: Mutex::new(Vec::new()),
            steal_log: config.record_steals.then(|| Mutex::new(Vec::new())),
        });

        let mut pool = WorkerPool {
            shared,
            handles: Vec::with_capacity(config.nworkers),
        };
        for me in 0..config.nworkers {
            let shared = Arc::clone(&pool.shared);
            let handle = thread::Builder::new()
                .name(format!("worker-{me}"))
                .spawn(move || shared.worker_loop(me))?;
            pool.handles.push(handle);
        }
        Ok(pool)
    }

    pub fn nworkers(&self) -> usize {
        self.shared.nworkers()
    }

    pub fn policy(&self) -> PolicyKind {
        self.shared.policy
    }

    pub fn rng_seed(&self) -> u64 {
        self.shared.rng_seed
    }

    pub fn spawner(&self) -> Spawner {
        Spawner {
            shared: Arc::clone(&self.shared),
        }
    }

    pub fn spawn(&self, task: Task) -> Result<TaskId, SpawnError> {
        self.shared.spawn(task)
    }

    /// Tasks spawned but not yet finished.
    pub fn outstanding(&self) -> usize {
        self.shared.outstanding.load(Ordering::Acquire)
    }

    pub fn queue_len(&self, worker: usize) -> usize {
        self.shared.queues[worker].len()
    }

    /// Blocks until every spawned task, including tasks spawned by tasks, has
    /// run. Failed task bodies are reported here after the pool drains.
    pub fn wait_all(&self) -> Result<RunMetrics, WaitError> {
        if self.shared.local_worker().is_some() {
            return Err(WaitError::FromWorker);
        }
        {
            let mut g = self.shared.done_lock.lock();
            while self.shared.outstanding.load(Ordering::Acquire) != 0 {
                self.shared.done.wait(&mut g);
            }
        }
        let failures = std::mem::take(&mut *self.shared.failures.lock());
        let metrics = self.shared.metrics();
        if failures.is_empty() {
            Ok(metrics)
        } else {
            Err(WaitError::TaskFailures { failures, metrics })
        }
    }

    /// Cumulative counters since the pool started.
    pub fn metrics(&self) -> RunMetrics {
        self.shared.metrics()
    }

    /// Drains the steal log. Empty unless the pool records steals.
    pub fn take_steal_log(&self) -> Vec<StealRecord> {
        match &self.shared.steal_log {
            Some(log) => std::mem::take(&mut *log.lock()),
            None => Vec::new(),
        }
    }

    /// Stops accepting tasks and tells workers to exit. Queued tasks that
    /// have not started are dropped without running.
    pub fn shutdown(&self) {
        self.shared.shutdown.store(true, Ordering::SeqCst);
        let _g = self.shared.sleep_lock.lock();
        self.shared.wake.notify_all();
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        self.shutdown();
        for h in self.handles.drain(..) {
            let _ = h.join();
        }
    }
}

impl std::fmt::Debug for WorkerPool {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WorkerPool")
            .field("nworkers", &self.nworkers())
            .field("policy", &self.policy())
            .field("outstanding", &self.outstanding())
            .finish()
    }
}
