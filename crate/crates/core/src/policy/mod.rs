// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Scheduling policies.
//!
//! Every policy is a per-worker queue with an owner side (`put`, `get`) and a
//! thief side (`steal`). The pool builds one queue per worker from a
//! [`PolicyKind`] and drives all of them through [`TaskQueue`], so a new
//! discipline only has to implement that trait.
//!
//! | policy      | owner `get`            | thief `steal`                 |
//! |-------------|------------------------|-------------------------------|
//! | `cilk`      | newest                 | oldest, one task              |
//! | `fifo`      | oldest                 | newest, one task              |
//! | `lifo`      | newest                 | oldest, one task              |
//! | `priority`  | max rank, oldest first | max rank, one task            |
//! | `clustered` | bucket scan, drain     | first non-empty bucket, whole |

mod cilk;
mod clustered;
mod priority;
mod sequence;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::task::{Schedulable, TaskAttributes};

pub use cilk::CilkQueue;
pub use clustered::{ClusteredQueue, DEFAULT_BUCKETS};
pub use priority::PriorityQueue;
pub use sequence::{FifoQueue, LifoQueue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("unknown policy `{0}` (expected cilk, fifo, lifo, priority or clustered)")]
    UnknownPolicy(String),
    #[error("bucket count must be a power of two >= 1, got {0}")]
    BadBucketCount(usize),
    #[error("clustered policy needs an itemset priority of size >= 2")]
    MissingItemset,
}

/// Tasks removed by one steal. `bucket` is set by bucketed policies.
#[derive(Debug)]
pub struct StolenBatch<T> {
    pub tasks: Vec<T>,
    pub bucket: Option<usize>,
}

impl<T> StolenBatch<T> {
    pub fn empty() -> Self {
        StolenBatch {
            tasks: Vec::new(),
            bucket: None,
        }
    }

    pub fn single(task: Option<T>) -> Self {
        StolenBatch {
            tasks: task.into_iter().collect(),
            bucket: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }
}

/// The queue interface shared by all policies.
///
/// One owner thread calls `put` and `get`; any number of thieves may call
/// `steal` concurrently. Every task that is put is handed out exactly once.
pub trait TaskQueue<T: Schedulable>: Send + Sync {
    /// Checks that the queue can hold a task with these attributes.
    fn accepts(&self, _attrs: &TaskAttributes) -> Result<(), PolicyError> {
        Ok(())
    }

    fn put(&self, task: T) -> Result<(), PolicyError>;

    fn get(&self) -> Option<T>;

    fn steal(&self) -> StolenBatch<T>;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Policy selection plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum PolicyKind {
    Cilk,
    Fifo,
    Lifo,
    Priority,
    Clustered { buckets: usize },
}

impl PolicyKind {
    pub const ALL_NAMES: [&'static str; 5] = ["cilk", "fifo", "lifo", "priority", "clustered"];

    /// All five policies, clustered with the default bucket count.
    pub fn all() -> [PolicyKind; 5] {
        [
            PolicyKind::Cilk,
            PolicyKind::Fifo,
            PolicyKind::Lifo,
            PolicyKind::Priority,
            PolicyKind::Clustered {
                buckets: DEFAULT_BUCKETS,
            },
        ]
    }

    pub fn clustered(buckets: usize) -> Result<Self, PolicyError> {
        if buckets.is_power_of_two() {
            Ok(PolicyKind::Clustered { buckets })
        } else {
            Err(PolicyError::BadBucketCount(buckets))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Cilk => "cilk",
            PolicyKind::Fifo => "fifo",
            PolicyKind::Lifo => "lifo",
            PolicyKind::Priority => "priority",
            PolicyKind::Clustered { .. } => "clustered",
        }
    }

    /// Replaces the bucket count of a clustered policy; no-op otherwise.
    pub fn with_buckets(self, buckets: usize) -> Result<Self, PolicyError> {
        match self {
            PolicyKind::Clustered { .. } => Self::clustered(buckets),
            other => Ok(other),
        }
    }

    pub fn build<T: Schedulable + 'static>(&self) -> Result<PolicyQueue<T>, PolicyError> {
        Ok(match *self {
            PolicyKind::Cilk => PolicyQueue::Cilk(CilkQueue::new()),
            PolicyKind::Fifo => PolicyQueue::Fifo(FifoQueue::new()),
            PolicyKind::Lifo => PolicyQueue::Lifo(LifoQueue::new()),
            PolicyKind::Priority => PolicyQueue::Priority(PriorityQueue::new()),
            PolicyKind::Clustered { buckets } => {
                PolicyQueue::Clustered(ClusteredQueue::new(buckets)?)
            }
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Clustered { buckets } => write!(f, "clustered({buckets})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    /// Accepts the bare names, plus `clustered:<buckets>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "cilk" => Ok(PolicyKind::Cilk),
            "fifo" => Ok(PolicyKind::Fifo),
            "lifo" => Ok(PolicyKind::Lifo),
            "priority" => Ok(PolicyKind::Priority),
            "clustered" => Ok(PolicyKind::Clustered {
                buckets: DEFAULT_BUCKETS,
            }),
            other => match other.strip_prefix("clustered:") {
                Some(n) => {
                    let n = n
                        .parse()
                        .map_err(|_| PolicyError::UnknownPolicy(s.to_owned()))?;
                    Self::clustered(n)
                }
                None => Err(PolicyError::UnknownPolicy(s.to_owned())),
            },
        }
    }
}

/// Statically dispatched queue for any [`PolicyKind`].
pub enum PolicyQueue<T> {
    Cilk(CilkQueue<T>),
    Fifo(FifoQueue<T>),
    Lifo(LifoQueue<T>),
    Priority(PriorityQueue<T>),
    Clustered(ClusteredQueue<T>),
}

macro_rules! dispatch {
    ($self:ident, $q:ident => $e:expr) => {
        match $self {
            PolicyQueue::Cilk($q) => $e,
            PolicyQueue::Fifo($q) => $e,
            PolicyQueue::Lifo($q) => $e,
            PolicyQueue::Priority($q) => $e,
            PolicyQueue::Clustered($q) => $e,
        }
    };
}

impl<T: Schedulable> TaskQueue<T> for PolicyQueue<T> {
    fn accepts(&self, attrs: &TaskAttributes) -> Result<(), PolicyError> {
        dispatch!(self, q => q.accepts(attrs))
    }

    #[inline]
    fn put(&self, task: T) -> Result<(), PolicyError> {
        dispatch!(self, q => q.put(task))
    }

    #[inline]
    fn get(&self) -> Option<T> {
        dispatch!(self, q => q.get())
    }

    #[inline]
    fn steal(&self) -> StolenBatch<T> {
        dispatch!(self, q => q.steal())
    }

    #[inline]
    fn len(&self) -> usize {
        dispatch!(self, q => q.len())
    }
}


#[cfg(test)]
mod tests {
    use super::testing::Tagged;
    use super::*;

    #[test]
    fn parse_names() {
        for name in PolicyKind::ALL_NAMES {
            assert_eq!(name.parse::<PolicyKind>().unwrap().name(), name);
        }
        assert_eq!(
            "clustered:64".parse::<PolicyKind>().unwrap(),
            PolicyKind::Clustered { buckets: 64 }
        );
        assert_eq!(
            "CILK".parse::<PolicyKind>().unwrap(),
            PolicyKind::Cilk
        );
        assert!(matches!(
            "random".parse::<PolicyKind>(),
            Err(PolicyError::UnknownPolicy(_))
        ));
        assert_eq!(
            "clustered:100".parse::<PolicyKind>(),
            Err(PolicyError::BadBucketCount(100))
        );
        assert_eq!(PolicyKind::clustered(0), Err(PolicyError::BadBucketCount(0)));
    }

    #[test]
    fn all_policies_build_empty() {
        for kind in PolicyKind::all() {
            let q: PolicyQueue<Tagged> = kind.build().unwrap();
            assert!(q.is_empty());
            assert!(q.get().is_none());
            assert!(q.steal().is_empty());
        }
    }

    #[test]
    fn single_steal_policies_return_at_most_one() {
        for kind in [PolicyKind::Cilk, PolicyKind::Fifo, PolicyKind::Lifo, PolicyKind::Priority] {
            let q: PolicyQueue<Tagged> = kind.build().unwrap();
            for i in 0..10 {
                q.put(Tagged::plain(i)).unwrap();
            }
            let b = q.steal();
            assert_eq!(b.len(), 1, "{kind}");
            assert_eq!(q.len(), 9);
        }
    }
}
