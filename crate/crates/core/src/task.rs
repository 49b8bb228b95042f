// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::fmt;

use crate::itemset::Itemset;

/// Identifier assigned to a task when it is spawned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct TaskId(pub u64);

/// Policy-specific payload attached to a task.
///
/// The priority policy reads `Rank`; the clustered policy reads `Itemset`.
/// Every other policy ignores it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Priority {
    #[default]
    None,
    Rank(i64),
    Itemset(Itemset),
}

impl Priority {
    /// Rank used by the priority policy; payloads without a rank sort as 0.
    pub fn rank(&self) -> i64 {
        match self {
            Priority::Rank(r) => *r,
            _ => 0,
        }
    }

    pub fn itemset(&self) -> Option<&Itemset> {
        match self {
            Priority::Itemset(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaskAttributes {
    pub priority: Priority,
    /// Queue the task is placed on, overriding spawner-local placement.
    pub affinity: Option<usize>,
}

impl TaskAttributes {
    pub fn with_priority(priority: Priority) -> Self {
        TaskAttributes {
            priority,
            affinity: None,
        }
    }

    pub fn rank(rank: i64) -> Self {
        Self::with_priority(Priority::Rank(rank))
    }

    pub fn itemset(itemset: Itemset) -> Self {
        Self::with_priority(Priority::Itemset(itemset))
    }

    pub fn on_worker(mut self, worker: usize) -> Self {
        self.affinity = Some(worker);
        self
    }
}

/// Anything a scheduling queue can hold. Queues only look at the attributes.
pub trait Schedulable: Send {
    fn attrs(&self) -> &TaskAttributes;
}

/// Failure reported by a task body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskError(pub String);

impl fmt::Display for TaskError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for TaskError {}

impl From<String> for TaskError {
    fn from(s: String) -> Self {
        TaskError(s)
    }
}

impl From<&str> for TaskError {
    fn from(s: &str) -> Self {
        TaskError(s.to_owned())
    }
}

type Work = Box<dyn FnOnce() -> Result<(), TaskError> + Send + 'static>;

/// A deferred unit of work. Results flow through state the closure captures.
pub struct Task {
    work: Work,
    attrs: TaskAttributes,
    id: TaskId,
}

impl Task {
    pub fn new<F>(attrs: TaskAttributes, f: F) -> Self
    where
        F: FnOnce() + Send + 'static,
    {
        Self::fallible(attrs, move || {
            f();
            Ok(())
        })
    }

    pub fn fallible<F>(attrs: TaskAttributes, f: F) -> Self
    where
        F: FnOnce() -> Result<(), TaskError> + Send + 'static,
    {
        Task {
            work: Box::new(f),
            attrs,
            id: TaskId(u64::MAX),
        }
    }

    pub fn id(&self) -> TaskId {
        self.id
    }

    pub(crate) fn set_id(&mut self, id: TaskId) {
        self.id = id;
    }

    pub(crate) fn into_work(self) -> Work {
        self.work
    }
}

impl Schedulable for Task {
    fn attrs(&self) -> &TaskAttributes {
        &self.attrs
    }
}

impl fmt::Debug for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Task")
            .field("id", &self.id)
            .field("attrs", &self.attrs)
            .finish_non_exhaustive()
    }
}
