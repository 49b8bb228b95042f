// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use parking_lot::Mutex;

use super::{PolicyError, StolenBatch, TaskQueue};
use crate::task::Schedulable;

struct Entry<T> {
    rank: i64,
    seq: Reverse<u64>,
    task: T,
}

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.seq == other.seq
    }
}

impl<T> Eq for Entry<T> {}

impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, self.seq).cmp(&(other.rank, other.seq))
    }
}

struct Heap<T> {
    heap: BinaryHeap<Entry<T>>,
    next_seq: u64,
}

/// Max-rank first; equal ranks leave in insertion order. Owner and thief
/// both take from the top.
pub struct PriorityQueue<T> {
    inner: Mutex<Heap<T>>,
}

impl<T> PriorityQueue<T> {
    pub fn new() -> Self {
        PriorityQueue {
            inner: Mutex::new(Heap {
                heap: BinaryHeap::new(),
                next_seq: 0,
            }),
        }
    }
}

impl<T> Default for PriorityQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Schedulable> TaskQueue<T> for PriorityQueue<T> {
    fn put(&self, task: T) -> Result<(), PolicyError> {
        let rank = task.attrs().priority.rank();
        let mut h = self.inner.lock();
        let seq = Reverse(h.next_seq);
        h.next_seq += 1;
        h.heap.push(Entry { rank, seq, task });
        Ok(())
    }

    fn get(&self) -> Option<T> {
        self.inner.lock().heap.pop().map(|e| e.task)
    }

    fn steal(&self) -> StolenBatch<T> {
        StolenBatch::single(self.get())
    }

    fn len(&self) -> usize {
        self.inner.lock().heap.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::testing::Tagged;

    #[test]
    fn max_rank_with_fifo_ties() {
        let q = PriorityQueue::new();
        q.put(Tagged::ranked(0, 2)).unwrap();
        q.put(Tagged::ranked(1, 9)).unwrap();
        q.put(Tagged::ranked(2, 9)).unwrap();
        assert_eq!(q.get().unwrap().tag, 1);
        assert_eq!(q.get().unwrap().tag, 2);
        assert_eq!(q.get().unwrap().tag, 0);
    }

    #[test]
    fn steal_takes_max() {
        let q = PriorityQueue::new();
        q.put(Tagged::ranked(0, -5)).unwrap();
        q.put(Tagged::ranked(1, 3)).unwrap();
        assert_eq!(q.steal().tasks[0].tag, 1);
    }

    #[test]
    fn unranked_tasks_are_fifo() {
        let q = PriorityQueue::new();
        for i in 0..5 {
            q.put(Tagged::plain(i)).unwrap();
        }
        let order: Vec<_> = std::iter::from_fn(|| q.get()).map(|t| t.tag).collect();
        assert_eq!(order, vec![0, 1, 2, 3, 4]);
    }
}
