// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use crossbeam_deque::{Steal, Stealer, Worker};
use parking_lot::Mutex;

use super::{PolicyError, StolenBatch, TaskQueue};
use crate::task::Schedulable;

/// Cilk-style work-stealing deque.
///
/// Backed by a Chase-Lev deque: the owner pushes and pops at the bottom,
/// thieves take from the top without locking. The owner half sits behind a
/// mutex only because external coordinators may also push to it.
pub struct CilkQueue<T> {
    owner: Mutex<Worker<T>>,
    stealer: Stealer<T>,
}

impl<T> CilkQueue<T> {
    pub fn new() -> Self {
        let w = Worker::new_lifo();
        let stealer = w.stealer();
        CilkQueue {
            owner: Mutex::new(w),
            stealer,
        }
    }
}

impl<T> Default for CilkQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Schedulable> TaskQueue<T> for CilkQueue<T> {
    fn put(&self, task: T) -> Result<(), PolicyError> {
        self.owner.lock().push(task);
        Ok(())
    }

    fn get(&self) -> Option<T> {
        self.owner.lock().pop()
    }

    fn steal(&self) -> StolenBatch<T> {
        loop {
            match self.stealer.steal() {
                Steal::Success(t) => return StolenBatch::single(Some(t)),
                Steal::Empty => return StolenBatch::empty(),
                Steal::Retry => std::hint::spin_loop(),
            }
        }
    }

    fn len(&self) -> usize {
        self.stealer.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::testing::Tagged;

    #[test]
    fn owner_newest_thief_oldest() {
        let q = CilkQueue::new();
        for i in 1..=3 {
            q.put(Tagged::plain(i)).unwrap();
        }
        assert_eq!(q.get().unwrap().tag, 3);
        let b = q.steal();
        assert_eq!(b.tasks.len(), 1);
        assert_eq!(b.tasks[0].tag, 1);
        assert_eq!(q.get().unwrap().tag, 2);
        assert!(q.get().is_none());
        assert!(q.steal().is_empty());
    }
}
