// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::collections::VecDeque;

use parking_lot::Mutex;

use super::{PolicyError, StolenBatch, TaskQueue};
use crate::task::Schedulable;

/// Owner takes the oldest task, thieves the newest.
pub struct FifoQueue<T> {
    inner: Mutex<VecDeque<T>>,
}

/// Owner takes the newest task, thieves the oldest.
pub struct LifoQueue<T> {
    inner: Mutex<VecDeque<T>>,
}

macro_rules! sequence_queue {
    ($name:ident, $owner:ident, $thief:ident) => {
        impl<T> $name<T> {
            pub fn new() -> Self {
                $name {
                    inner: Mutex::new(VecDeque::new()),
                }
            }
        }

        impl<T> Default for $name<T> {
            fn default() -> Self {
                Self::new()
            }
        }

        impl<T: Schedulable> TaskQueue<T> for $name<T> {
            fn put(&self, task: T) -> Result<(), PolicyError> {
                self.inner.lock().push_back(task);
                Ok(())
            }

            fn get(&self) -> Option<T> {
                self.inner.lock().$owner()
            }

            fn steal(&self) -> StolenBatch<T> {
                StolenBatch::single(self.inner.lock().$thief())
            }

            fn len(&self) -> usize {
                self.inner.lock().len()
            }
        }
    };
}

sequence_queue!(FifoQueue, pop_front, pop_back);
sequence_queue!(LifoQueue, pop_back, pop_front);
