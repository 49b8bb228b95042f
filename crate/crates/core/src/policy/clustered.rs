// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Bucketed hash-table queue with whole-bucket stealing.
//!
//! Tasks carry an itemset as their priority payload. The bucket is
//! `cluster_hash(itemset) mod nbuckets`, so every k-itemset sharing a
//! (k-1)-prefix lands in the same bucket. The owner drains buckets in
//! ascending order; a thief takes the entire lowest non-empty bucket.

use std::collections::VecDeque;

use parking_lot::Mutex;

use super::{PolicyError, StolenBatch, TaskQueue};
use crate::hash::cluster_hash;
use crate::task::{Schedulable, TaskAttributes};

pub const DEFAULT_BUCKETS: usize = 4096;

struct Table<T> {
    buckets: Vec<VecDeque<T>>,
    // bit b set <=> buckets[b] non-empty
    occupied: Vec<u64>,
    cursor: usize,
    len: usize,
}

impl<T> Table<T> {
    fn mark(&mut self, b: usize) {
        self.occupied[b / 64] |= 1 << (b % 64);
    }

    fn clear(&mut self, b: usize) {
        self.occupied[b / 64] &= !(1 << (b % 64));
    }

    /// Lowest non-empty bucket with index >= `from`.
    fn first_occupied_from(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.occupied.len() {
            return None;
        }
        let mut bits = self.occupied[w] & (!0u64 << (from % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.occupied.len() {
                return None;
            }
            bits = self.occupied[w];
        }
    }
}

pub struct ClusteredQueue<T> {
    inner: Mutex<Table<T>>,
    mask: u64,
}

impl<T> ClusteredQueue<T> {
    pub fn new(nbuckets: usize) -> Result<Self, PolicyError> {
        if !nbuckets.is_power_of_two() {
            return Err(PolicyError::BadBucketCount(nbuckets));
        }
        Ok(ClusteredQueue {
            inner: Mutex::new(Table {
                buckets: (0..nbuckets).map(|_| VecDeque::new()).collect(),
                occupied: vec![0; nbuckets.div_ceil(64)],
                cursor: 0,
                len: 0,
            }),
            mask: nbuckets as u64 - 1,
        })
    }

    pub fn nbuckets(&self) -> usize {
        self.mask as usize + 1
    }

    /// Bucket a task with these attributes is placed in.
    pub fn bucket_of(&self, attrs: &TaskAttributes) -> Result<usize, PolicyError> {
        let set = attrs.priority.itemset().ok_or(PolicyError::MissingItemset)?;
        let h = cluster_hash(set).map_err(|_| PolicyError::MissingItemset)?;
        Ok((h & self.mask) as usize)
    }

    /// Number of tasks currently in each bucket.
    pub fn bucket_lens(&self) -> Vec<usize> {
        self.inner.lock().buckets.iter().map(VecDeque::len).collect()
    }
}

impl<T: Schedulable> TaskQueue<T> for ClusteredQueue<T> {
    fn accepts(&self, attrs: &TaskAttributes) -> Result<(), PolicyError> {
        self.bucket_of(attrs).map(|_| ())
    }

    fn put(&self, task: T) -> Result<(), PolicyError> {
        let b = self.bucket_of(task.attrs())?;
        let mut t = self.inner.lock();
        t.buckets[b].push_back(task);
        t.mark(b);
        t.len += 1;
        Ok(())
    }

    fn get(&self) -> Option<T> {
        let mut t = self.inner.lock();
        if t.len == 0 {
            return None;
        }
        let b = match t.first_occupied_from(t.cursor) {
            Some(b) => b,
            // everything left sits below the cursor
            None => t.first_occupied_from(0)?,
        };
        t.cursor = b;
        let task = t.buckets[b].pop_front();
        if t.buckets[b].is_empty() {
            t.clear(b);
        }
        t.len -= 1;
        if t.len == 0 {
            t.cursor = 0;
        }
        task
    }

    fn steal(&self) -> StolenBatch<T> {
        let mut t = self.inner.lock();
        let Some(b) = t.first_occupied_from(0) else {
            return StolenBatch::empty();
        };
        let tasks: Vec<T> = std::mem::take(&mut t.buckets[b]).into();
        t.clear(b);
        t.len -= tasks.len();
        if t.len == 0 {
            t.cursor = 0;
        }
        StolenBatch {
            tasks,
            bucket: Some(b),
        }
    }

    fn len(&self) -> usize {
        self.inner.lock().len
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::item_hash;
    use crate::itemset::Itemset;
    use crate::policy::testing::Tagged;

    fn itemset_task(tag: usize, items: &[u32]) -> Tagged {
        Tagged {
            tag,
            attrs: TaskAttributes::itemset(Itemset::new(items.iter().copied())),
        }
    }

    /// A two-item task whose bucket (with 4096 buckets) is the golden
    /// `item_hash(first) mod 4096`.
    fn pair(tag: usize, first: u32) -> Tagged {
        itemset_task(tag, &[first, 1000])
    }

    #[test]
    fn golden_bucket_ids() {
        // item_hash(0..=3) mod 4096 from the splitmix64 reference
        let q: ClusteredQueue<Tagged> = ClusteredQueue::new(4096).unwrap();
        let expected = [3503, 3265, 1742, 4077];
        for (i, &b) in expected.iter().enumerate() {
            assert_eq!(q.bucket_of(&pair(0, i as u32).attrs).unwrap(), b);
            assert_eq!((item_hash(i as u32) % 4096) as usize, b);
        }
    }

    #[test]
    fn shared_prefix_same_bucket_in_order() {
        let q = ClusteredQueue::new(4096).unwrap();
        q.put(itemset_task(0, &[0, 1, 2])).unwrap();
        q.put(itemset_task(1, &[0, 1, 3])).unwrap();
        let lens = q.bucket_lens();
        assert_eq!(lens.iter().filter(|&&n| n > 0).count(), 1);
        assert_eq!(q.get().unwrap().tag, 0);
        assert_eq!(q.get().unwrap().tag, 1);
    }

    #[test]
    fn different_prefix_different_bucket() {
        // items 0 and 2 hash to buckets 3503 and 1742
        let q = ClusteredQueue::new(4096).unwrap();
        q.put(itemset_task(0, &[0, 1])).unwrap();
        q.put(itemset_task(1, &[2, 3])).unwrap();
        let lens = q.bucket_lens();
        assert_eq!(lens[3503], 1);
        assert_eq!(lens[1742], 1);
    }

    #[test]
    fn put_counts() {
        let q = ClusteredQueue::new(16).unwrap();
        q.put(itemset_task(0, &[1, 2])).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn rejects_missing_or_short_itemset() {
        let q = ClusteredQueue::new(16).unwrap();
        assert_eq!(q.put(Tagged::plain(0)), Err(PolicyError::MissingItemset));
        assert_eq!(
            q.put(itemset_task(0, &[5])),
            Err(PolicyError::MissingItemset)
        );
        assert!(q.is_empty());
    }

    #[test]
    fn bad_bucket_count() {
        assert!(ClusteredQueue::<Tagged>::new(3).is_err());
        assert!(ClusteredQueue::<Tagged>::new(0).is_err());
        assert!(ClusteredQueue::<Tagged>::new(1).is_ok());
    }

    #[test]
    fn steal_takes_first_nonempty_bucket_whole() {
        // buckets [.., 1742: {t1, t2}, .., 3265: {t3}]
        let q = ClusteredQueue::new(4096).unwrap();
        q.put(pair(1, 2)).unwrap();
        q.put(pair(3, 1)).unwrap();
        q.put(pair(2, 2)).unwrap();
        let b = q.steal();
        assert_eq!(b.bucket, Some(1742));
        assert_eq!(b.tasks.iter().map(|t| t.tag).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(q.len(), 1);
        let lens = q.bucket_lens();
        assert_eq!(lens[1742], 0);
        assert_eq!(lens[3265], 1);
        let b = q.steal();
        assert_eq!(b.bucket, Some(3265));
        assert_eq!(b.tasks[0].tag, 3);
        assert!(q.steal().is_empty());
    }

    #[test]
    fn steal_whole_bucket_of_five() {
        let q = ClusteredQueue::new(4096).unwrap();
        for i in 0..5 {
            q.put(itemset_task(i, &[7, 8, 9 + i as u32])).unwrap();
        }
        let b = q.steal();
        assert_eq!(b.len(), 5);
        assert!(q.is_empty());
    }

    #[test]
    fn owner_drains_ascending_buckets() {
        let q = ClusteredQueue::new(4096).unwrap();
        // buckets: item 3 -> 4077, item 0 -> 3503, item 2 -> 1742
        q.put(pair(0, 3)).unwrap();
        q.put(pair(1, 0)).unwrap();
        q.put(pair(2, 2)).unwrap();
        q.put(pair(3, 0)).unwrap();
        let order: Vec<_> = std::iter::from_fn(|| q.get()).map(|t| t.tag).collect();
        assert_eq!(order, vec![2, 1, 3, 0]);
    }

    #[test]
    fn cursor_is_monotone_until_wrap() {
        let q = ClusteredQueue::new(4096).unwrap();
        q.put(pair(0, 0)).unwrap(); // 3503
        q.put(pair(1, 3)).unwrap(); // 4077
        assert_eq!(q.get().unwrap().tag, 0);
        // lands below the cursor; owner continues upward first
        q.put(pair(2, 2)).unwrap(); // 1742
        assert_eq!(q.get().unwrap().tag, 1);
        assert_eq!(q.get().unwrap().tag, 2);
        assert!(q.get().is_none());
    }

    #[test]
    fn small_table_bitmap() {
        let q = ClusteredQueue::new(1).unwrap();
        for i in 0..3 {
            q.put(itemset_task(i, &[i as u32, 50])).unwrap();
        }
        assert_eq!(q.steal().len(), 3);
    }
}
