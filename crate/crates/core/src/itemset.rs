// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Items, itemsets, transaction databases and support thresholds.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// An item identifier as it appears in the input data.
pub type Item = u32;

/// A sorted, duplicate-free set of items.
///
/// Cloning is cheap: the items live behind an `Arc`, so the same itemset can
/// be handed to a task as its scheduling payload without copying.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itemset(Arc<[Item]>);

impl Itemset {
    /// Builds an itemset from arbitrary items, sorting and deduplicating them.
    pub fn new(items: impl IntoIterator<Item = Item>) -> Self {
        let mut v: Vec<Item> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Itemset(v.into())
    }

    /// Wraps items that are already sorted and unique.
    pub(crate) fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset(items.into())
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// True when `self` is a subset of the sorted slice `txn`.
    pub fn is_subset_of(&self, txn: &[Item]) -> bool {
        let mut it = txn.iter();
        self.0.iter().all(|x| it.any(|y| y == x))
    }
}

impl Deref for Itemset {
    type Target = [Item];
    fn deref(&self) -> &[Item] {
        &self.0
    }
}

impl fmt::Debug for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl Serialize for Itemset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A horizontal transaction database.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransactionDB {
    transactions: Vec<Vec<Item>>,
    n_items: usize,
}

impl TransactionDB {
    /// Normalizes every transaction (sort + dedup). The item universe is the
    /// set of items that occur at least once.
    pub fn new(transactions: impl IntoIterator<Item = Vec<Item>>) -> Self {
        let transactions: Vec<Vec<Item>> = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        let mut all: Vec<Item> = transactions.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        TransactionDB {
            n_items: all.len(),
            transactions,
        }
    }

    pub fn transactions(&self) -> &[Vec<Item>] {
        &self.transactions
    }

    /// Number of transactions (m).
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Number of distinct items occurring in the database.
    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn max_item(&self) -> Option<Item> {
        self.transactions.iter().filter_map(|t| t.last()).max().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("support fraction must be in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("absolute support count must be >= 1")]
    ZeroCount,
}

/// Minimum support, either relative to the number of transactions or absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportThreshold {
    Fraction(f64),
    Count(u32),
}

impl SupportThreshold {
    pub fn fraction(f: f64) -> Result<Self, ThresholdError> {
        if f > 0.0 && f <= 1.0 {
            Ok(SupportThreshold::Fraction(f))
        } else {
            Err(ThresholdError::BadFraction(f))
        }
    }

    pub fn count(c: u32) -> Result<Self, ThresholdError> {
        if c == 0 {
            Err(ThresholdError::ZeroCount)
        } else {
            Ok(SupportThreshold::Count(c))
        }
    }

    /// Absolute threshold for a database of `m` transactions: `ceil(f * m)`,
    /// never below 1. An itemset is frequent when its support is `>=` this.
    pub fn resolve(&self, m: usize) -> u32 {
        match *self {
            SupportThreshold::Count(c) => c.max(1),
            SupportThreshold::Fraction(f) => {
                let x = f * m as f64;
                let r = x.round();
                // 0.3 * 10 evaluates to 3.0000000000000004
                let t = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.ceil() };
                (t as u32).max(1)
            }
        }
    }
}
