// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Prefix hashing used to cluster itemset tasks.
//!
//! Every item is hashed with the splitmix64 finalizer, which is fixed so that
//! bucket assignments are identical across platforms, runs and languages. A
//! k-itemset's cluster hash is the XOR of the item hashes of its first `k - 1`
//! items, so itemsets that differ only in their last item always collide.

use crate::itemset::Item;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashError {
    #[error("cluster hash needs an itemset of size >= 2, got size {0}")]
    TooShort(usize),
}

/// splitmix64 finalizer applied to the item id.
#[inline]
pub fn item_hash(item: Item) -> u64 {
    let mut x = u64::from(item).wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// XOR of `item_hash` over all but the last item.
pub fn cluster_hash(items: &[Item]) -> Result<u64, HashError> {
    match items.split_last() {
        Some((_, prefix)) if !prefix.is_empty() => {
            Ok(prefix.iter().fold(0, |acc, &i| acc ^ item_hash(i)))
        }
        _ => Err(HashError::TooShort(items.len())),
    }
}
