// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Candidates that share a (k-1)-prefix hash to the same bucket, so the
//! clustered queue keeps them together and a thief takes them as a group.
//!
//! Run with `cargo run --example cluster_hash`.

use std::collections::BTreeMap;

use clusterfpm::{cluster_hash, item_hash, Itemset};

fn main() {
    for i in 0..4 {
        println!("item_hash({i}) = {:#018x}", item_hash(i));
    }

    let nbuckets = 4096u64;
    let sets = [
        [1, 2, 3],
        [1, 2, 7],
        [1, 2, 9],
        [1, 4, 5],
        [1, 4, 9],
        [3, 8, 11],
        [3, 8, 12],
    ];
    let mut by_bucket: BTreeMap<u64, Vec<Vec<u32>>> = BTreeMap::new();
    for s in sets {
        let set = Itemset::new(s);
        let b = cluster_hash(&set).unwrap() % nbuckets;
        by_bucket.entry(b).or_default().push(set.to_vec());
    }
    for (b, group) in by_bucket {
        println!("bucket {b:>4}: {group:?}");
    }

    // single items have no prefix to cluster on
    println!("{}", cluster_hash(&[5]).unwrap_err());
}
