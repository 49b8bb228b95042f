// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Seeded synthetic transaction databases.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::itemset::{Item, TransactionDB};

/// Every item independently present with probability `density`.
pub fn uniform(seed: u64, n_items: u32, n_transactions: usize, density: f64) -> TransactionDB {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TransactionDB::new(
        (0..n_transactions)
            .map(|_| (0..n_items).filter(|_| rng.random_bool(density)).collect())
            .collect::<Vec<_>>(),
    )
}

/// Parameters for [`patterned`]: transactions are unions of a few embedded
/// patterns plus uniform noise, in the spirit of the IBM Quest generator.
#[derive(Debug, Clone, Copy)]
pub struct PatternParams {
    pub n_items: u32,
    pub n_transactions: usize,
    pub n_patterns: usize,
    pub pattern_len: usize,
    pub patterns_per_txn: usize,
    pub noise_items: usize,
    /// Chance that each pattern item is dropped from a transaction.
    pub corruption: f64,
}

impl Default for PatternParams {
    fn default() -> Self {
        PatternParams {
            n_items: 200,
            n_transactions: 2000,
            n_patterns: 40,
            pattern_len: 6,
            patterns_per_txn: 3,
            noise_items: 4,
            corruption: 0.1,
        }
    }
}

pub fn patterned(seed: u64, p: PatternParams) -> TransactionDB {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Item> = (0..p.n_items).collect();
    let patterns: Vec<Vec<Item>> = (0..p.n_patterns)
        .map(|_| all.choose_multiple(&mut rng, p.pattern_len).copied().collect())
        .collect();
    let txns: Vec<Vec<Item>> = (0..p.n_transactions)
        .map(|_| {
            let mut t = Vec::new();
            for _ in 0..p.patterns_per_txn {
                if let Some(pat) = patterns.choose(&mut rng) {
                    t.extend(pat.iter().filter(|_| !rng.random_bool(p.corruption)));
                }
            }
            for _ in 0..p.noise_items {
                t.push(rng.random_range(0..p.n_items.max(1)));
            }
            t
        })
        .collect();
    TransactionDB::new(txns)
}
