// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::collections::HashMap;

use clusterfpm::apriori::{flatten, generate_candidates};
use clusterfpm::{
    build_vertical, count_support, mine_parallel, mine_sequential, Itemset, PolicyKind, SupportThreshold,
    TransactionDB, WorkerPool,
};
use proptest::prelude::*;

fn small_db() -> impl Strategy<Value = (TransactionDB, u32)> {
    (1usize..=40, 1u32..=10).prop_flat_map(|(m, n)| {
        (
            proptest::collection::vec(proptest::collection::vec(0..n, 0..=n as usize), m),
            1..=m as u32,
        )
            .prop_map(|(txns, t)| (TransactionDB::new(txns), t))
    })
}

fn subset_scan(db: &TransactionDB, set: &Itemset) -> u32 {
    db.transactions().iter().filter(|t| set.is_subset_of(t)).count() as u32
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn output_is_anti_monotone_closed((db, t) in small_db()) {
        let levels = mine_sequential(&db, SupportThreshold::Count(t));
        let support: HashMap<Vec<u32>, u32> =
            flatten(&levels).into_iter().map(|(s, n)| (s.to_vec(), n)).collect();
        for (set, n) in &support {
            prop_assert!(*n >= t);
            prop_assert_eq!(*n, subset_scan(&db, &Itemset::new(set.iter().copied())));
            if set.len() >= 2 {
                for skip in 0..set.len() {
                    let sub: Vec<u32> = set.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    let s = support.get(&sub);
                    prop_assert!(s.is_some(), "{:?} missing subset {:?}", set, sub);
                    prop_assert!(*s.unwrap() >= *n);
                }
            }
        }
        for level in &levels {
            prop_assert!(level.frequent.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn candidates_never_miss_a_frequent_itemset((db, t) in small_db()) {
        let levels = mine_sequential(&db, SupportThreshold::Count(t));
        for pair in levels.windows(2) {
            let cands = generate_candidates(&pair[0]);
            for (set, _) in &pair[1].frequent {
                prop_assert!(cands.contains(set));
            }
        }
        // the level after the last one has no frequent itemset at all
        let last = levels.last().unwrap();
        for c in generate_candidates(last) {
            prop_assert!(subset_scan(&db, &c) < t);
        }
    }

    #[test]
    fn intersection_support_equals_scan((db, _t) in small_db(), picks in proptest::collection::vec(0u32..10, 1..5)) {
        let (index, _) = build_vertical(&db, SupportThreshold::Count(1));
        let set = Itemset::new(picks);
        match count_support(&set, &index) {
            Ok(n) => prop_assert_eq!(n, subset_scan(&db, &set)),
            Err(e) => prop_assert_eq!(subset_scan(&db, &Itemset::new([e.0])), 0),
        }
    }
}

#[test]
fn parallel_equals_sequential_for_every_policy_and_width() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(12));
    let pools: Vec<WorkerPool> = PolicyKind::all()
        .into_iter()
        .flat_map(|p| [1, 2, 4, 8].map(move |n| (p, n)))
        .map(|(p, n)| WorkerPool::new(n, p, 99).unwrap())
        .collect();
    runner
        .run(&small_db(), |(db, t)| {
            let minsup = SupportThreshold::Count(t);
            let expected = mine_sequential(&db, minsup);
            for pool in &pools {
                prop_assert_eq!(&mine_parallel(&db, minsup, pool).unwrap(), &expected);
            }
            Ok(())
        })
        .unwrap();
}
