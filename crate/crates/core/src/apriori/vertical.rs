// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

//! Vertical (item -> transaction-id list) layout and tidlist joins.

use std::collections::HashMap;

use thiserror::Error;

use super::LevelResult;
use crate::itemset::{Item, Itemset, SupportThreshold, TransactionDB};

/// Transaction index within a [`TransactionDB`].
pub type Tid = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("item {0} is not in the vertical index")]
pub struct MissingItem(pub Item);

/// Tidlists of the frequent single items.
///
/// Frequent items get dense ids `0..n` in ascending item order; tidlists are
/// stored in a plain array indexed by dense id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerticalIndex {
    items: Vec<Item>,
    tidlists: Vec<Vec<Tid>>,
}

impl VerticalIndex {
    /// Frequent items, ascending.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dense_id(&self, item: Item) -> Option<usize> {
        self.items.binary_search(&item).ok()
    }

    pub fn tidlist(&self, item: Item) -> Option<&[Tid]> {
        self.dense_id(item).map(|d| self.tidlists[d].as_slice())
    }

    pub fn tidlist_dense(&self, dense: usize) -> &[Tid] {
        &self.tidlists[dense]
    }
}

/// One pass over `db`: build every item's tidlist, keep those with at least
/// `minsup` transactions. Every distinct item counts as a level-1 candidate.
pub fn build_vertical(db: &TransactionDB, minsup: SupportThreshold) -> (VerticalIndex, LevelResult) {
    let threshold = minsup.resolve(db.len());
    let mut lists: HashMap<Item, Vec<Tid>> = HashMap::new();
    for (tid, txn) in db.transactions().iter().enumerate() {
        for &item in txn {
            lists.entry(item).or_default().push(tid as Tid);
        }
    }
    let candidates = lists.len();
    let mut kept: Vec<(Item, Vec<Tid>)> = lists
        .into_iter()
        .filter(|(_, l)| l.len() >= threshold as usize)
        .collect();
    kept.sort_unstable_by_key(|(item, _)| *item);

    let frequent = kept
        .iter()
        .map(|(item, l)| (Itemset::from_sorted(vec![*item]), l.len() as u32))
        .collect();
    let (items, tidlists) = kept.into_iter().unzip();
    (
        VerticalIndex { items, tidlists },
        LevelResult {
            k: 1,
            frequent,
            candidates_counted: candidates,
        },
    )
}

/// Sorted intersection of two sorted, duplicate-free tidlists.
pub fn intersect(a: &[Tid], b: &[Tid]) -> Vec<Tid> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    intersect_into(a, b, &mut out);
    out
}

/// Linear merge of `a` and `b` into `out` (cleared first).
pub fn intersect_into(a: &[Tid], b: &[Tid], out: &mut Vec<Tid>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn intersect_count(a: &[Tid], b: &[Tid]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Support of `candidate`: the size of the join of its items' tidlists,
/// intersected left to right.
pub fn count_support(candidate: &[Item], index: &VerticalIndex) -> Result<u32, MissingItem> {
    let list = |item: Item| index.tidlist(item).ok_or(MissingItem(item));
    match candidate {
        [] => Ok(0),
        [x] => Ok(list(*x)?.len() as u32),
        [x, y] => Ok(intersect_count(list(*x)?, list(*y)?) as u32),
        [first, middle @ .., last] => {
            let mut acc = intersect(list(*first)?, list(middle[0])?);
            let mut scratch = Vec::with_capacity(acc.len());
            for &item in &middle[1..] {
                if acc.is_empty() {
                    break;
                }
                intersect_into(&acc, list(item)?, &mut scratch);
                std::mem::swap(&mut acc, &mut scratch);
            }
            let last = list(*last)?;
            Ok(intersect_count(&acc, last) as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy_db() -> TransactionDB {
        // {A,B}, {A}, {B,C} with A=0, B=1, C=2
        TransactionDB::new(vec![vec![0, 1], vec![0], vec![1, 2]])
    }

    #[test]
    fn build_vertical_threshold_two() {
        let (idx, l1) = build_vertical(&toy_db(), SupportThreshold::Count(2));
        assert_eq!(
            l1.frequent,
            vec![(Itemset::new([0]), 2), (Itemset::new([1]), 2)]
        );
        assert_eq!(idx.tidlist(0), Some(&[0, 1][..]));
        assert_eq!(idx.tidlist(1), Some(&[0, 2][..]));
        assert_eq!(idx.tidlist(2), None);
        assert_eq!(l1.candidates_counted, 3);
    }

    #[test]
    fn build_vertical_empty_db() {
        let (idx, l1) = build_vertical(&TransactionDB::default(), SupportThreshold::Count(1));
        assert!(idx.is_empty());
        assert!(l1.frequent.is_empty());
    }

    #[test]
    fn threshold_one_keeps_everything() {
        let (idx, l1) = build_vertical(&toy_db(), SupportThreshold::Count(1));
        assert_eq!(idx.items(), &[0, 1, 2]);
        assert_eq!(l1.frequent.len(), 3);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect(&[1, 3, 5], &[3, 5, 7]), vec![3, 5]);
        assert_eq!(intersect(&[1, 2], &[]), Vec::<Tid>::new());
        assert_eq!(intersect(&[4, 8, 9], &[4, 8, 9]), vec![4, 8, 9]);
    }

    #[test]
    fn count_support_by_hand() {
        // A={0,1,2}, B={1,2}, C={2,3}
        let db = TransactionDB::new(vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![2]]);
        let (idx, _) = build_vertical(&db, SupportThreshold::Count(1));
        assert_eq!(count_support(&[0, 1, 2], &idx), Ok(1));
        assert_eq!(count_support(&[0, 1], &idx), Ok(2));
        assert_eq!(count_support(&[2], &idx), Ok(2));
        assert_eq!(count_support(&[0, 9], &idx), Err(MissingItem(9)));
    }

    fn brute_support(db: &TransactionDB, items: &[Item]) -> u32 {
        let s = Itemset::new(items.iter().copied());
        db.transactions().iter().filter(|t| s.is_subset_of(t)).count() as u32
    }

    #[test]
    fn count_support_matches_subset_scan_on_six_items() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0FFEE);
        let txns: Vec<Vec<Item>> = (0..40)
            .map(|_| (0..6).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let db = TransactionDB::new(txns);
        let (idx, _) = build_vertical(&db, SupportThreshold::Count(1));
        for mask in 1u32..64 {
            let items: Vec<Item> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            let expected = brute_support(&db, &items);
            match count_support(&items, &idx) {
                Ok(s) => assert_eq!(s, expected, "{items:?}"),
                // an item that never occurs has no tidlist
                Err(MissingItem(x)) => assert_eq!(brute_support(&db, &[x]), 0),
            }
        }
    }

    fn sorted_set() -> impl Strategy<Value = Vec<Tid>> {
        proptest::collection::btree_set(0u32..200, 0..60).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn intersect_laws(a in sorted_set(), b in sorted_set(), c in sorted_set()) {
            let ab = intersect(&a, &b);
            prop_assert!(ab.len() <= a.len().min(b.len()));
            prop_assert_eq!(&ab, &intersect(&b, &a));
            prop_assert_eq!(intersect(&ab, &c), intersect(&a, &intersect(&b, &c)));
            prop_assert!(ab.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(intersect(&a, &a), a.clone());
            prop_assert_eq!(intersect_count(&a, &b), ab.len());
        }
    }
}
