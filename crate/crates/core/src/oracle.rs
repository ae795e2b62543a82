//! Brute-force reference miner.
//!
//! Level-wise enumeration with subset pruning and support counted by scanning
//! every transaction. Slow on purpose; it shares no code with the kernels.

use std::collections::{BTreeMap, BTreeSet};

use crate::dataset::{Item, TransactionDb};
use crate::error::{Error, Result};

/// Refuse databases with more frequent items than this unless forced.
pub const MAX_FREQUENT_ITEMS: usize = 24;

/// Every frequent itemset (ascending item ids) with its support.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub entries: BTreeMap<Vec<Item>, u32>,
}

impl OracleResult {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, itemset: &[Item]) -> Option<u32> {
        self.entries.get(itemset).copied()
    }
}

/// Number of transactions containing every item of `itemset`; `n` for the
/// empty set.
pub fn support_of(db: &TransactionDb, itemset: &[Item]) -> u32 {
    db.transactions()
        .iter()
        .filter(|t| itemset.iter().all(|i| t.contains(i)))
        .count() as u32
}

/// Exhaustive mining up to `max_k` items per itemset (unbounded if `None`).
/// Refuses more than [`MAX_FREQUENT_ITEMS`] frequent items.
pub fn brute_force_mine(db: &TransactionDb, min_sup: u32, max_k: Option<usize>) -> Result<OracleResult> {
    mine_levelwise(db, min_sup, max_k, false)
}

/// [`brute_force_mine`] without the size guard.
pub fn brute_force_mine_forced(db: &TransactionDb, min_sup: u32, max_k: Option<usize>) -> Result<OracleResult> {
    mine_levelwise(db, min_sup, max_k, true)
}

fn mine_levelwise(db: &TransactionDb, min_sup: u32, max_k: Option<usize>, force: bool) -> Result<OracleResult> {
    let min_sup = min_sup.max(1);
    let max_k = max_k.unwrap_or(usize::MAX);
    let mut entries = BTreeMap::new();
    if max_k == 0 {
        return Ok(OracleResult { entries });
    }

    let mut level: Vec<Vec<Item>> = Vec::new();
    for &item in db.universe() {
        let s = support_of(db, &[item]);
        if s >= min_sup {
            entries.insert(vec![item], s);
            level.push(vec![item]);
        }
    }
    if !force && level.len() > MAX_FREQUENT_ITEMS {
        return Err(Error::OracleLimit {
            frequent_items: level.len(),
            limit: MAX_FREQUENT_ITEMS,
        });
    }

    let mut k = 1;
    while !level.is_empty() && k < max_k {
        let known: BTreeSet<&Vec<Item>> = level.iter().collect();
        let mut next = Vec::new();
        for (a_idx, a) in level.iter().enumerate() {
            for b in &level[a_idx + 1..] {
                if a[..k - 1] != b[..k - 1] {
                    continue;
                }
                let mut cand = a.clone();
                cand.push(b[k - 1]);
                cand.sort_unstable();
                let all_subsets_frequent = (0..cand.len()).all(|drop| {
                    let sub: Vec<Item> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != drop)
                        .map(|(_, &i)| i)
                        .collect();
                    known.contains(&sub)
                });
                if !all_subsets_frequent {
                    continue;
                }
                let s = support_of(db, &cand);
                if s >= min_sup {
                    next.push((cand, s));
                }
            }
        }
        next.sort();
        level = Vec::with_capacity(next.len());
        for (cand, s) in next {
            entries.insert(cand.clone(), s);
            level.push(cand);
        }
        k += 1;
    }
    Ok(OracleResult { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn support_examples() {
        let db = running_example();
        assert_eq!(support_of(&db, &[A, C]), 4);
        assert_eq!(support_of(&db, &[]), 10);
        assert_eq!(support_of(&db, &[A, B]), 0);
    }

    #[test]
    fn running_example_has_fifteen() {
        let db = running_example();
        let res = brute_force_mine(&db, 3, None).unwrap();
        assert_eq!(res.len(), 15);
        assert_eq!(res.get(&[A, C]), Some(4));
        assert_eq!(res.get(&[A, C, D]), Some(3));
        assert_eq!(res.get(&[A, D]), Some(5));
        assert_eq!(res.get(&[B, D]), None);
        assert!(brute_force_mine(&db, 11, None).unwrap().is_empty());
    }

    #[test]
    fn higher_threshold_checked_by_scan() {
        let db = running_example();
        let res = brute_force_mine(&db, 6, None).unwrap();
        assert_eq!(res.get(&[A]), Some(7));
        assert_eq!(res.get(&[C]), Some(7));
        assert_eq!(res.get(&[E]), Some(7));
        assert_eq!(res.get(&[D]), Some(6));
        assert_eq!(res.get(&[A, E]), Some(6));
        for (set, &s) in &res.entries {
            assert_eq!(support_of(&db, set), s);
            assert!(s >= 6);
        }
        assert_eq!(res.len(), 5);
    }

    #[test]
    fn max_k_limits_size() {
        let res = brute_force_mine(&running_example(), 3, Some(2)).unwrap();
        assert!(res.entries.keys().all(|k| k.len() <= 2));
        assert_eq!(res.len(), 5 + 7);
    }

    #[test]
    fn guard_refuses_wide_databases() {
        let db = TransactionDb::new([(0..30).collect::<Vec<Item>>()]);
        match brute_force_mine(&db, 1, Some(1)) {
            Err(Error::OracleLimit { frequent_items, limit }) => {
                assert_eq!((frequent_items, limit), (30, 24));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        assert_eq!(brute_force_mine_forced(&db, 1, Some(1)).unwrap().len(), 30);
    }

    fn arb_db() -> impl Strategy<Value = TransactionDb> {
        prop::collection::vec(prop::collection::vec(0u32..7, 0..6), 0..15)
            .prop_map(TransactionDb::new)
    }

    proptest! {
        #[test]
        fn monotone_and_exact(db in arb_db(), min_sup in 1u32..5) {
            let res = brute_force_mine(&db, min_sup, None).unwrap();
            for (x, &sx) in &res.entries {
                for (y, &sy) in &res.entries {
                    if x.iter().all(|i| y.contains(i)) {
                        prop_assert!(sy <= sx);
                    }
                }
            }
            // completeness against a full powerset scan
            let items: Vec<Item> = db.universe().iter().copied().collect();
            let mut count = 0;
            for mask in 1u32..(1 << items.len()) {
                let set: Vec<Item> = (0..items.len()).filter(|b| mask >> b & 1 == 1).map(|b| items[b]).collect();
                let s = support_of(&db, &set);
                if s >= min_sup {
                    count += 1;
                    prop_assert_eq!(res.get(&set), Some(s));
                }
            }
            prop_assert_eq!(res.len(), count);
        }
    }
}
