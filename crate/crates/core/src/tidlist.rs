//! Vertical TID-lists and the sorted-merge intersection used by Eclat, with
//! and without early stopping.
//!
//! A "comparison" is one execution of the merge loop body, i.e. one
//! three-way comparison between `U[i]` and `V[j]`.

use std::cmp::Ordering;

use crate::dataset::{item_frequencies, Item, Tid, TransactionDb};

/// Sorted, duplicate-free transaction identifiers of an itemset. Its length
/// is the itemset's support.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TidList(Vec<Tid>);

impl TidList {
    /// Wraps an already sorted, duplicate-free vector.
    pub fn from_sorted(tids: Vec<Tid>) -> Self {
        debug_assert!(tids.windows(2).all(|w| w[0] < w[1]));
        Self(tids)
    }

    pub fn as_slice(&self) -> &[Tid] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn into_vec(self) -> Vec<Tid> {
        self.0
    }
}

impl From<Vec<Tid>> for TidList {
    fn from(mut tids: Vec<Tid>) -> Self {
        tids.sort_unstable();
        tids.dedup();
        Self(tids)
    }
}

/// Result of one intersection call.
///
/// `cursor_u`/`cursor_v` are 0-based indices of the next unexamined element
/// of each operand when the loop ended (add one for 1-based positions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectOutcome {
    pub result: TidList,
    pub comparisons: u64,
    pub early_stopped: bool,
    pub skipped_u: usize,
    pub skipped_v: usize,
    pub cursor_u: usize,
    pub cursor_v: usize,
}

/// One `(item, TID-list)` pair per frequent item, ascending by frequency
/// (ties by item id).
pub fn build_tidlists(db: &TransactionDb, min_sup: u32) -> Vec<(Item, TidList)> {
    let freq = item_frequencies(db);
    let mut lists: std::collections::BTreeMap<Item, Vec<Tid>> = freq
        .iter()
        .filter(|&(_, &f)| f >= min_sup)
        .map(|(&i, &f)| (i, Vec::with_capacity(f as usize)))
        .collect();
    for (tid, items) in db.iter() {
        for item in items {
            if let Some(list) = lists.get_mut(item) {
                list.push(tid);
            }
        }
    }
    let mut out: Vec<(Item, TidList)> = lists
        .into_iter()
        .map(|(i, tids)| (i, TidList(tids)))
        .collect();
    out.sort_by_key(|(i, t)| (t.len(), *i));
    out
}

/// Plain sorted-merge intersection, `O(|U| + |V|)`.
pub fn intersect(u: &TidList, v: &TidList) -> IntersectOutcome {
    let (u, v) = (u.as_slice(), v.as_slice());
    let mut z = Vec::with_capacity(u.len().min(v.len()));
    let (mut i, mut j) = (0, 0);
    let mut comparisons = 0u64;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        match u[i].cmp(&v[j]) {
            Ordering::Equal => {
                z.push(u[i]);
                i += 1;
                j += 1;
            }
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
        }
    }
    IntersectOutcome {
        result: TidList(z),
        comparisons,
        early_stopped: false,
        skipped_u: 0,
        skipped_v: 0,
        cursor_u: i,
        cursor_v: j,
    }
}

/// Early-stopping intersection.
///
/// Counts the elements of each operand that were passed over without a
/// match. Once `|U| - skipped_u` or `|V| - skipped_v` drops below `min_sup`
/// the intersection can no longer reach `min_sup`, and the loop breaks with
/// the partial result.
pub fn intersect_es(u: &TidList, v: &TidList, min_sup: u32) -> IntersectOutcome {
    let (u, v) = (u.as_slice(), v.as_slice());
    let min_sup = min_sup as usize;
    let mut z = Vec::with_capacity(u.len().min(v.len()));
    let (mut i, mut j) = (0, 0);
    let (mut s_u, mut s_v) = (0, 0);
    let mut comparisons = 0u64;
    let mut early_stopped = false;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        match u[i].cmp(&v[j]) {
            Ordering::Equal => {
                z.push(u[i]);
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                i += 1;
                s_u += 1;
                if u.len() - s_u < min_sup {
                    early_stopped = true;
                    break;
                }
            }
            Ordering::Greater => {
                j += 1;
                s_v += 1;
                if v.len() - s_v < min_sup {
                    early_stopped = true;
                    break;
                }
            }
        }
    }
    IntersectOutcome {
        result: TidList(z),
        comparisons,
        early_stopped,
        skipped_u: s_u,
        skipped_v: s_v,
        cursor_u: i,
        cursor_v: j,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn tl(v: &[Tid]) -> TidList {
        TidList::from_sorted(v.to_vec())
    }

    #[test]
    fn vertical_format_of_running_example() {
        let lists = build_tidlists(&running_example(), 3);
        let want = vec![
            (B, tl(&[2, 7, 9])),
            (D, tl(&[1, 2, 4, 6, 8, 10])),
            (A, tl(&[1, 3, 4, 5, 6, 8, 10])),
            (C, tl(&[2, 3, 4, 6, 7, 8, 9])),
            (E, tl(&[1, 3, 4, 5, 8, 9, 10])),
        ];
        assert_eq!(lists, want);
        assert!(build_tidlists(&TransactionDb::default(), 1).is_empty());
        assert!(build_tidlists(&running_example(), 8).is_empty());
    }

    #[test]
    fn plain_intersections() {
        let a = tl(&[1, 3, 4, 5, 6, 8, 10]);
        let c = tl(&[2, 3, 4, 6, 7, 8, 9]);
        assert_eq!(intersect(&a, &c).result, tl(&[3, 4, 6, 8]));
        let da = tl(&[1, 4, 6, 8, 10]);
        let dc = tl(&[2, 4, 6, 8]);
        assert_eq!(intersect(&da, &dc).result, tl(&[4, 6, 8]));
        let out = intersect(&a, &TidList::default());
        assert!(out.result.is_empty());
        assert_eq!(out.comparisons, 0);
    }

    #[test]
    fn early_stop_on_b_and_d() {
        let b = tl(&[2, 7, 9]);
        let d = tl(&[1, 2, 4, 6, 8, 10]);
        let es = intersect_es(&b, &d, 3);
        assert!(es.early_stopped);
        // 1-based i = 3, j = 5
        assert_eq!((es.cursor_u + 1, es.cursor_v + 1), (3, 5));
        assert_eq!((es.skipped_u, es.skipped_v), (1, 3));
        assert_eq!(es.result, tl(&[2]));
        assert_eq!(es.comparisons, 5);

        let full = intersect(&b, &d);
        assert_eq!((full.cursor_u + 1, full.cursor_v + 1), (4, 6));
        assert_eq!(full.comparisons, 7);
        assert_eq!(full.result, tl(&[2]));
    }

    #[test]
    fn early_stop_is_neutral_when_frequent() {
        let a = tl(&[1, 3, 4, 5, 6, 8, 10]);
        let c = tl(&[2, 3, 4, 6, 7, 8, 9]);
        let es = intersect_es(&a, &c, 3);
        assert!(!es.early_stopped);
        assert_eq!(es.result, intersect(&a, &c).result);

        let same = intersect_es(&a, &a, a.support());
        assert!(!same.early_stopped);
        assert_eq!(same.result, a);
        assert_eq!((same.skipped_u, same.skipped_v), (0, 0));
    }

    fn sorted_set() -> impl Strategy<Value = Vec<Tid>> {
        prop::collection::btree_set(1u32..60, 0..30).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn intersect_matches_hash_set(u in sorted_set(), v in sorted_set()) {
            let hv: HashSet<Tid> = v.iter().copied().collect();
            let want: Vec<Tid> = u.iter().copied().filter(|x| hv.contains(x)).collect();
            prop_assert_eq!(intersect(&tl(&u), &tl(&v)).result.into_vec(), want);
        }

        #[test]
        fn early_stop_decision_equivalence(u in sorted_set(), v in sorted_set(), min_sup in 1u32..20) {
            let (u, v) = (tl(&u), tl(&v));
            let full = intersect(&u, &v);
            let es = intersect_es(&u, &v, min_sup);
            prop_assert_eq!(es.result.support() >= min_sup, full.result.support() >= min_sup);
            prop_assert!(es.comparisons <= full.comparisons);
            if es.early_stopped {
                prop_assert!(full.result.support() < min_sup);
                prop_assert!(es.result.support() < min_sup);
            } else {
                prop_assert_eq!(&es.result, &full.result);
            }
        }
    }
}
