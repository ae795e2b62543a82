//! Transaction databases: FIMI ingestion, item ordering, pruning, support
//! thresholds and a seeded synthetic generator.
//!
//! Transaction identifiers (TIDs) are 1-based positions in file order, so the
//! first line of a FIMI file is transaction 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// An item identifier. Ids carry no meaning beyond identity.
pub type Item = u32;

/// A 1-based transaction identifier.
pub type Tid = u32;

/// An immutable multiset of transactions.
///
/// Databases built through [`TransactionDb::new`] or [`parse_fimi`] hold each
/// transaction deduplicated and sorted by item id. [`reorder_and_prune`]
/// produces a database whose transactions follow an [`ItemOrder`] instead.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransactionDb {
    transactions: Vec<Vec<Item>>,
    universe: BTreeSet<Item>,
}

impl TransactionDb {
    /// Builds a database, sorting and deduplicating every transaction.
    pub fn new<I, T>(transactions: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = Item>,
    {
        let transactions = transactions
            .into_iter()
            .map(|t| {
                let mut items: Vec<Item> = t.into_iter().collect();
                items.sort_unstable();
                items.dedup();
                items
            })
            .collect();
        Self::from_raw(transactions)
    }

    fn from_raw(transactions: Vec<Vec<Item>>) -> Self {
        let universe = transactions.iter().flatten().copied().collect();
        Self {
            transactions,
            universe,
        }
    }

    /// Number of transactions, `n`.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[Vec<Item>] {
        &self.transactions
    }

    /// Iterates `(tid, items)` pairs with 1-based TIDs.
    pub fn iter(&self) -> impl Iterator<Item = (Tid, &[Item])> + '_ {
        self.transactions
            .iter()
            .enumerate()
            .map(|(idx, t)| (idx as Tid + 1, t.as_slice()))
    }

    pub fn universe(&self) -> &BTreeSet<Item> {
        &self.universe
    }

    /// Mean transaction length, 0 for an empty database.
    pub fn mean_len(&self) -> f64 {
        if self.transactions.is_empty() {
            return 0.0;
        }
        let total: usize = self.transactions.iter().map(Vec::len).sum();
        total as f64 / self.transactions.len() as f64
    }
}

/// Parses FIMI text: one transaction per line, whitespace separated
/// non-negative integer item ids, blank lines ignored.
pub fn parse_fimi(text: &str) -> Result<TransactionDb> {
    let mut transactions = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(t) = parse_line(line, idx + 1)? {
            transactions.push(t);
        }
    }
    Ok(TransactionDb::new(transactions))
}

/// Streaming counterpart of [`parse_fimi`].
pub fn read_fimi<R: BufRead>(reader: R) -> Result<TransactionDb> {
    let mut transactions = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        if let Some(t) = parse_line(&line?, idx + 1)? {
            transactions.push(t);
        }
    }
    Ok(TransactionDb::new(transactions))
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<Vec<Item>>> {
    if line.trim().is_empty() {
        return Ok(None);
    }
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<Item>().map_err(|_| {
                let message = match tok.parse::<i64>() {
                    Ok(v) if v < 0 => format!("negative item id `{tok}`"),
                    Ok(_) => format!("item id `{tok}` out of range"),
                    Err(_) => format!("invalid item id `{tok}`"),
                };
                Error::Parse {
                    line: line_no,
                    message,
                }
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Renders a database as FIMI text, items ascending by id.
pub fn write_fimi(db: &TransactionDb) -> String {
    let mut out = String::new();
    for t in db.transactions() {
        let mut items = t.clone();
        items.sort_unstable();
        for (k, item) in items.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{item}");
        }
        out.push('\n');
    }
    out
}

/// Number of transactions containing each item.
pub fn item_frequencies(db: &TransactionDb) -> BTreeMap<Item, u32> {
    let mut freq = BTreeMap::new();
    for t in db.transactions() {
        for &item in t {
            *freq.entry(item).or_insert(0) += 1;
        }
    }
    freq
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// A total order over the frequent items of a database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemOrder {
    items: Vec<Item>,
    rank: HashMap<Item, usize>,
    direction: Direction,
}

impl ItemOrder {
    fn from_items(items: Vec<Item>, direction: Direction) -> Self {
        let rank = items.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        Self {
            items,
            rank,
            direction,
        }
    }

    /// Items in order, position 0 first.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn rank(&self, item: Item) -> Option<usize> {
        self.rank.get(&item).copied()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The exact reverse order. Unlike recomputing with the opposite
    /// direction, this also reverses the tie-break among equal frequencies.
    pub fn reversed(&self) -> Self {
        let direction = match self.direction {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        };
        Self::from_items(self.items.iter().rev().copied().collect(), direction)
    }
}

/// Orders the items with frequency `>= min_sup` by frequency. Ties are broken
/// by ascending item id in both directions.
pub fn compute_order(db: &TransactionDb, min_sup: u32, direction: Direction) -> ItemOrder {
    let mut frequent: Vec<(Item, u32)> = item_frequencies(db)
        .into_iter()
        .filter(|&(_, f)| f >= min_sup)
        .collect();
    match direction {
        Direction::Ascending => frequent.sort_by_key(|&(item, f)| (f, item)),
        Direction::Descending => {
            frequent.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)))
        }
    }
    ItemOrder::from_items(frequent.into_iter().map(|(i, _)| i).collect(), direction)
}

/// Drops items absent from `order` and sorts each transaction by rank.
/// Transactions left empty are kept so that TIDs stay aligned.
pub fn reorder_and_prune(db: &TransactionDb, order: &ItemOrder) -> TransactionDb {
    let transactions = db
        .transactions()
        .iter()
        .map(|t| {
            let mut kept: Vec<(usize, Item)> = t
                .iter()
                .filter_map(|&i| order.rank(i).map(|r| (r, i)))
                .collect();
            kept.sort_unstable();
            kept.into_iter().map(|(_, i)| i).collect()
        })
        .collect();
    TransactionDb::from_raw(transactions)
}

/// A minimum support given either as a count or as a fraction of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportThreshold {
    Absolute(u32),
    Relative(f64),
}

impl SupportThreshold {
    pub fn absolute(count: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "absolute minimum support must be at least 1".into(),
            ));
        }
        Ok(Self::Absolute(count))
    }

    pub fn relative(fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "relative minimum support {fraction} is outside (0, 1]"
            )));
        }
        Ok(Self::Relative(fraction))
    }
}

/// Resolves a threshold against a database of `n` transactions.
///
/// Relative thresholds use `ceil(f * n)` ("at least" semantics); products
/// within 1e-9 of an integer snap to it first so that e.g. `0.3 * 10` gives 3.
/// The result is never below 1.
pub fn resolve_minsup(spec: SupportThreshold, n: usize) -> Result<u32> {
    let resolved = match spec {
        SupportThreshold::Absolute(count) => count,
        SupportThreshold::Relative(f) => {
            if n == 0 {
                return Err(Error::EmptyDatabase);
            }
            let exact = f * n as f64;
            let nearest = exact.round();
            let value = if (exact - nearest).abs() <= 1e-9 * exact.max(1.0) {
                nearest
            } else {
                exact.ceil()
            };
            value as u32
        }
    };
    Ok(resolved.max(1))
}

/// Generates a seeded synthetic database.
///
/// Item `k` has popularity weight `1 / (k + 1)`, a Zipf-like skew. Each
/// transaction length is `1 + Poisson(mean_len - 1)` clamped to `n_items`,
/// and its items are drawn without replacement in proportion to popularity.
/// The same arguments always yield the same database.
pub fn generate_synthetic(
    n_trans: usize,
    n_items: usize,
    mean_len: f64,
    seed: u64,
) -> Result<TransactionDb> {
    if !mean_len.is_finite() || mean_len < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "mean transaction length {mean_len} must be at least 1"
        )));
    }
    if mean_len > n_items as f64 {
        return Err(Error::InvalidArgument(format!(
            "mean transaction length {mean_len} exceeds item count {n_items}"
        )));
    }
    if n_items > Item::MAX as usize {
        return Err(Error::InvalidArgument(format!("too many items: {n_items}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extra = if mean_len > 1.0 {
        Some(Poisson::new(mean_len - 1.0).map_err(|e| Error::InvalidArgument(e.to_string()))?)
    } else {
        None
    };

    let mut transactions = Vec::with_capacity(n_trans);
    for _ in 0..n_trans {
        let len = match &extra {
            Some(p) => 1 + p.sample(&mut rng) as usize,
            None => 1,
        }
        .min(n_items);
        let picked = rand::seq::index::sample_weighted(
            &mut rng,
            n_items,
            |k| 1.0 / (k as f64 + 1.0),
            len,
        )
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        transactions.push(picked.into_iter().map(|k| k as Item));
    }
    Ok(TransactionDb::new(transactions))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_dedups_and_sorts() {
        let db = parse_fimi("1 3 2\n3 3\n").unwrap();
        assert_eq!(db.transactions(), &[vec![1, 2, 3], vec![3]]);
    }

    #[test]
    fn parse_running_example() {
        let db = running_example();
        assert_eq!(db.len(), 10);
        assert_eq!(db.universe().len(), 5);
        assert_eq!(db.transactions()[0], vec![A, D, E]);
    }

    #[test]
    fn parse_empty_and_blank_lines() {
        assert!(parse_fimi("").unwrap().is_empty());
        let db = parse_fimi("\n  \n1\t2\n\n").unwrap();
        assert_eq!(db.transactions(), &[vec![1, 2]]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_fimi("1 2\n3 x\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("invalid"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_fimi("1 -4\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("negative"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_fimi("99999999999\n").is_err());
    }

    #[test]
    fn read_matches_parse() {
        let db = read_fimi(RUNNING_EXAMPLE.as_bytes()).unwrap();
        assert_eq!(db, running_example());
    }

    #[test]
    fn frequencies() {
        let f = item_frequencies(&running_example());
        assert_eq!(f[&A], 7);
        assert_eq!(f[&C], 7);
        assert_eq!(f[&E], 7);
        assert_eq!(f[&D], 6);
        assert_eq!(f[&B], 3);
        assert!(item_frequencies(&TransactionDb::default()).is_empty());
        let single = TransactionDb::new([vec![9]]);
        assert_eq!(item_frequencies(&single)[&9], 1);
    }

    #[test]
    fn order_both_directions() {
        let db = running_example();
        let desc = compute_order(&db, 3, Direction::Descending);
        assert_eq!(desc.items(), &[A, C, E, D, B]);
        let asc = compute_order(&db, 3, Direction::Ascending);
        assert_eq!(asc.items(), &[B, D, A, C, E]);
        assert!(compute_order(&db, 8, Direction::Ascending).is_empty());
        assert_eq!(asc.reversed().items(), &[E, C, A, D, B]);
    }

    #[test]
    fn reorder_matches_table_column() {
        let db = running_example();
        let desc = compute_order(&db, 3, Direction::Descending);
        let re = reorder_and_prune(&db, &desc);
        assert_eq!(re.transactions()[0], vec![A, E, D]);
        assert_eq!(re.transactions()[1], vec![C, D, B]);
        assert_eq!(re.transactions()[8], vec![C, E, B]);

        let pruned = reorder_and_prune(&TransactionDb::new([vec![1], vec![7, 8]]), &compute_order(
            &TransactionDb::new([vec![1], vec![1]]),
            1,
            Direction::Descending,
        ));
        assert_eq!(pruned.transactions(), &[vec![1], vec![]]);
        assert_eq!(pruned.len(), 2);
    }

    #[test]
    fn resolve_thresholds() {
        assert_eq!(resolve_minsup(SupportThreshold::Absolute(3), 10).unwrap(), 3);
        assert_eq!(resolve_minsup(SupportThreshold::Relative(0.1), 10).unwrap(), 1);
        // ceil(0.07 * 6040) = ceil(422.8)
        assert_eq!(resolve_minsup(SupportThreshold::Relative(0.07), 6040).unwrap(), 423);
        assert_eq!(resolve_minsup(SupportThreshold::Relative(0.3), 10).unwrap(), 3);
        assert_eq!(resolve_minsup(SupportThreshold::Relative(0.001), 10).unwrap(), 1);
        assert!(matches!(
            resolve_minsup(SupportThreshold::Relative(0.5), 0),
            Err(Error::EmptyDatabase)
        ));
        assert!(SupportThreshold::absolute(0).is_err());
        assert!(SupportThreshold::relative(0.0).is_err());
        assert!(SupportThreshold::relative(1.5).is_err());
        assert!(SupportThreshold::relative(f64::NAN).is_err());
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = generate_synthetic(100, 20, 5.0, 42).unwrap();
        let b = generate_synthetic(100, 20, 5.0, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_synthetic(100, 20, 5.0, 43).unwrap());
        assert!(generate_synthetic(0, 20, 5.0, 1).unwrap().is_empty());
    }

    #[test]
    fn synthetic_mean_length() {
        let db = generate_synthetic(1000, 50, 8.0, 7).unwrap();
        let mean = db.mean_len();
        assert!((mean - 8.0).abs() <= 0.2 * 8.0, "mean {mean}");
    }

    #[test]
    fn synthetic_rejects_bad_parameters() {
        assert!(generate_synthetic(10, 5, 6.0, 0).is_err());
        assert!(generate_synthetic(10, 5, 0.5, 0).is_err());
        assert!(generate_synthetic(10, 5, f64::NAN, 0).is_err());
    }

    fn arb_db() -> impl Strategy<Value = TransactionDb> {
        prop::collection::vec(prop::collection::vec(0u32..15, 0..8), 0..20)
            .prop_map(TransactionDb::new)
    }

    proptest! {
        #[test]
        fn fimi_round_trip(db in arb_db()) {
            // Empty transactions become blank lines, which the reader skips.
            let nonempty = TransactionDb::new(
                db.transactions().iter().filter(|t| !t.is_empty()).cloned(),
            );
            prop_assert_eq!(parse_fimi(&write_fimi(&db)).unwrap(), nonempty);
        }

        #[test]
        fn order_is_permutation_of_frequent(db in arb_db(), min_sup in 1u32..6) {
            let freq = item_frequencies(&db);
            let order = compute_order(&db, min_sup, Direction::Descending);
            let mut got: Vec<Item> = order.items().to_vec();
            got.sort_unstable();
            let want: Vec<Item> = freq.iter().filter(|&(_, &f)| f >= min_sup).map(|(&i, _)| i).collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn reorder_preserves_frequent_pairs(db in arb_db(), min_sup in 1u32..6) {
            let order = compute_order(&db, min_sup, Direction::Descending);
            let re = reorder_and_prune(&db, &order);
            prop_assert_eq!(re.len(), db.len());
            for (orig, new) in db.transactions().iter().zip(re.transactions()) {
                let mut a: Vec<Item> = orig.iter().copied().filter(|&i| order.rank(i).is_some()).collect();
                let mut b = new.clone();
                prop_assert!(b.windows(2).all(|w| order.rank(w[0]) < order.rank(w[1])));
                a.sort_unstable();
                b.sort_unstable();
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn relative_resolution_in_range(f in 0.0001f64..=1.0, n in 1usize..100_000) {
            let m = resolve_minsup(SupportThreshold::Relative(f), n).unwrap();
            prop_assert!(m >= 1 && m as usize <= n);
        }
    }
}
