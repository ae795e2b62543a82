//! Cross-checks all six scheme variants against the brute-force oracle and
//! audits the counter invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Item, TransactionDb};
use crate::error::Result;
use crate::oracle::brute_force_mine;
use crate::search::{mine, Algorithm, MiningResult, Scheme};

/// Largest random instance used by [`fuzz`].
pub const FUZZ_MAX_ITEMS: u32 = 12;
pub const FUZZ_MAX_TRANSACTIONS: usize = 30;

/// The first disagreement found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub scheme: Option<Scheme>,
    /// Offending itemset, ascending ids, when one is involved.
    pub itemset: Option<Vec<Item>>,
    pub message: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.scheme {
            write!(f, "{s}: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub min_sup: u32,
    pub oracle_itemsets: usize,
    pub divergence: Option<Divergence>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

fn fmt_set(items: &[Item]) -> String {
    let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(" "))
}

/// Runs every variant with [`mine`] and compares against the oracle.
pub fn verify_db(db: &TransactionDb, min_sup: u32) -> Result<VerifyReport> {
    verify_db_with(db, min_sup, mine)
}

/// Like [`verify_db`] but with a caller-supplied miner, so that tests can
/// inject a faulty kernel.
pub fn verify_db_with<F>(db: &TransactionDb, min_sup: u32, miner: F) -> Result<VerifyReport>
where
    F: Fn(&TransactionDb, u32, Scheme) -> Result<MiningResult>,
{
    let oracle = brute_force_mine(db, min_sup, None)?;
    let mut results: BTreeMap<Scheme, MiningResult> = BTreeMap::new();
    let report = |divergence| VerifyReport {
        min_sup,
        oracle_itemsets: oracle.len(),
        divergence,
    };

    for scheme in Scheme::all() {
        let res = miner(db, min_sup, scheme)?;
        if let Some(mut d) = compare_with_oracle(&res, &oracle.entries)
            .or_else(|| downward_closure_violation(&res))
            .or_else(|| metrics_violation(&res))
        {
            d.scheme = Some(scheme);
            return Ok(report(Some(d)));
        }
        results.insert(scheme, res);
    }

    for alg in Algorithm::ALL {
        let std = &results[&Scheme::new(alg, false)];
        let es = &results[&Scheme::new(alg, true)];
        if let Some(d) = es_violation(std, es) {
            return Ok(report(Some(Divergence {
                scheme: Some(Scheme::new(alg, true)),
                ..d
            })));
        }
    }

    let base = &results[&Scheme::new(Algorithm::Eclat, false)].metrics;
    for (scheme, res) in &results {
        let m = &res.metrics;
        if (m.num_candidates, m.num_expanded) != (base.num_candidates, base.num_expanded) {
            return Ok(report(Some(Divergence {
                scheme: Some(*scheme),
                itemset: None,
                message: format!(
                    "candidates/expanded {}/{} differ from Eclat's {}/{}",
                    m.num_candidates, m.num_expanded, base.num_candidates, base.num_expanded
                ),
            })));
        }
    }
    Ok(report(None))
}

fn compare_with_oracle(res: &MiningResult, oracle: &BTreeMap<Vec<Item>, u32>) -> Option<Divergence> {
    let mut seen = BTreeSet::new();
    for fi in &res.frequent {
        let problem = if !seen.insert(fi.items.clone()) {
            Some("reported twice".to_string())
        } else {
            match oracle.get(&fi.items) {
                None => Some(format!("reported with support {} but is not frequent", fi.support)),
                Some(&s) if s != fi.support => {
                    Some(format!("reported with support {} but the oracle counts {s}", fi.support))
                }
                Some(_) => None,
            }
        };
        if let Some(p) = problem {
            return Some(Divergence {
                scheme: None,
                itemset: Some(fi.items.clone()),
                message: format!("itemset {} {p}", fmt_set(&fi.items)),
            });
        }
    }
    oracle.iter().find(|(set, _)| !seen.contains(*set)).map(|(set, s)| Divergence {
        scheme: None,
        itemset: Some(set.clone()),
        message: format!("missed itemset {} with support {s}", fmt_set(set)),
    })
}

/// Every reported itemset's immediate subsets must be reported with at least
/// its support; by induction this covers all subsets.
pub fn downward_closure_violation(res: &MiningResult) -> Option<Divergence> {
    let map = res.to_map();
    for (set, &s) in &map {
        if set.len() < 2 {
            continue;
        }
        for drop in 0..set.len() {
            let mut sub = set.clone();
            sub.remove(drop);
            let ok = map.get(&sub).is_some_and(|&ss| ss >= s);
            if !ok {
                return Some(Divergence {
                    scheme: None,
                    itemset: Some(set.clone()),
                    message: format!(
                        "itemset {} (support {s}) has subset {} missing or with lower support",
                        fmt_set(set),
                        fmt_set(&sub)
                    ),
                });
            }
        }
    }
    None
}

fn metrics_violation(res: &MiningResult) -> Option<Divergence> {
    let m = &res.metrics;
    let message = if m.num_expanded > m.num_candidates {
        format!("expanded {} exceeds candidates {}", m.num_expanded, m.num_candidates)
    } else if m.num_frequent != res.frequent.len() as u64 {
        format!("num_frequent {} but {} itemsets reported", m.num_frequent, res.frequent.len())
    } else {
        return None;
    };
    Some(Divergence {
        scheme: None,
        itemset: None,
        message,
    })
}

fn es_violation(std: &MiningResult, es: &MiningResult) -> Option<Divergence> {
    let message = if std.frequent != es.frequent {
        "frequent output differs from the standard kernel".to_string()
    } else if (std.metrics.num_candidates, std.metrics.num_expanded)
        != (es.metrics.num_candidates, es.metrics.num_expanded)
    {
        "candidate/expanded counts differ from the standard kernel".to_string()
    } else if es.metrics.num_comparisons > std.metrics.num_comparisons {
        format!(
            "{} comparisons exceed the standard kernel's {}",
            es.metrics.num_comparisons, std.metrics.num_comparisons
        )
    } else {
        return None;
    };
    Some(Divergence {
        scheme: None,
        itemset: None,
        message,
    })
}

/// A random database with at most [`FUZZ_MAX_ITEMS`] items and between 1 and
/// [`FUZZ_MAX_TRANSACTIONS`] transactions, plus a threshold in `[1, n]`.
pub fn random_small_instance<R: Rng>(rng: &mut R) -> (TransactionDb, u32) {
    let n_items = rng.random_range(1..=FUZZ_MAX_ITEMS);
    let n_trans = rng.random_range(1..=FUZZ_MAX_TRANSACTIONS);
    let density: f64 = rng.random_range(0.15..0.8);
    let transactions: Vec<Vec<Item>> = (0..n_trans)
        .map(|_| (0..n_items).filter(|_| rng.random_bool(density)).collect())
        .collect();
    let min_sup = rng.random_range(1..=n_trans as u32);
    (TransactionDb::new(transactions), min_sup)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub instances: usize,
    /// First failing instance, if any.
    pub failure: Option<(usize, TransactionDb, VerifyReport)>,
}

/// Verifies `count` seeded random instances, stopping at the first failure.
pub fn fuzz(count: usize, seed: u64) -> Result<FuzzReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        let (db, min_sup) = random_small_instance(&mut rng);
        let report = verify_db(&db, min_sup)?;
        if !report.passed() {
            return Ok(FuzzReport {
                instances: k + 1,
                failure: Some((k, db, report)),
            });
        }
    }
    Ok(FuzzReport {
        instances: count,
        failure: None,
    })
}
