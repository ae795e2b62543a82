//! Depth-first generate-and-test over equivalence classes.
//!
//! All three schemes walk the same search tree. Frequent items are sorted by
//! ascending frequency (ties by item id); each node `Px` is paired with every
//! later sibling `Py` of its class to propose the candidate `Pxy`. Eclat and
//! dEclat call the shared part `P` a prefix, PrePost+ calls it a suffix, but
//! the candidates are identical, so candidate and expansion counts agree
//! across schemes.
//!
//! PrePost+ builds its PPC-tree in the exact reverse of the search order, so
//! that the later sibling `y` always sits closer to the root than `x`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataset::{compute_order, reorder_and_prune, Direction, Item, TransactionDb};
use crate::diffset::{difference, difference_es, support_from_diffset, DiffList};
use crate::error::{Error, Result};
use crate::ppc::{assign_pre_post, build_ppc_tree, extract_nlists, nl_intersect, nl_intersect_es, NList};
use crate::tidlist::{build_tidlists, intersect, intersect_es, TidList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Eclat,
    #[serde(rename = "declat")]
    DEclat,
    #[serde(rename = "prepost")]
    PrePostPlus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Eclat, Algorithm::DEclat, Algorithm::PrePostPlus];

    /// Command-line spelling.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Eclat => "eclat",
            Algorithm::DEclat => "declat",
            Algorithm::PrePostPlus => "prepost",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eclat" => Ok(Algorithm::Eclat),
            "declat" => Ok(Algorithm::DEclat),
            "prepost" | "prepost+" | "prepostplus" => Ok(Algorithm::PrePostPlus),
            other => Err(Error::InvalidArgument(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// An algorithm paired with a choice of kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scheme {
    pub algorithm: Algorithm,
    pub early_stopping: bool,
}

impl Scheme {
    pub const fn new(algorithm: Algorithm, early_stopping: bool) -> Self {
        Self {
            algorithm,
            early_stopping,
        }
    }

    /// All six variants, standard before early-stopping for each algorithm.
    pub fn all() -> [Scheme; 6] {
        let mut out = [Scheme::new(Algorithm::Eclat, false); 6];
        for (k, alg) in Algorithm::ALL.iter().enumerate() {
            out[2 * k] = Scheme::new(*alg, false);
            out[2 * k + 1] = Scheme::new(*alg, true);
        }
        out
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.algorithm, self.early_stopping) {
            (Algorithm::Eclat, false) => "Eclat",
            (Algorithm::Eclat, true) => "Eclat-ES",
            (Algorithm::DEclat, false) => "dEclat",
            (Algorithm::DEclat, true) => "dEclat-ES",
            (Algorithm::PrePostPlus, false) => "PrePost+",
            (Algorithm::PrePostPlus, true) => "PrePost+ES",
        };
        f.write_str(name)
    }
}

/// Counters collected during one mining run.
///
/// `num_candidates` counts proposed itemsets of size two or more (one per
/// kernel call) and `num_expanded` the frequent ones among them.
/// `num_frequent` also includes the frequent single items.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunMetrics {
    pub num_candidates: u64,
    pub num_expanded: u64,
    pub num_frequent: u64,
    pub num_comparisons: u64,
    pub runtime: Duration,
}

impl RunMetrics {
    pub fn count_candidate(&mut self) {
        self.num_candidates += 1;
    }

    pub fn count_expansion(&mut self) {
        self.num_expanded += 1;
    }

    pub fn add_comparisons(&mut self, k: u64) {
        self.num_comparisons += k;
    }

    /// `num_candidates / num_expanded`, if anything was expanded.
    pub fn ratio(&self) -> Option<f64> {
        (self.num_expanded > 0).then(|| self.num_candidates as f64 / self.num_expanded as f64)
    }

    /// Counter fields only; runtime excluded.
    pub fn counters(&self) -> [u64; 4] {
        [
            self.num_candidates,
            self.num_expanded,
            self.num_frequent,
            self.num_comparisons,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrequentItemset {
    /// Ascending by item id.
    pub items: Vec<Item>,
    pub support: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningResult {
    /// In depth-first discovery order.
    pub frequent: Vec<FrequentItemset>,
    pub metrics: RunMetrics,
}

impl MiningResult {
    /// One line per itemset: `id id ... id (support)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for fi in &self.frequent {
            for item in &fi.items {
                out.push_str(&item.to_string());
                out.push(' ');
            }
            out.push('(');
            out.push_str(&fi.support.to_string());
            out.push_str(")\n");
        }
        out
    }

    pub fn to_map(&self) -> BTreeMap<Vec<Item>, u32> {
        self.frequent
            .iter()
            .map(|fi| (fi.items.clone(), fi.support))
            .collect()
    }
}

/// Vertical representation carried by a search node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Tids(TidList),
    Diffs(DiffList),
    NList(NList),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    /// Items in search order; the last one is the class-distinguishing item.
    pub itemset: Vec<Item>,
    pub payload: Payload,
    pub support: u32,
}

/// Mines every itemset with support `>= min_sup`.
pub fn mine(db: &TransactionDb, min_sup: u32, scheme: Scheme) -> Result<MiningResult> {
    if min_sup < 1 {
        return Err(Error::InvalidArgument("minimum support must be at least 1".into()));
    }
    let roots = level_one(db, min_sup, scheme.algorithm);
    let mut search = Search {
        algorithm: scheme.algorithm,
        min_sup,
        es: scheme.early_stopping,
        frequent: Vec::new(),
        metrics: RunMetrics::default(),
    };
    let started = Instant::now();
    search.traverse(&roots)?;
    search.metrics.runtime = started.elapsed();
    Ok(MiningResult {
        frequent: search.frequent,
        metrics: search.metrics,
    })
}

fn level_one(db: &TransactionDb, min_sup: u32, algorithm: Algorithm) -> Vec<SearchNode> {
    match algorithm {
        Algorithm::Eclat | Algorithm::DEclat => build_tidlists(db, min_sup)
            .into_iter()
            .map(|(item, tids)| SearchNode {
                itemset: vec![item],
                support: tids.support(),
                payload: Payload::Tids(tids),
            })
            .collect(),
        Algorithm::PrePostPlus => {
            let search_order = compute_order(db, min_sup, Direction::Ascending);
            let tree_order = search_order.reversed();
            let tree = assign_pre_post(build_ppc_tree(&reorder_and_prune(db, &tree_order)));
            let mut lists = extract_nlists(&tree, &tree_order);
            search_order
                .items()
                .iter()
                .map(|item| {
                    let nl = lists.remove(item).unwrap_or_default();
                    SearchNode {
                        itemset: vec![*item],
                        support: nl.support(),
                        payload: Payload::NList(nl),
                    }
                })
                .collect()
        }
    }
}

struct Search {
    algorithm: Algorithm,
    min_sup: u32,
    es: bool,
    frequent: Vec<FrequentItemset>,
    metrics: RunMetrics,
}

impl Search {
    fn traverse(&mut self, class: &[SearchNode]) -> Result<()> {
        for (i, x) in class.iter().enumerate() {
            self.emit(x);
            let mut children = Vec::new();
            for y in &class[i + 1..] {
                self.metrics.count_candidate();
                if let Some((payload, support)) = self.extend(x, y)? {
                    self.metrics.count_expansion();
                    let mut itemset = x.itemset.clone();
                    itemset.push(*y.itemset.last().expect("itemsets are non-empty"));
                    children.push(SearchNode {
                        itemset,
                        payload,
                        support,
                    });
                }
            }
            if !children.is_empty() {
                self.traverse(&children)?;
            }
        }
        Ok(())
    }

    fn emit(&mut self, node: &SearchNode) {
        let mut items = node.itemset.clone();
        items.sort_unstable();
        self.frequent.push(FrequentItemset {
            items,
            support: node.support,
        });
        self.metrics.num_frequent += 1;
    }

    /// Computes `Pxy` from siblings `Px` and `Py`; `None` if infrequent.
    fn extend(&mut self, x: &SearchNode, y: &SearchNode) -> Result<Option<(Payload, u32)>> {
        let min_sup = self.min_sup;
        let (payload, support) = match (&x.payload, &y.payload) {
            (Payload::Tids(tx), Payload::Tids(ty)) if self.algorithm == Algorithm::Eclat => {
                let out = if self.es {
                    intersect_es(tx, ty, min_sup)
                } else {
                    intersect(tx, ty)
                };
                self.metrics.add_comparisons(out.comparisons);
                let support = out.result.support();
                (Payload::Tids(out.result), support)
            }
            // level two: D(xy) = T(x) \ T(y)
            (Payload::Tids(tx), Payload::Tids(ty)) => {
                self.diff(tx.as_slice(), ty.as_slice(), x.support)?
            }
            // deeper: D(Pxy) = D(Py) \ D(Px)
            (Payload::Diffs(dx), Payload::Diffs(dy)) => {
                self.diff(&dy.tids, &dx.tids, x.support)?
            }
            (Payload::NList(nx), Payload::NList(ny)) => {
                let out = if self.es {
                    nl_intersect_es(nx, ny, y.support, min_sup)
                } else {
                    nl_intersect(nx, ny)
                };
                self.metrics.add_comparisons(out.comparisons);
                let support = out.result.support();
                (Payload::NList(out.result), support)
            }
            _ => unreachable!("siblings always carry the same payload kind"),
        };
        Ok((support >= min_sup).then_some((payload, support)))
    }

    fn diff(&mut self, u: &[u32], v: &[u32], parent_support: u32) -> Result<(Payload, u32)> {
        let out = if self.es {
            difference_es(u, v, parent_support, self.min_sup)
        } else {
            difference(u, v)
        };
        self.metrics.add_comparisons(out.comparisons);
        let support = support_from_diffset(parent_support, out.result.len() as u32)?;
        Ok((
            Payload::Diffs(DiffList {
                tids: out.result,
                owner_support: support,
            }),
            support,
        ))
    }
}
