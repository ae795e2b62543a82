//! PPC-trees, PP-codes and N-lists for PrePost+.
//!
//! A PPC-tree is a prefix tree over transactions reordered by descending
//! frequency. After construction every non-root node gets a 0-based pre-order
//! and post-order rank; the root is unranked. A node `Y` is an ancestor of `X`
//! iff `Y.pre < X.pre && Y.post > X.post`, which lets N-lists be intersected
//! without touching the tree.
//!
//! The N-list of an itemset is positioned at the nodes of its most frequent
//! item: `NL(Pxy)` sits on `y` nodes and carries the counts of the `x` nodes
//! beneath them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dataset::{Item, ItemOrder, TransactionDb};

pub type NodeId = usize;

/// Index of the root in [`PpcTree::nodes`].
pub const ROOT: NodeId = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpcNode {
    /// `None` only for the root.
    pub name: Option<Item>,
    pub frequency: u32,
    /// In insertion order, which fixes the traversal order.
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    pub pre: u32,
    pub post: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpcTree {
    nodes: Vec<PpcNode>,
    ranked: bool,
}

impl Default for PpcTree {
    fn default() -> Self {
        Self {
            nodes: vec![PpcNode {
                name: None,
                frequency: 0,
                children: Vec::new(),
                parent: None,
                pre: 0,
                post: 0,
            }],
            ranked: false,
        }
    }
}

impl PpcTree {
    /// All nodes, root first.
    pub fn nodes(&self) -> &[PpcNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &PpcNode {
        &self.nodes[id]
    }

    /// Number of non-root nodes.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn is_ranked(&self) -> bool {
        self.ranked
    }

    /// Inserts one transaction whose items are already in tree order.
    pub fn insert(&mut self, items: &[Item]) {
        let mut cur = ROOT;
        for &item in items {
            let found = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].name == Some(item));
            cur = match found {
                Some(child) => child,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(PpcNode {
                        name: Some(item),
                        frequency: 0,
                        children: Vec::new(),
                        parent: Some(cur),
                        pre: 0,
                        post: 0,
                    });
                    self.nodes[cur].children.push(id);
                    id
                }
            };
            self.nodes[cur].frequency += 1;
        }
        self.ranked = false;
    }

    /// Assigns pre- and post-order ranks `0..len()` to the non-root nodes.
    pub fn assign_ranks(&mut self) {
        let mut pre = 0u32;
        let mut post = 0u32;
        // (node, next child index)
        let mut stack: Vec<(NodeId, usize)> = vec![(ROOT, 0)];
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            if let Some(&child) = self.nodes[id].children.get(*next) {
                *next += 1;
                self.nodes[child].pre = pre;
                pre += 1;
                stack.push((child, 0));
            } else {
                stack.pop();
                if id != ROOT {
                    self.nodes[id].post = post;
                    post += 1;
                }
            }
        }
        self.ranked = true;
    }

    /// Walks parent links; used to cross-check the interval test.
    pub fn is_ancestor(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = self.nodes[node].parent;
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.nodes[p].parent;
        }
        false
    }

    pub fn code(&self, id: NodeId) -> PpCode {
        let n = &self.nodes[id];
        PpCode {
            pre: n.pre,
            post: n.post,
            freq: n.frequency,
        }
    }

    /// Indented text dump, one node per line: `name freq pre post`, two
    /// spaces of indent per depth below the root.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack: Vec<(NodeId, usize)> = self.nodes[ROOT]
            .children
            .iter()
            .rev()
            .map(|&c| (c, 0))
            .collect();
        while let Some((id, depth)) = stack.pop() {
            let n = &self.nodes[id];
            let name = n.name.expect("non-root node has a name");
            let _ = writeln!(
                out,
                "{:indent$}{name} {} {} {}",
                "",
                n.frequency,
                n.pre,
                n.post,
                indent = depth * 2
            );
            stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }
}

/// Builds an unranked PPC-tree from a database already reordered by
/// descending frequency. Empty transactions insert nothing.
pub fn build_ppc_tree(reordered: &TransactionDb) -> PpcTree {
    let mut tree = PpcTree::default();
    for t in reordered.transactions() {
        tree.insert(t);
    }
    tree
}

pub fn assign_pre_post(mut tree: PpcTree) -> PpcTree {
    tree.assign_ranks();
    tree
}

/// `<pre, post, freq>` of a PPC-tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PpCode {
    pub pre: u32,
    pub post: u32,
    pub freq: u32,
}

impl PpCode {
    pub const fn new(pre: u32, post: u32, freq: u32) -> Self {
        Self { pre, post, freq }
    }

    /// True if `self` is a proper ancestor of `other` in the tree.
    pub fn is_ancestor_of(&self, other: &PpCode) -> bool {
        self.pre < other.pre && self.post > other.post
    }
}

/// PP-codes in strictly ascending pre-order. The frequency sum is the
/// support of the itemset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NList(Vec<PpCode>);

impl NList {
    pub fn from_codes(codes: Vec<PpCode>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0].pre < w[1].pre));
        Self(codes)
    }

    pub fn codes(&self) -> &[PpCode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> u32 {
        nl_support(self)
    }
}

pub fn nl_support(nl: &NList) -> u32 {
    nl.0.iter().map(|c| c.freq).sum()
}

/// N-lists of every item in `order`, keyed by item. Items with no node get
/// an empty list.
pub fn extract_nlists(tree: &PpcTree, order: &ItemOrder) -> BTreeMap<Item, NList> {
    assert!(tree.is_ranked(), "ranks must be assigned before extracting N-lists");
    let mut by_pre: Vec<NodeId> = (1..tree.nodes.len()).collect();
    by_pre.sort_by_key(|&id| tree.nodes[id].pre);

    let mut lists: BTreeMap<Item, Vec<PpCode>> =
        order.items().iter().map(|&i| (i, Vec::new())).collect();
    for id in by_pre {
        let item = tree.nodes[id].name.expect("non-root node has a name");
        lists.entry(item).or_default().push(tree.code(id));
    }
    lists.into_iter().map(|(i, c)| (i, NList(c))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NLOutcome {
    pub result: NList,
    pub comparisons: u64,
    pub early_stopped: bool,
    /// Frequency mass of `V` ruled out when the loop ended.
    pub skip: u64,
}

/// Intersects `NL(xS)` (`u`) with `NL(yS)` (`v`), `x` before `y` in
/// ascending-frequency order, giving `NL(xyS)`.
///
/// For every `X` in `u` with an ancestor `Y` in `v`, emits
/// `<Y.pre, Y.post, X.freq>`; codes sharing a `Y` arrive consecutively and
/// are merged by summing frequencies.
pub fn nl_intersect(u: &NList, v: &NList) -> NLOutcome {
    let (u, v) = (u.codes(), v.codes());
    let mut z: Vec<PpCode> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut comparisons = 0u64;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        let (x, y) = (&u[i], &v[j]);
        if x.pre > y.pre {
            if x.post < y.post {
                push_merged(&mut z, y, x.freq);
                i += 1;
            } else {
                j += 1;
            }
        } else {
            i += 1;
        }
    }
    NLOutcome {
        result: NList(z),
        comparisons,
        early_stopped: false,
        skip: 0,
    }
}

/// Early-stopping variant of [`nl_intersect`]. `rho_v` is the support of
/// `yS` (the frequency sum of `v`).
///
/// Every matched `X` lies under some `Y` in `v`, and the mass matched under
/// one `Y` never exceeds `Y.freq`. When the loop moves past `Y_j`, the part
/// of `Y_j.freq` that was not matched can never be recovered, so it is added
/// to `skip`. `rho_v - skip` therefore bounds the final support; once it
/// drops below `min_sup` the candidate is infrequent and an empty list is
/// returned.
pub fn nl_intersect_es(u: &NList, v: &NList, rho_v: u32, min_sup: u32) -> NLOutcome {
    let (u, v) = (u.codes(), v.codes());
    let mut z: Vec<PpCode> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut comparisons = 0u64;
    let mut skip = 0u64;
    // mass already matched under v[j]
    let mut matched_here = 0u64;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        let (x, y) = (&u[i], &v[j]);
        if x.pre > y.pre {
            if x.post < y.post {
                push_merged(&mut z, y, x.freq);
                matched_here += u64::from(x.freq);
                i += 1;
            } else {
                skip += u64::from(y.freq).saturating_sub(matched_here);
                matched_here = 0;
                if u64::from(rho_v).saturating_sub(skip) < u64::from(min_sup) {
                    return NLOutcome {
                        result: NList::default(),
                        comparisons,
                        early_stopped: true,
                        skip,
                    };
                }
                j += 1;
            }
        } else {
            i += 1;
        }
    }
    NLOutcome {
        result: NList(z),
        comparisons,
        early_stopped: false,
        skip,
    }
}

fn push_merged(z: &mut Vec<PpCode>, y: &PpCode, freq: u32) {
    match z.last_mut() {
        Some(last) if last.pre == y.pre && last.post == y.post => last.freq += freq,
        _ => z.push(PpCode::new(y.pre, y.post, freq)),
    }
}
