//! Diffsets for dEclat and the difference kernels, with and without early
//! stopping.
//!
//! For sibling nodes `Px` and `Py` under a common prefix `P`:
//!
//! * level 2 (1-itemsets store TID-lists): `D(xy) = T(x) \ T(y)`
//! * deeper: `D(Pxy) = D(Py) \ D(Px)`
//! * in both cases `support(Pxy) = support(Px) - |D(Pxy)|`
//!
//! Every kernel computes `U \ V`; callers choose the operands.

use std::cmp::Ordering;

use crate::dataset::Tid;
use crate::error::{Error, Result};
use crate::tidlist::TidList;

/// TIDs present in the generating parent but absent from the owner itemset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffList {
    pub tids: Vec<Tid>,
    /// Support of the itemset this diffset belongs to.
    pub owner_support: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOutcome {
    pub result: Vec<Tid>,
    pub comparisons: u64,
    pub early_stopped: bool,
    /// 0-based cursors at loop exit, before the tail append.
    pub cursor_u: usize,
    pub cursor_v: usize,
}

/// `U \ V` by sorted merge. The unmatched tail of `U` is appended without
/// further comparisons.
pub fn difference(u: &[Tid], v: &[Tid]) -> DiffOutcome {
    let mut z = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut comparisons = 0u64;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        match u[i].cmp(&v[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                z.push(u[i]);
                i += 1;
            }
            Ordering::Greater => j += 1,
        }
    }
    let (cursor_u, cursor_v) = (i, j);
    z.extend_from_slice(&u[i..]);
    DiffOutcome {
        result: z,
        comparisons,
        early_stopped: false,
        cursor_u,
        cursor_v,
    }
}

/// Early-stopping `U \ V`.
///
/// `parent_support` is the support of the generating parent `Px`. After each
/// TID joins the result, `parent_support - |Z|` is an upper bound on the
/// candidate's support; once it falls below `min_sup` the partial result is
/// returned.
pub fn difference_es(u: &[Tid], v: &[Tid], parent_support: u32, min_sup: u32) -> DiffOutcome {
    let mut z = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut comparisons = 0u64;
    while i < u.len() && j < v.len() {
        comparisons += 1;
        match u[i].cmp(&v[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                z.push(u[i]);
                i += 1;
                if (parent_support as usize).saturating_sub(z.len()) < min_sup as usize {
                    return DiffOutcome {
                        result: z,
                        comparisons,
                        early_stopped: true,
                        cursor_u: i,
                        cursor_v: j,
                    };
                }
            }
            Ordering::Greater => j += 1,
        }
    }
    let (cursor_u, cursor_v) = (i, j);
    z.extend_from_slice(&u[i..]);
    DiffOutcome {
        result: z,
        comparisons,
        early_stopped: false,
        cursor_u,
        cursor_v,
    }
}

pub fn support_from_diffset(parent_support: u32, diff_size: u32) -> Result<u32> {
    parent_support
        .checked_sub(diff_size)
        .ok_or(Error::InconsistentDiffset {
            parent_support,
            diff_size,
        })
}

/// `D(xy) = T(x) \ T(y)` for two 1-itemsets.
pub fn first_level_diffset(tx: &TidList, ty: &TidList) -> DiffList {
    let out = difference(tx.as_slice(), ty.as_slice());
    DiffList {
        owner_support: tx.support() - out.result.len() as u32,
        tids: out.result,
    }
}
