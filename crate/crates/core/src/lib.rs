//! Frequent itemset mining with early-stopping intersections.
//!
//! Three depth-first miners share one search driver:
//!
//! * **Eclat** intersects sorted TID-lists ([`tidlist`]),
//! * **dEclat** subtracts diffsets ([`diffset`]),
//! * **PrePost+** intersects N-lists over a PPC-tree ([`ppc`]).
//!
//! Each has a standard kernel and an early-stopping kernel that abandons a
//! candidate as soon as the remaining mass provably cannot reach the minimum
//! support. Both kernels return the same frequent itemsets; the early-stopping
//! one performs at most as many comparisons.
//!
//! ```
//! use esmine::{mine, parse_fimi, Algorithm, Scheme};
//!
//! let db = parse_fimi("0 3 4\n1 2 3\n0 2 4\n0 2 3 4\n0 4\n0 2 3\n1 2\n0 2 3 4\n1 2 4\n0 3 4\n")?;
//! let standard = mine(&db, 3, Scheme::new(Algorithm::Eclat, false))?;
//! let early = mine(&db, 3, Scheme::new(Algorithm::Eclat, true))?;
//! assert_eq!(standard.frequent, early.frequent);
//! assert!(early.metrics.num_comparisons < standard.metrics.num_comparisons);
//! # Ok::<(), esmine::Error>(())
//! ```
//!
//! The guide in `book/` walks through each representation in more detail.

pub mod bench;
pub mod dataset;
pub mod diffset;
mod error;
pub mod oracle;
pub mod ppc;
pub mod search;
pub mod tidlist;
pub mod verify;

pub use dataset::{
    compute_order, generate_synthetic, item_frequencies, parse_fimi, read_fimi, reorder_and_prune,
    resolve_minsup, write_fimi, Direction, Item, ItemOrder, SupportThreshold, Tid, TransactionDb,
};
pub use error::{Error, Result};
pub use search::{mine, Algorithm, FrequentItemset, MiningResult, RunMetrics, Scheme};

// Book chapters are compiled as doctests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/tidlists.md")]
    mod tidlists {}
    #[doc = include_str!("../../../book/src/diffsets.md")]
    mod diffsets {}
    #[doc = include_str!("../../../book/src/nlists.md")]
    mod nlists {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
