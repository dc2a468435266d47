//! Structure-aware augmentation of dependency-parsed parallel corpora.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the pure
//! algorithms: tree construction and subtree spans, the swap eligibility
//! check, subject/object/predicate swapping applied to both sides of a
//! sentence pair, depth-weighted source-side noising, length filtering and
//! corpus statistics, seeded splitting and sampling, and corpus BLEU.
//!
//! Reading and writing CoNLL-U, the TSV parse cache and parallel text lives
//! in the `treeswap` companion crate, together with the command line tool.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bleu;
pub mod corpus;
pub mod deptree;
pub mod eligibility;
pub mod noise;
pub mod preprocess;
pub mod seed;
pub mod split;
pub mod swap;
pub mod synth;

#[cfg(test)]
pub(crate) mod fixtures;

pub use corpus::{Sentence, SentencePair, StructureError, Token};
pub use deptree::{linearize, DepTree, Span};
pub use eligibility::{check_pair, filter_corpus, find_triplet, EligiblePair, LabelConfig, Triplet};
pub use swap::{AugmentedPair, SwapMethod};
