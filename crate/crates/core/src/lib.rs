//! Corpus-driven two-hand keyboard layout design.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`corpus`]: normalize and tokenize text, count monographs, digraphs
//!    and trigraphs.
//! 2. [`mining`]: Apriori frequent itemsets and strong association rules,
//!    with digraph occurrences viewed as two-item transactions.
//! 3. [`layout`]: greedy hand assignment from cumulative support and
//!    confidence, then frequency-ordered key placement.
//! 4. [`evaluation`]: hand switching and hand load of any layout over a
//!    corpus.

pub mod corpus;
pub mod error;
pub mod evaluation;
mod io;
pub mod layout;
pub mod mining;
pub mod synth;

pub use corpus::{
    count_ngraphs, count_ngraphs_many, monograph_ranking, tokenize, Alphabet, LetterStream,
    NGraphTable, RankedLetter, Token,
};
pub use error::{Error, Result};
pub use evaluation::{compare, evaluate, evaluate_streams, ComparisonTable, EvalReport};
pub use layout::{
    assign_hands, audit_partition, default_geometry, place_keys, Audit, Hand, HandPartition,
    KeyboardGeometry, Layout, TiePolicy,
};
pub use mining::{
    brute_force_frequent, digraphs_as_transactions, generate_candidates, generate_rules,
    mine_frequent, AssociationRule, CountedItemset, FrequentLevel, MiningParams, TransactionDb,
};
