use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_id}: invalid UTF-8 at byte offset {offset}")]
    Encoding { source_id: String, offset: usize },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("n-graph order must be 1, 2 or 3 (got {0})")]
    InvalidOrder(usize),
    #[error("expected an order-{expected} table, got order {found}")]
    WrongOrder { expected: usize, found: usize },
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
    #[error("tables differ in order or alphabet and cannot be merged")]
    IncompatibleTables,
    #[error("item {0:?} is not in the transaction universe")]
    UnknownItem(String),
    #[error("invalid mining parameters: {0}")]
    InvalidParams(String),
    #[error("universe of {size} items exceeds the brute-force limit of {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("support count for itemset {0:?} missing from frequent levels")]
    MissingSupport(Vec<String>),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("letter {0:?} has zero monograph count; confidence is undefined")]
    ZeroCount(char),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("{hand} hand needs {needed} positions but geometry has {available}; overflow {overflow}: {letters}", overflow = needed - available, letters = overflow_letters.iter().collect::<String>())]
    Capacity {
        hand: crate::layout::Hand,
        needed: usize,
        available: usize,
        overflow_letters: Vec<char>,
    },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("partition carries no decision trace")]
    MissingTrace,
    #[error("reports cover different character totals ({0} vs {1})")]
    IncomparableReports(u64, u64),
    #[error("nothing to compare")]
    NoReports,
}
