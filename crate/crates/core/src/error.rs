//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by parsing, mining, and generation.
#[derive(Debug, Error)]
pub enum Error {
    /// The input stream contained no header row at all.
    #[error("input is empty: expected a header row")]
    EmptyInput,

    /// The header row does not match the session-log schema byte for byte.
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },

    /// A record slice that must be non-empty was empty.
    #[error("no session records to process")]
    NoRecords,

    /// A transaction slice that must be non-empty was empty.
    #[error("no transactions to mine")]
    NoTransactions,

    /// Candidate generation was fed itemsets of unequal sizes.
    #[error("candidate generation requires same-size itemsets: found sizes {first} and {second}")]
    MixedItemsetSizes { first: usize, second: usize },

    /// A cohort filter matched zero records.
    #[error("cohort `{0}` matched no records")]
    EmptyCohort(String),

    /// Two cohort results mined under different configurations were compared.
    #[error("cohort results were mined under different configurations")]
    ConfigMismatch,

    /// The exhaustive oracle refuses vocabularies it cannot enumerate.
    #[error("vocabulary has {observed} distinct items, above the oracle cap of {cap}")]
    VocabularyTooLarge { observed: usize, cap: usize },

    /// A threshold string could not be read as a non-negative decimal.
    #[error("invalid fraction `{0}`: expected a non-negative decimal like 0.25")]
    InvalidFraction(String),

    /// An item token was not `attribute=value` over the known vocabulary.
    #[error("unknown item `{0}`: expected e.g. Mistake=YES, Hint=NO, Skipped=YES, Status=UNSOLVED")]
    UnknownItem(String),

    /// A rule string was not `antecedent => consequent` with disjoint sides.
    #[error("invalid rule `{input}`: {reason}")]
    InvalidRule { input: String, reason: String },

    /// A configuration value was out of its documented domain.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A generator profile failed validation.
    #[error("invalid generator profile: {0}")]
    InvalidProfile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
