//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors and evaluations.
///
/// Every operation in this crate is a pure function; an `Err` means the
/// inputs violated a documented precondition, never that internal state was
/// corrupted.
#[derive(Debug, Error)]
pub enum Error {
    /// Two acts (or an act and a measure) live on state spaces of
    /// different sizes.
    #[error("dimension mismatch: expected {expected} states, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An act, measure, or parameter contains a non-finite number.
    #[error("non-finite value encountered: {context}")]
    NonFinite { context: String },

    /// Empty state space where n >= 1 is required.
    #[error("state space must contain at least one state")]
    EmptyStateSpace,

    /// Probability weights are negative or do not sum to one.
    #[error("invalid probability measure: {0}")]
    InvalidMeasure(String),

    /// Capacity table fails W(empty)=0, W(full)=1, or monotonicity.
    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),

    /// Distortion breakpoints fail the (0,0)/(1,1) endpoint or ordering
    /// invariants.
    #[error("invalid distortion function: {0}")]
    InvalidDistortion(String),

    /// Utility breakpoints fail ordering, or the strictly-increasing flag
    /// is set on a non-increasing table.
    #[error("invalid utility function: {0}")]
    InvalidUtility(String),

    /// A dense-table or pair-loop operation was asked for more states than
    /// its complexity bound allows.
    #[error("state space too large: n={n} exceeds the operation's bound of {max}")]
    StateSpaceTooLarge { n: usize, max: usize },

    /// An argument fell outside its required closed interval.
    #[error("{name}={value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// An act value fell outside the utility function's domain.
    #[error("act value {value} outside utility domain [{lo}, {hi}]")]
    UtilityDomain { value: f64, lo: f64, hi: f64 },

    /// Certainty-equivalent inversion hit a flat utility segment spanning
    /// the target, or the target lies outside the utility's range.
    #[error("cannot invert utility at target {target}: {reason}")]
    Inversion { target: f64, reason: String },

    /// An indifference-shift bracket could not be established.
    #[error("bisection bracket not found: {0}")]
    BracketNotFound(String),

    /// A precondition specific to one operation failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An evaluation error surfaced inside an axiom search; the offending
    /// sample is attached for reproduction.
    #[error("evaluation failed at sample {sample}: {source}")]
    SampleEvaluation {
        sample: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
