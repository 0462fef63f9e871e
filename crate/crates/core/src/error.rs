use thiserror::Error;

/// Errors raised by the information-measure library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("event {label:?} has zero probability; its information is infinite")]
    InfiniteInformation { label: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("empty sequence")]
    EmptySequence,

    #[error("length mismatch: {0} values for {1} atoms")]
    LengthMismatch(usize, usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("not normalized: probabilities sum to {sum} (tolerance {tolerance})")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("KN-functions {0} and {1} have disjoint domains")]
    DisjointDomains(String, String),

    #[error("KN-function {name} failed validation: {reason}")]
    InvalidKnFunction { name: String, reason: String },

    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
