use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("degenerate direction: the zero vector spans no line")]
    DegenerateDirection,

    #[error("division by zero: divisor set contains {0}")]
    ZeroDivisor(String),

    #[error("degenerate form: determinant is zero")]
    DegenerateForm,

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("degenerate quadruple: {0}")]
    DegenerateQuadruple(String),

    #[error("{op} needs {cost} evaluations, over the budget of {budget} (raise --max-cost or pass --force)")]
    CostExceeded { op: &'static str, cost: u128, budget: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid construction size {0}: N must be the 6th power of an even integer")]
    InvalidConstructionSize(u64),

    #[error("duplicate line after canonicalization: {0}")]
    DuplicateLine(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{}: line {line}: {msg}", path.display())]
    ParseFile { path: PathBuf, line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_cost(&self) -> bool {
        matches!(self, Error::CostExceeded { .. })
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "zero_denominator",
            Error::DegenerateDirection => "degenerate_direction",
            Error::ZeroDivisor(_) => "zero_divisor",
            Error::DegenerateForm => "degenerate_form",
            Error::InvalidForm(_) => "invalid_form",
            Error::DegenerateQuadruple(_) => "degenerate_quadruple",
            Error::CostExceeded { .. } => "cost_exceeded",
            Error::Precondition(_) => "precondition",
            Error::InvalidConstructionSize(_) => "invalid_construction_size",
            Error::DuplicateLine(_) => "duplicate_line",
            Error::UnknownSuite(_) => "unknown_suite",
            Error::Parse { .. } | Error::ParseFile { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
