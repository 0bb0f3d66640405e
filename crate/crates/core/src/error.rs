use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the monitoring engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `inf + -inf` showed up while adding intervals.
    #[error("indeterminate interval sum: {0} + {1}")]
    IndeterminateSum(f64, f64),

    #[error("invalid interval: lower bound {lo} exceeds upper bound {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("aggregation over an empty set of intervals")]
    EmptyAggregate,

    /// An update tried to widen a value instead of narrowing it.
    #[error(
        "update is not a refinement at location {location}, dimension {dim}, time {t}: \
         {proposed} is not contained in {current}"
    )]
    RefinementViolation {
        location: usize,
        dim: usize,
        t: f64,
        current: String,
        proposed: String,
    },

    #[error("invalid time span [{t_a}, {t_b})")]
    InvalidSpan { t_a: f64, t_b: f64 },

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("{what} index {index} out of range (size {size})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("invalid spatial model: {0}")]
    InvalidModel(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("syntax error at line {line}, column {column}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        found: String,
        expected: Vec<String>,
    },

    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },

    /// Malformed input file; `line` is 1-based and counts the header.
    #[error("{source_name}:{line}: {message}")]
    Format {
        source_name: String,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
