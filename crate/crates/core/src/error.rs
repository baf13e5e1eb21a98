use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violates a structural invariant (negative mass, rows that do
    /// not sum to one, correlation matrix that is not PSD, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// The caller asked for something inconsistent (unknown axis, overlapping
    /// groups, cardinality mismatch, zero search budget, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A closed form hit a non-positive argument or a vanishing denominator.
    #[error("degenerate geometry: `{expr}` evaluated to {value}")]
    DegenerateGeometry { expr: String, value: f64 },

    /// The requested code rate cannot be realised by the random codebook.
    #[error("infeasible rate: {0}")]
    InfeasibleRate(String),

    /// A dense table or enumeration would exceed the desk-scale caps.
    #[error("size cap exceeded: {what} needs {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn degenerate(expr: impl Into<String>, value: f64) -> Self {
        Error::DegenerateGeometry {
            expr: expr.into(),
            value,
        }
    }
}
