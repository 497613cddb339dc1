use thiserror::Error;

use crate::ideal::CncViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed ring spec: {0}")]
    InvalidSpec(String),

    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },

    #[error("ring has {cardinality} elements, above the enumeration cap of {cap}")]
    CapExceeded { cardinality: u128, cap: u64 },

    #[error("ring cardinality does not fit in 128 bits")]
    CardinalityOverflow,

    #[error("element {0} does not belong to this ring")]
    RingMismatch(String),

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("ideal is not nil: no power of it is contained in the target ideal")]
    NotNil,

    #[error("{0}")]
    Chain(CncViolation),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Hensel iteration did not converge within {steps} steps")]
    NonConvergence { steps: u32 },

    #[error("could not factor {n} by trial division up to {bound}")]
    FactorizationBound { n: u64, bound: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }

    /// True for errors caused by malformed user input rather than by a
    /// mathematical hypothesis failing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_) | Error::Syntax { .. } | Error::RingMismatch(_) | Error::InvalidArgument(_)
        )
    }
}

impl From<CncViolation> for Error {
    fn from(v: CncViolation) -> Self {
        Error::Chain(v)
    }
}
