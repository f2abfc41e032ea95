use thiserror::Error;

use crate::algebra::{Deriv, DiffPoly};

/// Errors raised by the library. Failed audits, obstructions and
/// inconsistencies are report outcomes, not errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("multi-index length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} index {index} out of range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: u32,
        bound: u32,
    },

    #[error("duplicate lead {0}")]
    DuplicateLead(Deriv),

    #[error("tail depends on its own lead {0}")]
    LeadInTail(Deriv),

    #[error("not a normalized set: {0}")]
    NotNormalized(String),

    #[error("system is not conditionally solvable (equations {equations:?})")]
    NotConditionallySolvable { equations: Vec<usize> },

    #[error("reduction exceeded {steps} steps; last state: {last}")]
    StepLimit { steps: usize, last: DiffPoly },

    #[error("ranking failed its compatibility audit: {0}")]
    RankingRejected(String),

    #[error("{0}")]
    Structural(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
