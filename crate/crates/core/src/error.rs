use thiserror::Error;

use crate::word::Letter;

pub type Result<T> = std::result::Result<T, QwError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QwError {
    #[error("the empty word has no meaningful occurrences")]
    EmptyFactor,

    #[error("horizon {horizon} is too small (need at least {required})")]
    HorizonTooSmall { horizon: usize, required: usize },

    #[error("coverage violated: position {position} is not covered by the quasiperiod")]
    CoverageViolation { position: usize },

    #[error("letter {letter} is outside the domain of the substitution (base length {base_len})")]
    Domain { letter: Letter, base_len: usize },

    #[error("letter {letter} is not in an alphabet of size {size}")]
    LetterOutOfRange { letter: Letter, size: usize },

    #[error("resource budget exceeded: {requested} letters requested, budget is {budget}")]
    ResourceLimit { requested: usize, budget: usize },

    #[error("malformed specification: {0}")]
    Malformed(String),

    #[error("no fixed point: {0}")]
    NoFixedPoint(String),

    #[error("stream exhausted after {available} letters ({requested} requested)")]
    Exhausted { available: usize, requested: usize },

    #[error("factor does not occur in the scanned prefix of length {horizon}")]
    Absent { horizon: usize },

    #[error("factor is not a vertex of the Rauzy graph")]
    NotAVertex,

    #[error("factor sets of order {order} are not saturated at horizon {horizon}")]
    Unsaturated { order: usize, horizon: usize },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for QwError {
    fn from(e: std::io::Error) -> Self {
        QwError::Io(e.to_string())
    }
}
