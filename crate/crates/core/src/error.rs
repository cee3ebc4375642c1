use thiserror::Error;

use crate::algebra2d::AlgebraKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra kind mismatch: {left} vs {right}")]
    KindMismatch {
        left: AlgebraKind,
        right: AlgebraKind,
    },
    /// An element that must be invertible is a zero divisor.
    #[error("zero divisor: {0}")]
    Divisor(String),
    #[error("matrix does not represent an element of {kind}: {reason}")]
    Representation { kind: AlgebraKind, reason: String },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("contract violation: {0}")]
    Contract(String),
    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error payloads.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::KindMismatch { .. } => "KindMismatch",
            Error::Divisor(_) => "DivisorError",
            Error::Representation { .. } => "RepresentationError",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::DegenerateSample(_) => "DegenerateSample",
            Error::Contract(_) => "ContractError",
            Error::InternalConsistency(_) => "InternalConsistency",
            Error::Parse(_) => "ParseError",
        }
    }
}
