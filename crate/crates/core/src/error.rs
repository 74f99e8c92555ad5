use thiserror::Error;

use crate::series::Rational;

/// Errors raised by the module engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbError {
    #[error("series has zero constant term and is not a unit")]
    NotAUnit,

    /// The working truncation is too small to certify the result.
    #[error("precision exhausted: {context} (working truncation {available})")]
    PrecisionExhausted { context: String, available: usize },

    /// The saturation kept growing past the iteration cap. This is a
    /// certificate boundary, not a proof of non-regularity.
    #[error("saturation did not stabilise within {iterations} growth steps")]
    NotRegular { iterations: usize },

    #[error("fixed point not reached within {iterations} iterations")]
    IterationCap { iterations: usize },

    #[error("module does not have a simple pole (a-matrix has a nonzero constant term)")]
    NotSimplePole,

    #[error("beta = {beta} is not minimal in its class: {eigenvalue} is also an eigenvalue")]
    NotMinimalInClass {
        beta: Box<Rational>,
        eigenvalue: Box<Rational>,
    },

    #[error("no Jordan block of size {requested} at {beta} (largest block: {available})")]
    NoSuchBlock {
        beta: Box<Rational>,
        requested: usize,
        available: usize,
    },

    #[error("generated submodule has rank {rank} < {ambient}")]
    NotFullRank { rank: usize, ambient: usize },

    #[error("random module generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("computation cancelled")]
    Cancelled,
}

impl AbError {
    pub(crate) fn precision(context: impl Into<String>, available: usize) -> Self {
        AbError::PrecisionExhausted {
            context: context.into(),
            available,
        }
    }

    pub fn is_precision_exhausted(&self) -> bool {
        matches!(self, AbError::PrecisionExhausted { .. })
    }
}

pub type Result<T, E = AbError> = std::result::Result<T, E>;
