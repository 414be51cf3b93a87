use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants are split between user-facing rejections (bad input, a degree the
/// method does not cover) and internal invariant violations, which indicate a
/// bug rather than a bad request. [`Error::is_internal`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system {family}{rank}: {reason}")]
    InvalidRootSystem {
        family: String,
        rank: usize,
        reason: String,
    },

    #[error("unsupported size: {0}")]
    TooLarge(String),

    #[error("invalid parabolic subset: {0}")]
    InvalidParabolic(String),

    #[error("{0} is not a minimal coset representative")]
    NotMinimalRepresentative(String),

    #[error("projection does not exist: {0}")]
    NotNested(String),

    #[error("classes live on different spaces")]
    SpaceMismatch,

    #[error("not a line degree: {0}")]
    NotLineDegree(String),

    #[error("not enumerative: {0}")]
    NotEnumerative(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    NotDivisible(String),

    #[error("internal invariant violated: singular constant term ({0})")]
    Singular(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True when the error signals a bug in the engine rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible(_) | Error::Singular(_) | Error::Internal(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
