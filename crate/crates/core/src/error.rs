use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// All variants except [`Error::InternalInconsistency`] describe bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("modulus must be positive (got {0})")]
    InvalidModulus(i64),
    #[error("{p} has no inverse modulo {d}")]
    NoInverse { p: i64, d: i64 },
    #[error("group order must be positive (got {0})")]
    InvalidOrder(i64),
    #[error("invalid singularity type 1/{d}({a},{b}): weights must be units mod {d}")]
    InvalidType { d: i64, a: i64, b: i64 },
    #[error("invalid weight triple {0:?}")]
    InvalidWeights([i64; 3]),
    #[error("weights {0:?} are not pairwise coprime")]
    NonCoprimeWeights([i64; 3]),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid covering: {0}")]
    InvalidCovering(String),
    #[error("eigensheaf index {k} out of range [0,{n})")]
    IndexOutOfRange { k: i64, n: i64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// True when the error signals a failed cross-check rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_))
    }
}
