use thiserror::Error;

/// Errors raised by the algebraic routines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("index {index} out of range (allowed 0..={max})")]
    OutOfRange { index: u64, max: u64 },

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("malformed value: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_prime(p: u64, q: u64) -> Result<()> {
    if p == q {
        Ok(())
    } else {
        Err(Error::PrimeMismatch(p, q))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}
