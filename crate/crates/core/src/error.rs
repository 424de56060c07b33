use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate operator: s = 0 makes U(s,r,s) diagonal")]
    DegenerateOperator,

    #[error("resolvent undefined at lambda = {lambda}: |alpha1| = {alpha1_abs} is on or too close to the unit circle")]
    ResolventUndefined { lambda: Complex64, alpha1_abs: f64 },

    #[error("truncation of order {order} is numerically singular (reciprocal condition estimate {rcond:.3e})")]
    SingularTruncation { order: usize, rcond: f64 },

    #[error("exponent p = {0} outside the open interval (1, inf)")]
    InvalidExponent(f64),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("seed x1 = 0 forces the zero solution")]
    ZeroSeed,

    #[error("entry {index} of the formal eigenvector overflows f64; use the log-magnitude terms")]
    Overflow { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
