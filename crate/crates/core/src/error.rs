//! Error type shared across the workspace.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size cap exceeded while building {what}: needs {needed} entries, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    #[error("operator is not Hermitian to tolerance (max |A - A†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("input vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("state is not a density operator: {reason}")]
    MalformedState { reason: String },

    #[error("invalid variety parameters: {0}")]
    InvalidSpec(String),

    #[error("{op} is not supported for variety {variety}")]
    UnsupportedVariety { op: String, variety: String },

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("missing tensor-factor annotation for {0}")]
    MissingFactors(String),

    #[error("level {k} does not certify the subspace (nu_k = {nu}); cannot build a witness")]
    UncertifiedLevel { k: usize, nu: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
