use thiserror::Error;

/// Errors produced by the separability toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} is outside the valid range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("dense dimension {dim} exceeds the cap {cap} (set DSYM_DENSE_CAP to raise it)")]
    DenseCapExceeded { dim: u128, cap: usize },

    #[error("coefficient p[{index}] = {value} is negative or not finite")]
    InvalidCoefficient { index: usize, value: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not {kind} (asymmetry {deviation:e})")]
    NotHermitian { kind: &'static str, deviation: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("mask weights differ: {0} vs {1}")]
    WeightMismatch(usize, usize),

    #[error("state is not separable")]
    NotSeparable,

    #[error("atomic measure recovery failed: {0}")]
    RecoveryFailed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
