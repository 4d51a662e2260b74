//! Error type shared by every module.

use thiserror::Error;

/// Everything that can go wrong while evaluating deformed quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RpqError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("kind `{kind}` does not support {what}")]
    UnsupportedKind { kind: String, what: String },

    #[error("overflow risk: {0}")]
    OverflowRisk(String),

    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error("argument outside radius of convergence: |z| = {modulus}, radius = {radius}")]
    OutsideRadius { modulus: f64, radius: f64 },

    #[error("pole hit: {0}")]
    PoleHit(String),

    #[error("phi condition violated at n = {n}, k = {k}: residual {residual:e}")]
    PhiConditionViolated { n: usize, k: usize, residual: f64 },

    #[error("Mandel Q is undefined at x = 0 (mean photon number vanishes)")]
    UndefinedQ,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, RpqError>;
