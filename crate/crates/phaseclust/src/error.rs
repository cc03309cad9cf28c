//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by construction, reduction, stability, and simulation code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cosine and sine coefficient lists differ in length ({a_len} vs {b_len})")]
    MismatchedCoefficients { a_len: usize, b_len: usize },

    #[error("{have} samples provided but at least {need} required")]
    InsufficientSamples { have: usize, need: usize },

    #[error("samples are not on a uniform grid over one period: {detail}")]
    NonUniformGrid { detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("network size {0} invalid (need N >= 2)")]
    InvalidNetworkSize(usize),

    #[error("topology carries a dense override; use the dense-spectrum path")]
    NotCirculant,

    #[error("{n} clusters do not divide network size {n_osc}")]
    Divisibility { n: usize, n_osc: usize },

    #[error("alternating 2-cluster state does not exist for this network: {0}")]
    AlternatingNotAdmissible(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no eigenvalue qualifies as the structural zero (min |lambda| = {min_abs:.3e})")]
    StructuralZeroMissing { min_abs: f64 },

    #[error("{what} failed to converge within the budget of {budget} iterations")]
    NoConvergence { what: String, budget: usize },

    #[error("trajectory converged to a fixed point instead of a limit cycle")]
    FixedPointDetected,

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("delay {tau} is smaller than the integration step {step}")]
    DelayTooSmall { tau: f64, step: f64 },

    #[error("oscillator {oscillator} produced only {count} usable spikes (need {need})")]
    TooFewSpikes {
        oscillator: usize,
        count: usize,
        need: usize,
    },

    #[error("no stable network period: relative spread {rel_spread:.3e} exceeds {limit:.3e}")]
    NoStablePeriod { rel_spread: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
