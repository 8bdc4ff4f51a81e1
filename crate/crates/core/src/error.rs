//! Error type shared by all analytic and simulation modules.

use thiserror::Error;

/// Errors raised by parameter validation and the analytic operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Initial counts do not add up to the population size.
    #[error("invalid counts: {0}")]
    InvalidCounts(String),

    /// A rate parameter is outside its admissible range.
    #[error("invalid rate: {0}")]
    InvalidRate(String),

    /// Initial fractions do not sum to one or lie outside [0, 1].
    #[error("invalid fractions: {0}")]
    InvalidFractions(String),

    /// A derived ratio is undefined because mu = 0.
    #[error("division by zero: {0} undefined when mu = 0")]
    DivisionByZero(&'static str),

    /// Time argument below zero.
    #[error("negative time t = {0}")]
    NegativeTime(f64),

    /// Expected extinction time requested for rho >= 1.
    #[error("supercritical: rho = {0} >= 1, extinction time has infinite mean")]
    Supercritical(f64),

    /// Conserved-quantity evaluation needs x_c > 0.
    #[error("non-positive x_c = {0}")]
    NonPositiveXc(f64),

    /// A guaranteed root bracket failed to show a sign change.
    #[error("bracket failure on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    /// Scaled fixed-rate trajectory evaluated outside [0, 1/mu].
    #[error("time {t} outside [0, {max}]")]
    TimeOutOfRange { t: f64, max: f64 },

    /// Hybrid switch threshold not in (y0, N).
    #[error("invalid hybrid threshold n0 = {0}")]
    InvalidThreshold(u32),

    /// Exact transient solver is limited to N <= 8.
    #[error("state space too large: N = {0} > 8")]
    StateSpaceTooLarge(u32),

    /// Empirical CDF needs at least one sample.
    #[error("empty sample set")]
    EmptySample,

    /// Utility maximum sits on the boundary of the search range.
    #[error("no interior maximum: best alpha = {alpha} at range endpoint, h = {utility}")]
    NoInteriorMax { alpha: f64, utility: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
