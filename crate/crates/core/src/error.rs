use thiserror::Error;

use crate::model::State;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParams {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown parameter key `{0}`")]
    UnknownParam(String),

    #[error("state ({x}, {y}) has a negative or non-finite component")]
    InvalidState { x: f64, y: f64 },

    #[error("predator density {y} lies outside the closed sliding segment [{lower}, {upper}]")]
    OutsideSlidingSegment { y: f64, lower: f64, upper: f64 },

    #[error("sliding segment is empty (upper bound {upper} <= max(0, {lower}))")]
    EmptySlidingSegment { lower: f64, upper: f64 },

    #[error("pseudo-equilibrium denominator {0:e} is degenerate")]
    DegenerateDenominator(f64),

    #[error("no pseudo-equilibrium inside the sliding segment (candidate y = {candidate})")]
    NoPseudoEquilibrium { candidate: f64 },

    #[error("point ({x}, {y}) is not an equilibrium (field residual {residual:e})")]
    NotAnEquilibrium { x: f64, y: f64, residual: f64 },

    #[error("Lyapunov function undefined at ({x}, {y}): both components must be positive")]
    LyapunovDomain { x: f64, y: f64 },

    #[error("step size underflow at t = {t}; last valid state ({x}, {y})", x = .state.x, y = .state.y)]
    StepUnderflow { t: f64, state: State },

    #[error("non-finite value produced at t = {t}")]
    NonFinite { t: f64 },

    #[error("population went negative ({value:e}) at t = {t}; tolerances are too loose")]
    NegativeExcursion { t: f64, value: f64 },

    #[error("too many switching events ({0}); trajectory is chattering")]
    EventLimit(usize),

    #[error("{0} candidate attractors lie within the detection radius; shrink the radius")]
    AmbiguousAttractor(usize),

    #[error("existence does not change over the bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("malformed record: {0}")]
    InvalidRecord(String),

    #[error("invalid option `{0}`: {1}")]
    InvalidOption(&'static str, &'static str),
}
