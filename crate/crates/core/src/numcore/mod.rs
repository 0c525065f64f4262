//! Numeric tower: exact rationals, polynomials in ω, Pochhammer symbols and
//! truncated four-variable Taylor jets.

mod jet;
mod opoly;
mod rational;

pub use jet::{degree, jet_len, multi_factorial, unit, Jet, MultiIndex, DEFAULT_ORDER, MAX_ORDER, NVARS};
pub use opoly::{falling_factorial, pochhammer, OmegaPoly};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational (expected \"p\" or \"p/q\")")]
    Parse(String),
    #[error("division by a jet with zero constant term")]
    DivisionByZero,
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("jets differ in base point or order: {left:?} vs {right:?}")]
    JetMismatch { left: ([f64; NVARS], usize), right: ([f64; NVARS], usize) },
    #[error("jet order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("jet of order {have} cannot supply order {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("expected {expected} coefficients, got {got}")]
    Shape { expected: usize, got: usize },
}
