//! Floating-point side: integration of the third-order system and sampled
//! symmetry residuals.

mod integrate;
mod residual;

pub use integrate::{
    equilibria, integrate, rhs, write_csv, NumericParams, System3State, Trajectory, Truncation,
};
pub use residual::{
    residual, sample_sweep, JetSample, ResidualEvaluator, SampleBox, SweepReport,
    DEFAULT_X_MIN,
};

use crate::lie::LieError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("generator still contains unknown functions")]
    NotConcrete,
    #[error("no value bound for parameter `{0}`")]
    Unbound(String),
    #[error("divisor `{0}` vanishes at the given parameter values")]
    VanishingDivisor(String),
    #[error("sample outside the domain: {0}")]
    SampleDomain(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("evaluation failed: {0}")]
    Eval(String),
}
