//! Solving determining systems within a polynomial ansatz.
//!
//! The pipeline substitutes `xi = Σ fᵢ(t) xⁱ`, `eta = Σ gⱼ(t) xʲ`
//! ([`x_reduce`]), replaces each `fᵢ`, `gⱼ` by a polynomial in `t` with
//! undetermined constants ([`t_reduce`]), and solves the resulting linear
//! system exactly over the parameter field ([`eliminate`]).

mod ansatz;
mod linear;
mod pipeline;
mod specialize;

pub use ansatz::{x_reduce, TEquation, TOdeSystem, XAnsatz};
pub use linear::{
    eliminate, t_reduce, Genericity, Inconsistency, LinearRow, LinearSystem, RowOrigin,
    SymmetryBasis,
};
pub use pipeline::{
    analyze, verify_basis, Analysis, AnalysisConfig, StageTrace, Verification,
};
pub use specialize::{Assignments, Specialize};

use crate::expr::EvalError;
use crate::jet::JetError;
use crate::lie::LieError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("invalid ansatz: {0}")]
    Ansatz(String),
    #[error("unknown parameter `{0}` in assignment")]
    UnknownParameter(String),
    #[error(
        "assignment makes the divisor `{divisor}` vanish; bind the parameter on the ODE and \
         re-run the analysis from the determining system"
    )]
    GenericityViolated { divisor: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<JetError> for SolverError {
    fn from(e: JetError) -> Self {
        SolverError::Lie(e.into())
    }
}

impl From<EvalError> for SolverError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::VanishingDivisor(divisor) => SolverError::GenericityViolated { divisor },
            other => SolverError::Invariant(other.to_string()),
        }
    }
}
