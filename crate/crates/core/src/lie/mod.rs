//! Point symmetries of explicit second-order ODEs.

mod condition;
mod ode;
mod prolong;
mod reduce;

pub use condition::{
    clearing_for, determining_system, split_determining, symmetry_condition, Clearing,
    DetEquation, DeterminingSystem, SymmetryCondition,
};
pub use ode::{parse_ode_spec, OdeFile, OdeFileError, OdeFileErrorKind, OdeSpec};
pub use prolong::{instantiate_functions, prolong, Generator};
pub use reduce::{reduce_autonomous, AutonomousOde3, Reduction};

use crate::jet::JetError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid ODE: {0}")]
    InvalidOde(String),
    #[error("not a point symmetry: {0}")]
    NotPointSymmetry(String),
    #[error("unsupported order {0}; symmetry analysis handles second-order equations")]
    UnsupportedOrder(u32),
    #[error("equation is not autonomous: term `{0}` depends explicitly on the independent variable")]
    NonAutonomous(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}
