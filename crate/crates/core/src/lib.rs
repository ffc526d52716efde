//! Lie point-symmetry analysis for scalar ODEs that are rational in the jet variables.

pub mod compare;
pub mod expr;
pub mod jet;
pub mod lie;
pub mod numeric;
pub mod scalar;
pub mod solver;

pub use expr::{Atom, Expr, ParamField, ParamPoly, Symbols, VarNames};
pub use lie::{Generator, OdeSpec};
pub use scalar::Scalar;

/// Double-precision state of the third-order system.
pub type State = numeric::System3State<f64>;
/// Double-precision integration parameters.
pub type Params = numeric::NumericParams<f64>;
/// Double-precision trajectory.
pub type Trajectory = numeric::Trajectory<f64>;
/// Jet-space point with exact rational coordinates.
pub type ExactPoint = expr::Point<num_rational::BigRational>;
/// Jet-space point with double-precision coordinates.
pub type FloatPoint = expr::Point<f64>;
