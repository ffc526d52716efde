use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::expr::{Expr, Symbol};
use crate::lie::{DetEquation, DeterminingSystem, OdeSpec, SymmetryCondition};
use crate::solver::{Genericity, LinearSystem, SolverError, SymmetryBasis, TEquation, TOdeSystem};

/// Parameter name to rational value.
pub type Assignments = BTreeMap<String, BigRational>;

/// Substitution of rational values for parameters.
pub trait Specialize: Sized {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError>;
}

impl Specialize for Expr {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        if values.is_empty() {
            return Ok(self.clone());
        }
        Ok(self.try_map_coefficients(|c| c.specialize(values))?)
    }
}

impl Specialize for OdeSpec {
    /// Bound parameters leave the declaration list.
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        if let Some(k) = values.keys().find(|k| !self.params().iter().any(|p| &**p == k.as_str())) {
            return Err(SolverError::UnknownParameter(k.clone()));
        }
        let num = self.rhs_num().specialize_params(values)?;
        let den = self.rhs_den().specialize_params(values)?;
        if den.is_zero() {
            return Err(SolverError::GenericityViolated {
                divisor: self.rhs_den().display_with(self.names()),
            });
        }
        let params: Vec<Symbol> = self
            .params()
            .iter()
            .filter(|p| !values.contains_key(&***p))
            .cloned()
            .collect();
        Ok(self.with_params_replaced(num, den, params)?)
    }
}

impl Specialize for SymmetryCondition {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        let mut clearing = self.clearing.clone();
        clearing.multiplier_num = clearing.multiplier_num.specialize_params(values)?;
        Ok(SymmetryCondition {
            expr: self.expr.specialize_params(values)?,
            clearing,
        })
    }
}

impl Specialize for DeterminingSystem {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        let mut equations = Vec::new();
        for eq in &self.equations {
            let expr = eq.expr.specialize_params(values)?;
            if !expr.is_zero() {
                equations.push(DetEquation {
                    xdot_power: eq.xdot_power,
                    expr,
                });
            }
        }
        let mut clearing = self.clearing.clone();
        clearing.multiplier_num = clearing.multiplier_num.specialize_params(values)?;
        Ok(DeterminingSystem::new(equations, clearing)?)
    }
}

impl Specialize for TOdeSystem {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        let mut equations = Vec::new();
        for eq in self.equations() {
            let expr = eq.expr.specialize_params(values)?;
            if !expr.is_zero() {
                equations.push(TEquation {
                    xdot_power: eq.xdot_power,
                    x_power: eq.x_power,
                    expr,
                });
            }
        }
        let targets = self
            .targets()
            .iter()
            .map(|(n, e)| Ok((n.clone(), e.specialize_params(values)?)))
            .collect::<Result<_, SolverError>>()?;
        TOdeSystem::with_targets(equations, self.functions().to_vec(), targets)
    }
}

impl Specialize for LinearSystem {
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        self.map_entries(
            |c| Ok(c.specialize(values)?),
            |e| e.specialize_params(values),
        )
    }
}

impl Specialize for SymmetryBasis {
    /// Fails when an assignment makes a recorded genericity divisor vanish.
    fn specialize_params(&self, values: &Assignments) -> Result<Self, SolverError> {
        let mut genericity = Vec::new();
        for g in &self.genericity {
            let v = g.divisor.specialize(values);
            if v.is_zero() {
                return Err(SolverError::GenericityViolated {
                    divisor: g.divisor.to_string(),
                });
            }
            if !v.is_rational() {
                genericity.push(Genericity {
                    divisor: v.numer().divisor_form(),
                    origin: g.origin.clone(),
                });
            }
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|c| Ok(c.specialize(values)?)).collect())
            .collect::<Result<_, SolverError>>()?;
        let elements = self
            .elements
            .iter()
            .map(|el| el.iter().map(|e| e.specialize_params(values)).collect())
            .collect::<Result<_, SolverError>>()?;
        Ok(SymmetryBasis {
            vectors,
            elements,
            genericity,
            ..self.clone()
        })
    }
}
