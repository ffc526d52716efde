//! Order reduction of autonomous third-order equations via `z(y) = y'`.

use crate::expr::{Atom, Expr, Symbol, VarNames};
use crate::lie::{LieError, OdeFile, OdeFileError, OdeFileErrorKind, OdeSpec};

/// Autonomous equation `lhs(y, y', y'', y''') = 0`, linear in `y'''` with a
/// constant coefficient normalized to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutonomousOde3 {
    lhs: Expr,
    params: Vec<Symbol>,
    names: VarNames,
}

impl AutonomousOde3 {
    pub fn new(lhs: Expr, params: Vec<Symbol>, names: VarNames) -> Result<Self, LieError> {
        if let Some(t) = lhs.terms().rev().find(|(m, _)| m.exponent(&Atom::Indep) > 0) {
            let term = Expr::term(t.0.clone(), t.1.clone()).display_with(&names);
            return Err(LieError::NonAutonomous(term));
        }
        for a in lhs.atoms() {
            match a {
                Atom::Jet(k) if k > 3 => {
                    return Err(LieError::InvalidOde(format!(
                        "{} exceeds third order",
                        a.display_with(&names)
                    )))
                }
                Atom::Fn(_) | Atom::Const(_) => {
                    return Err(LieError::InvalidOde(format!(
                        "unexpected symbolic unknown {}",
                        a.display_with(&names)
                    )))
                }
                _ => {}
            }
        }
        let top = Atom::Jet(3);
        let parts = lhs.collect(&top);
        let coeff = match parts.iter().find(|(p, _)| *p > 0) {
            Some((1, c)) if parts.iter().filter(|(p, _)| *p > 1).count() == 0 => c.as_constant(),
            _ => None,
        }
        .filter(|c| !c.is_zero())
        .ok_or_else(|| {
            LieError::InvalidOde(format!(
                "the coefficient of {} must be a nonzero constant",
                top.display_with(&names)
            ))
        })?;
        Ok(AutonomousOde3 {
            lhs: lhs.scale(&coeff.inv()),
            params,
            names,
        })
    }

    pub fn from_file(file: &OdeFile) -> Result<Self, OdeFileError> {
        let line = |k: &str| file.line_of(k);
        if file.order != 3 {
            return Err(OdeFileError {
                line: line("order"),
                kind: OdeFileErrorKind::BadValue {
                    key: "order".into(),
                    msg: "reduction expects a third-order equation".into(),
                },
            });
        }
        let lhs = file.equation()?.ok_or(OdeFileError {
            line: 0,
            kind: OdeFileErrorKind::Missing("lhs".into()),
        })?;
        AutonomousOde3::new(lhs, file.params.clone(), file.names.clone()).map_err(|e| {
            OdeFileError {
                line: line("lhs"),
                kind: e.into(),
            }
        })
    }

    pub fn lhs(&self) -> &Expr {
        &self.lhs
    }

    pub fn names(&self) -> &VarNames {
        &self.names
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }
}

/// Result of the reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// The substituted equation in `(y, z, z', z'')`, before any factor is removed.
    pub equation: Expr,
    /// Power of `z` divided out of `equation` before solving for `z''`;
    /// nonzero means the result holds on the branch `z != 0`.
    pub removed_z_power: u32,
    pub spec: OdeSpec,
}

/// Rewrites an autonomous third-order equation in `y(t)` as a second-order
/// equation for `z(y) = y'`, using `y'' = z z'` and `y''' = z (z'² + z z'')`.
pub fn reduce_autonomous(ode3: &AutonomousOde3) -> Result<Reduction, LieError> {
    let new_dep = if ode3.names.dep == "z" { "w" } else { "z" };
    let names = VarNames::new(&ode3.names.dep, new_dep);
    let z = Expr::jet(0);
    let z1 = Expr::jet(1);
    let z2 = Expr::jet(2);
    let equation = ode3.lhs.map_atoms(|a| match a {
        Atom::Jet(0) => Some(Expr::indep()),
        Atom::Jet(1) => Some(z.clone()),
        Atom::Jet(2) => Some(&z * &z1),
        Atom::Jet(3) => Some(&z * &(&z1 * &z1) + &(&z * &z) * &z2),
        _ => None,
    });
    let content = equation.monomial_content(|a| *a == Atom::Jet(0));
    let removed_z_power = content.exponent(&Atom::Jet(0));
    let reduced = equation
        .div_monomial(&content)
        .expect("monomial content divides");
    let spec = OdeSpec::from_lhs(2, &reduced, ode3.params.clone(), names)?;
    Ok(Reduction {
        equation,
        removed_z_power,
        spec,
    })
}
