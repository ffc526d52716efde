//! The linearized symmetry condition and its splitting into determining equations.

use crate::expr::{Atom, Expr, Monomial, VarNames};
use crate::jet::{partial, JetContext};
use crate::lie::{prolong, Generator, LieError, OdeSpec};

/// How the rational symmetry condition was turned into a polynomial.
///
/// The raw condition is multiplied by `rhs_den^den_power` and then divided by
/// `removed`, the monomial in `(t, x)` common to every term of the condition
/// for a fully symbolic generator. The net multiplier is
/// `rhs_den^den_power / removed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clearing {
    pub den_power: u32,
    pub removed: Monomial,
    pub multiplier_num: Expr,
}

impl Clearing {
    pub fn describe(&self, names: &VarNames) -> String {
        self.multiplier_num.display_with(names)
    }
}

/// Polynomial form of `V⁽²⁾(ẍ − f)` on `ẍ = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryCondition {
    pub expr: Expr,
    pub clearing: Clearing,
}

fn raw_condition(ode: &OdeSpec, g: &Generator) -> Result<Expr, LieError> {
    let ctx = JetContext::new(2)?;
    let g = prolong(g, 2, &ctx)?;
    let (n, d) = (ode.rhs_num(), ode.rhs_den());
    let eta1 = g.prolongation(1).expect("prolonged");
    let eta2 = g.prolongation(2).expect("prolonged");

    let (sub, deg) = eta2.rational_substitute(&Atom::Jet(2), n, d);
    let mut out = sub;
    for _ in deg..2 {
        out = &out * d;
    }
    // D² f_v = D·N_v − N·D_v for each first-order coordinate v.
    let quotient_rule = |v: &Atom| -> Result<Expr, LieError> {
        Ok(d * &partial(n, v)? - n * &partial(d, v)?)
    };
    out = out - g.xi() * &quotient_rule(&Atom::Indep)?;
    out = out - g.eta() * &quotient_rule(&Atom::Jet(0))?;
    out = out - eta1 * &quotient_rule(&Atom::Jet(1))?;
    Ok(out)
}

/// Clearing data for an ODE, determined from the fully symbolic generator.
pub fn clearing_for(ode: &OdeSpec) -> Result<Clearing, LieError> {
    let raw = raw_condition(ode, &Generator::symbolic())?;
    let removed = raw.monomial_content(|a| matches!(a, Atom::Indep | Atom::Jet(0)));
    let d2 = ode.rhs_den() * ode.rhs_den();
    let multiplier_num = d2.div_monomial(&removed).unwrap_or(d2);
    Ok(Clearing {
        den_power: 2,
        removed,
        multiplier_num,
    })
}

/// Polynomial numerator of `V⁽²⁾(ẍ − f)` after substituting `ẍ = f`.
///
/// Zero exactly when `g` is a point symmetry of `ode` (for generic parameter
/// values, on the domain where the denominator does not vanish).
pub fn symmetry_condition(ode: &OdeSpec, g: &Generator) -> Result<SymmetryCondition, LieError> {
    if ode.order() != 2 {
        return Err(LieError::UnsupportedOrder(ode.order()));
    }
    let clearing = clearing_for(ode)?;
    let raw = raw_condition(ode, g)?;
    let expr = raw.div_monomial(&clearing.removed).ok_or_else(|| {
        LieError::Invariant("clearing monomial does not divide a specialized condition".into())
    })?;
    Ok(SymmetryCondition { expr, clearing })
}

/// One determining equation: the coefficient of `ẋ^xdot_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetEquation {
    pub xdot_power: u32,
    pub expr: Expr,
}

/// Coefficients of the powers of `ẋ` in a symmetry condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem {
    pub equations: Vec<DetEquation>,
    pub clearing: Clearing,
}

impl DeterminingSystem {
    /// Checks that every equation is free of `ẋ`, `ẍ` and linear in the unknown functions.
    pub fn new(equations: Vec<DetEquation>, clearing: Clearing) -> Result<Self, LieError> {
        for eq in &equations {
            if eq.expr.contains(&Atom::Jet(1)) || eq.expr.contains(&Atom::Jet(2)) {
                return Err(LieError::Invariant(format!(
                    "determining equation for x'^{} still contains derivative coordinates",
                    eq.xdot_power
                )));
            }
            if eq.expr.degree_where(Atom::is_fn) > 1 {
                return Err(LieError::Invariant(format!(
                    "determining equation for x'^{} is nonlinear in the unknowns",
                    eq.xdot_power
                )));
            }
        }
        Ok(DeterminingSystem { equations, clearing })
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    /// `Σ eqᵢ · ẋ^pᵢ`.
    pub fn reassemble(&self) -> Expr {
        let parts: Vec<(u32, Expr)> = self
            .equations
            .iter()
            .map(|e| (e.xdot_power, e.expr.clone()))
            .collect();
        Expr::reassemble(&Atom::Jet(1), &parts)
    }

    pub fn equation(&self, xdot_power: u32) -> Option<&Expr> {
        self.equations
            .iter()
            .find(|e| e.xdot_power == xdot_power)
            .map(|e| &e.expr)
    }
}

/// Splits a condition by powers of `ẋ`.
pub fn split_determining(cond: &SymmetryCondition) -> Result<DeterminingSystem, LieError> {
    if cond.expr.contains(&Atom::Jet(2)) {
        return Err(LieError::Invariant(
            "symmetry condition still contains the second derivative".into(),
        ));
    }
    let equations = cond
        .expr
        .collect(&Atom::Jet(1))
        .into_iter()
        .map(|(p, e)| DetEquation {
            xdot_power: p,
            expr: e,
        })
        .collect();
    DeterminingSystem::new(equations, cond.clearing.clone())
}

/// Symmetry condition for the symbolic generator, split into determining equations.
pub fn determining_system(ode: &OdeSpec) -> Result<DeterminingSystem, LieError> {
    split_determining(&symmetry_condition(ode, &Generator::symbolic())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, Symbols};
    use crate::lie::parse_ode_spec;

    fn free_particle() -> OdeSpec {
        parse_ode_spec("order=2\nrhs_num=0\n").unwrap()
    }

    #[test]
    fn projective_symmetry_of_free_particle() {
        let s = Symbols::default();
        let g = Generator::new(
            parse_expr("t^2", &s).unwrap(),
            parse_expr("t*x", &s).unwrap(),
        )
        .unwrap();
        let c = symmetry_condition(&free_particle(), &g).unwrap();
        assert!(c.expr.is_zero());
    }

    #[test]
    fn free_particle_determining_system() {
        let s = Symbols::default();
        let sys = determining_system(&free_particle()).unwrap();
        let got: Vec<Expr> = sys.equations.iter().map(|e| e.expr.clone()).collect();
        let want: Vec<Expr> = ["eta_tt", "2*eta_tx - xi_tt", "eta_xx - 2*xi_tx", "-xi_xx"]
            .iter()
            .map(|t| parse_expr(t, &s).unwrap())
            .collect();
        assert_eq!(got, want);
        assert!(sys.clearing.removed.is_one());
    }

    #[test]
    fn zero_generator_gives_zero_condition() {
        let spec = parse_ode_spec(
            "order=2\nparams=a,b\nrhs_num=t^3 - a^2*t - x - x'^2*x - b*x'*x\nrhs_den=x^2\n",
        )
        .unwrap();
        let c = symmetry_condition(&spec, &Generator::zero()).unwrap();
        assert!(c.expr.is_zero());
        let sys = split_determining(&c).unwrap();
        assert!(sys.is_empty());
    }

    #[test]
    fn reassembly_identity() {
        let spec = parse_ode_spec(
            "order=2\nparams=a,b\nrhs_num=t^3 - a^2*t - x - x'^2*x - b*x'*x\nrhs_den=x^2\n",
        )
        .unwrap();
        let c = symmetry_condition(&spec, &Generator::symbolic()).unwrap();
        let sys = split_determining(&c).unwrap();
        assert_eq!(sys.reassemble(), c.expr);
        assert_eq!(sys.len(), 4);
    }

    #[test]
    fn third_order_rejected() {
        let spec = parse_ode_spec("order=3\nrhs_num=x''\n").unwrap();
        assert_eq!(
            symmetry_condition(&spec, &Generator::zero()),
            Err(LieError::UnsupportedOrder(3))
        );
    }
}
