//! Differentiation on jet space.
//!
//! Both operators are derivations on the polynomial ring, so they are defined
//! by their action on single atoms and extended by the Leibniz rule.

use crate::expr::{ArgVar, Atom, Expr, Monomial, ParamField, Symbols};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("cannot differentiate with respect to `{0}`")]
    NotDifferentiable(String),
    #[error("`{0}` is a parameter; parameters are constants and cannot be differentiation variables")]
    Parameter(String),
    #[error("total derivative would reach jet order {order}, above the context maximum {max}")]
    OrderOverflow { order: u32, max: u32 },
    #[error("jet context needs max_order >= 1, got {0}")]
    BadContext(u32),
}

/// Highest jet coordinate allowed in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetContext {
    max_order: u32,
}

impl JetContext {
    pub fn new(max_order: u32) -> Result<Self, JetError> {
        if max_order == 0 {
            return Err(JetError::BadContext(0));
        }
        Ok(JetContext { max_order })
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }
}

/// Applies the derivation determined by `d` on atoms.
fn derive(e: &Expr, d: impl Fn(&Atom) -> Option<Expr>) -> Expr {
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        for (i, (a, p)) in m.factors().iter().enumerate() {
            let Some(da) = d(a) else { continue };
            if da.is_zero() {
                continue;
            }
            let rest = Monomial::from_factors(
                m.factors()
                    .iter()
                    .enumerate()
                    .map(|(j, (b, q))| (b.clone(), if i == j { q - 1 } else { *q })),
            );
            let scale = c * &ParamField::from_int(i64::from(*p));
            out = &out + &da.mul_monomial(&rest).scale(&scale);
        }
    }
    out
}

fn arg_of(v: &Atom) -> Option<ArgVar> {
    match v {
        Atom::Indep => Some(ArgVar::Indep),
        Atom::Jet(0) => Some(ArgVar::Dep),
        _ => None,
    }
}

/// Partial derivative with respect to `t` or a jet coordinate.
///
/// Unknown functions depending on the variable pick up one more derivative in
/// the matching multiindex slot.
pub fn partial(e: &Expr, v: &Atom) -> Result<Expr, JetError> {
    match v {
        Atom::Fn(_) | Atom::Const(_) => return Err(JetError::NotDifferentiable(v.to_string())),
        Atom::Indep | Atom::Jet(_) => {}
    }
    let slot = arg_of(v);
    Ok(derive(e, |a| {
        if a == v {
            return Some(Expr::one());
        }
        match (a, slot) {
            (Atom::Fn(f), Some(s)) => f.bumped(s).map(|g| Expr::atom(Atom::Fn(g))),
            _ => None,
        }
    }))
}

/// Resolves a variable by name, then differentiates. Parameters are rejected.
pub fn partial_by_name(e: &Expr, name: &str, symbols: &Symbols) -> Result<Expr, JetError> {
    if symbols.is_param(name) {
        return Err(JetError::Parameter(name.to_string()));
    }
    let v = if name == symbols.names.indep {
        Atom::Indep
    } else if let Some(ticks) = name.strip_prefix(symbols.names.dep.as_str()) {
        if !ticks.chars().all(|c| c == '\'') {
            return Err(JetError::NotDifferentiable(name.to_string()));
        }
        Atom::Jet(ticks.len() as u32)
    } else {
        return Err(JetError::NotDifferentiable(name.to_string()));
    };
    partial(e, &v)
}

/// Total derivative `D_t = ∂_t + Σ x⁽ᵏ⁺¹⁾ ∂/∂x⁽ᵏ⁾`.
pub fn total_derivative(e: &Expr, ctx: &JetContext) -> Result<Expr, JetError> {
    if let Some(k) = e.max_jet_order() {
        if k + 1 > ctx.max_order {
            return Err(JetError::OrderOverflow {
                order: k + 1,
                max: ctx.max_order,
            });
        }
    }
    Ok(derive(e, |a| match a {
        Atom::Indep => Some(Expr::one()),
        Atom::Jet(k) => Some(Expr::jet(k + 1)),
        Atom::Fn(f) => {
            let mut d = Expr::zero();
            if let Some(g) = f.bumped(ArgVar::Indep) {
                d = d + Expr::atom(Atom::Fn(g));
            }
            if let Some(g) = f.bumped(ArgVar::Dep) {
                d = d + Expr::atom(Atom::Fn(g)) * Expr::jet(1);
            }
            Some(d)
        }
        Atom::Const(_) => None,
    }))
}
