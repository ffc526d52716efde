use std::collections::BTreeMap;

use crate::expr::{Atom, EvalError, Expr};
use crate::scalar::Scalar;

/// A point of jet space together with parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub indep: S,
    /// `jets[k]` is the value of x⁽ᵏ⁾.
    pub jets: Vec<S>,
    pub params: BTreeMap<String, S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(indep: S, jets: Vec<S>) -> Self {
        Point {
            indep,
            jets,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: S) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }
}

impl Expr {
    /// Evaluate at a jet point; unknown functions and ansatz constants are errors.
    pub fn eval<S: Scalar>(&self, at: &Point<S>) -> Result<S, EvalError> {
        let mut acc = S::zero();
        for (m, c) in self.terms() {
            let mut t = c.eval(&at.params)?;
            for (a, e) in m.factors() {
                let v = match a {
                    Atom::Indep => at.indep.clone(),
                    Atom::Jet(k) => at
                        .jets
                        .get(*k as usize)
                        .cloned()
                        .ok_or_else(|| EvalError::Unbound(format!("x^({k})")))?,
                    Atom::Fn(f) => return Err(EvalError::Symbolic(f.name().to_string())),
                    Atom::Const(n) => return Err(EvalError::Symbolic(n.to_string())),
                };
                for _ in 0..*e {
                    t = t * v.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }
}
