use crate::expr::{ArgVar, Atom, Expr, FnDeriv, Symbols};
use crate::jet::{total_derivative, JetContext};
use crate::lie::LieError;

/// Infinitesimal generator `xi ∂_t + eta ∂_x` and its computed prolongation
/// coefficients `η⁽¹⁾, η⁽²⁾, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    xi: Expr,
    eta: Expr,
    prolongations: Vec<Expr>,
}

impl Generator {
    /// The fully symbolic generator with unknowns `xi(t,x)` and `eta(t,x)`.
    pub fn symbolic() -> Self {
        let s = Symbols::default();
        let atom = |n: &str| Expr::atom(Atom::Fn(s.fn_atom(n).expect("predeclared")));
        Generator {
            xi: atom("xi"),
            eta: atom("eta"),
            prolongations: Vec::new(),
        }
    }

    /// A point-symmetry generator: `xi` and `eta` may involve `t`, `x`,
    /// parameters, ansatz constants and unknown functions of `(t, x)`, but no
    /// derivative coordinates.
    pub fn new(xi: Expr, eta: Expr) -> Result<Self, LieError> {
        for (which, e) in [("xi", &xi), ("eta", &eta)] {
            if e.max_jet_order().unwrap_or(0) > 0 {
                return Err(LieError::NotPointSymmetry(format!(
                    "{which} depends on derivative coordinates"
                )));
            }
        }
        Ok(Generator {
            xi,
            eta,
            prolongations: Vec::new(),
        })
    }

    pub fn zero() -> Self {
        Generator::new(Expr::zero(), Expr::zero()).expect("zero is a point generator")
    }

    pub fn xi(&self) -> &Expr {
        &self.xi
    }

    pub fn eta(&self) -> &Expr {
        &self.eta
    }

    /// `η⁽ᵏ⁾` for k = 1..; empty until [`prolong`] has run.
    pub fn prolongations(&self) -> &[Expr] {
        &self.prolongations
    }

    pub fn prolongation(&self, k: usize) -> Option<&Expr> {
        if k == 0 {
            Some(&self.eta)
        } else {
            self.prolongations.get(k - 1)
        }
    }

    /// True when no unknown functions remain.
    pub fn is_concrete(&self) -> bool {
        !self.xi.atoms().iter().chain(self.eta.atoms().iter()).any(Atom::is_fn)
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.is_zero()
    }
}

/// Extends `g` to order `k` by `η⁽ⁱ⁾ = D_t η⁽ⁱ⁻¹⁾ − x⁽ⁱ⁾ D_t ξ`.
pub fn prolong(g: &Generator, k: u32, ctx: &JetContext) -> Result<Generator, LieError> {
    if k == 0 {
        return Err(LieError::InvalidOde("prolongation order must be at least 1".into()));
    }
    let dxi = total_derivative(&g.xi, ctx)?;
    let mut out = g.clone();
    out.prolongations.clear();
    let mut prev = g.eta.clone();
    for i in 1..=k {
        let next = total_derivative(&prev, ctx)? - Expr::jet(i) * &dxi;
        out.prolongations.push(next.clone());
        prev = next;
    }
    Ok(out)
}

/// Replaces every derivative of the unknown functions in `e` by the matching
/// derivative of its concrete value from `values`.
pub fn instantiate_functions(e: &Expr, values: &[(FnDeriv, Expr)]) -> Result<Expr, LieError> {
    let mut derivs: std::collections::BTreeMap<FnDeriv, Expr> = std::collections::BTreeMap::new();
    for atom in e.atoms() {
        let Atom::Fn(f) = atom else { continue };
        let Some((_, base_value)) = values.iter().find(|(b, _)| *b == f.base()) else {
            continue;
        };
        let mut d = base_value.clone();
        for (arg, n) in f.args().iter().zip(f.orders()) {
            let v = match arg {
                ArgVar::Indep => Atom::Indep,
                ArgVar::Dep => Atom::Jet(0),
            };
            for _ in 0..*n {
                d = crate::jet::partial(&d, &v)?;
            }
        }
        derivs.insert(f, d);
    }
    Ok(e.map_atoms(|a| match a {
        Atom::Fn(f) => derivs.get(f).cloned(),
        _ => None,
    }))
}
