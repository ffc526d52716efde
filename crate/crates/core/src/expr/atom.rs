use std::sync::Arc;

use crate::expr::Symbol;

/// Argument slot of an unknown function: the independent or the dependent variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ArgVar {
    Indep,
    Dep,
}

/// A derivative of an unknown function, such as `xi_tx` or `f1''`.
///
/// Mixed partials are stored by multiindex, so `xi_tx` and `xi_xt` coincide.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FnDeriv {
    name: Symbol,
    args: Arc<[ArgVar]>,
    orders: Vec<u32>,
}

impl FnDeriv {
    pub fn new(name: Symbol, args: Arc<[ArgVar]>) -> Self {
        let orders = vec![0; args.len()];
        FnDeriv { name, args, orders }
    }

    /// Panics if `orders` and `args` differ in length.
    pub fn with_orders(name: Symbol, args: Arc<[ArgVar]>, orders: Vec<u32>) -> Self {
        assert_eq!(args.len(), orders.len(), "multiindex length mismatch");
        FnDeriv { name, args, orders }
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn args(&self) -> &Arc<[ArgVar]> {
        &self.args
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn depends_on(&self, v: ArgVar) -> bool {
        self.args.contains(&v)
    }

    /// One more derivative in `v`; `None` if the function does not take `v`.
    pub fn bumped(&self, v: ArgVar) -> Option<FnDeriv> {
        let slot = self.args.iter().position(|a| *a == v)?;
        let mut next = self.clone();
        next.orders[slot] += 1;
        Some(next)
    }

    /// The underived function this atom belongs to.
    pub fn base(&self) -> FnDeriv {
        FnDeriv::new(self.name.clone(), self.args.clone())
    }
}

/// Indeterminates of the polynomial ring.
///
/// The derived order is the documented canonical atom order:
/// `Indep < Jet(0) < Jet(1) < … < Fn(..) < Const(..)`, with function
/// atoms ordered by name, signature, then multiindex and constants by name.
/// Earlier atoms are more significant in the graded-lexicographic monomial order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// The independent variable (`t`).
    Indep,
    /// Jet coordinate x⁽ᵏ⁾ of the dependent variable; `Jet(0)` is `x`.
    Jet(u32),
    Fn(FnDeriv),
    /// Undetermined constant of an ansatz.
    Const(Symbol),
}

impl Atom {
    pub fn dep() -> Atom {
        Atom::Jet(0)
    }

    pub fn constant(name: &str) -> Atom {
        Atom::Const(name.into())
    }

    pub fn is_fn(&self) -> bool {
        matches!(self, Atom::Fn(_))
    }

    pub fn as_fn(&self) -> Option<&FnDeriv> {
        match self {
            Atom::Fn(f) => Some(f),
            _ => None,
        }
    }

    pub fn jet_order(&self) -> Option<u32> {
        match self {
            Atom::Jet(k) => Some(*k),
            _ => None,
        }
    }
}

impl From<FnDeriv> for Atom {
    fn from(f: FnDeriv) -> Self {
        Atom::Fn(f)
    }
}
