use std::sync::Arc;

use crate::expr::{ArgVar, Atom, Expr, FnDeriv, Monomial, Symbol, Symbols, VarNames};
use crate::lie::{instantiate_functions, DeterminingSystem, Generator};
use crate::solver::SolverError;

/// Ansatz `xi = Σ fᵢ(t) xⁱ`, `eta = Σ gⱼ(t) xʲ` with unknown functions of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XAnsatz {
    xi: Expr,
    eta: Expr,
    xi_functions: Vec<FnDeriv>,
    eta_functions: Vec<FnDeriv>,
    degrees: Option<(u32, u32)>,
}

const PREFIXES: &[(&str, &str)] = &[("f", "g"), ("p", "q"), ("u", "v"), ("F", "G")];

fn t_function(name: &str) -> FnDeriv {
    FnDeriv::new(Symbol::from(name), Arc::from([ArgVar::Indep]))
}

impl XAnsatz {
    /// Full polynomial ansatz of the given degrees in `x`.
    ///
    /// Function names `f0, f1, …` and `g0, g1, …` are used unless one of
    /// `reserved` starts with `f` or `g`, in which case another letter pair is chosen.
    pub fn polynomial(
        deg_xi_x: u32,
        deg_eta_x: u32,
        reserved: &[&str],
    ) -> Result<Self, SolverError> {
        let (pf, pg) = PREFIXES
            .iter()
            .copied()
            .find(|(a, b)| !reserved.iter().any(|r| r.starts_with(a) || r.starts_with(b)))
            .ok_or_else(|| SolverError::Ansatz("no fresh function names available".into()))?;
        let build = |prefix: &str, deg: u32| -> (Expr, Vec<FnDeriv>) {
            let fns: Vec<FnDeriv> = (0..=deg).map(|i| t_function(&format!("{prefix}{i}"))).collect();
            let mut e = Expr::zero();
            for (i, f) in fns.iter().enumerate() {
                let term = Expr::atom(Atom::Fn(f.clone()))
                    .mul_monomial(&Monomial::power(Atom::Jet(0), i as u32));
                e = &e + &term;
            }
            (e, fns)
        };
        let (xi, xi_functions) = build(pf, deg_xi_x);
        let (eta, eta_functions) = build(pg, deg_eta_x);
        Ok(XAnsatz {
            xi,
            eta,
            xi_functions,
            eta_functions,
            degrees: Some((deg_xi_x, deg_eta_x)),
        })
    }

    /// Arbitrary `xi`, `eta` built from `t`, `x`, parameters and the listed
    /// unknown functions of `t`.
    pub fn custom(
        xi: Expr,
        eta: Expr,
        xi_functions: Vec<FnDeriv>,
        eta_functions: Vec<FnDeriv>,
    ) -> Result<Self, SolverError> {
        let all: Vec<&FnDeriv> = xi_functions.iter().chain(&eta_functions).collect();
        for f in &all {
            if f.args().as_ref() != [ArgVar::Indep] || f.total_order() != 0 {
                return Err(SolverError::Ansatz(format!(
                    "{} must be an underived function of the independent variable",
                    f.name()
                )));
            }
        }
        for i in 0..all.len() {
            if all[..i].iter().any(|g| g.name() == all[i].name()) {
                return Err(SolverError::Ansatz(format!(
                    "function {} listed twice",
                    all[i].name()
                )));
            }
        }
        for e in [&xi, &eta] {
            for a in e.atoms() {
                let ok = match &a {
                    Atom::Indep | Atom::Jet(0) => true,
                    Atom::Fn(f) => all.contains(&&f.base()),
                    _ => false,
                };
                if !ok {
                    return Err(SolverError::Ansatz(format!("unexpected atom {a}")));
                }
            }
            if e.degree_where(Atom::is_fn) > 1 {
                return Err(SolverError::Ansatz("ansatz is nonlinear in the unknowns".into()));
            }
        }
        Ok(XAnsatz {
            xi,
            eta,
            xi_functions,
            eta_functions,
            degrees: None,
        })
    }

    pub fn xi(&self) -> &Expr {
        &self.xi
    }

    pub fn eta(&self) -> &Expr {
        &self.eta
    }

    /// `(deg_xi_x, deg_eta_x)` for a full polynomial ansatz.
    pub fn degrees(&self) -> Option<(u32, u32)> {
        self.degrees
    }

    /// Unknown functions, those of `xi` first.
    pub fn functions(&self) -> Vec<FnDeriv> {
        self.xi_functions
            .iter()
            .chain(&self.eta_functions)
            .cloned()
            .collect()
    }

    /// `base` extended with the ansatz functions, for parsing and printing.
    pub fn symbols(&self, base: Symbols) -> Symbols {
        self.functions()
            .iter()
            .fold(base, |s, f| s.with_function(f.name(), &[ArgVar::Indep]))
    }

    pub fn display_with(&self, names: &VarNames) -> (String, String) {
        (self.xi.display_with(names), self.eta.display_with(names))
    }
}

/// One equation of a [`TOdeSystem`]: the coefficient of `ẋ^xdot_power · x^x_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TEquation {
    pub xdot_power: u32,
    pub x_power: u32,
    pub expr: Expr,
}

/// Linear ODEs in `t` for the unknown functions of an ansatz.
///
/// `targets` are named expressions in those functions (by default `xi` and
/// `eta`) that later stages evaluate on each solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TOdeSystem {
    equations: Vec<TEquation>,
    functions: Vec<FnDeriv>,
    targets: Vec<(String, Expr)>,
}

impl TOdeSystem {
    /// A system whose targets are the unknown functions themselves.
    pub fn new(equations: Vec<TEquation>, functions: Vec<FnDeriv>) -> Result<Self, SolverError> {
        let targets = functions
            .iter()
            .map(|f| (f.name().to_string(), Expr::atom(Atom::Fn(f.clone()))))
            .collect();
        TOdeSystem::with_targets(equations, functions, targets)
    }

    pub fn with_targets(
        equations: Vec<TEquation>,
        functions: Vec<FnDeriv>,
        targets: Vec<(String, Expr)>,
    ) -> Result<Self, SolverError> {
        for eq in &equations {
            for a in eq.expr.atoms() {
                let ok = match &a {
                    Atom::Indep => true,
                    Atom::Fn(f) => functions.contains(&f.base()),
                    _ => false,
                };
                if !ok {
                    return Err(SolverError::Invariant(format!(
                        "equation for x'^{} x^{} contains {a}",
                        eq.xdot_power, eq.x_power
                    )));
                }
            }
            if eq.expr.degree_where(Atom::is_fn) > 1 {
                return Err(SolverError::Invariant(format!(
                    "equation for x'^{} x^{} is nonlinear in the unknowns",
                    eq.xdot_power, eq.x_power
                )));
            }
        }
        Ok(TOdeSystem {
            equations,
            functions,
            targets,
        })
    }

    pub fn equations(&self) -> &[TEquation] {
        &self.equations
    }

    pub fn functions(&self) -> &[FnDeriv] {
        &self.functions
    }

    pub fn targets(&self) -> &[(String, Expr)] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// `Σ expr · x^x_power` over the equations coming from `ẋ^xdot_power`.
    pub fn reassemble(&self, xdot_power: u32) -> Expr {
        let parts: Vec<(u32, Expr)> = self
            .equations
            .iter()
            .filter(|e| e.xdot_power == xdot_power)
            .map(|e| (e.x_power, e.expr.clone()))
            .collect();
        Expr::reassemble(&Atom::Jet(0), &parts)
    }

    /// Keeps the equations whose source power of `ẋ` satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(u32) -> bool) -> TOdeSystem {
        TOdeSystem {
            equations: self
                .equations
                .iter()
                .filter(|e| keep(e.xdot_power))
                .cloned()
                .collect(),
            functions: self.functions.clone(),
            targets: self.targets.clone(),
        }
    }
}

fn symbolic_bases() -> (FnDeriv, FnDeriv) {
    let g = Generator::symbolic();
    let base = |e: &Expr| {
        e.atoms()
            .into_iter()
            .next()
            .and_then(|a| a.as_fn().cloned())
            .expect("symbolic generator is a single function atom")
    };
    (base(g.xi()), base(g.eta()))
}

/// `expr` with the symbolic `xi`, `eta` (and their derivatives) replaced by the ansatz.
pub(crate) fn instantiate_ansatz(expr: &Expr, xi: &Expr, eta: &Expr) -> Result<Expr, SolverError> {
    let (xb, eb) = symbolic_bases();
    Ok(instantiate_functions(
        expr,
        &[(xb, xi.clone()), (eb, eta.clone())],
    )?)
}

/// Substitutes the ansatz into every determining equation and collects powers of `x`.
///
/// Equations from `ẋ¹, ẋ², …` come first, in ascending power, followed by those from `ẋ⁰`.
pub fn x_reduce(det: &DeterminingSystem, ansatz: &XAnsatz) -> Result<TOdeSystem, SolverError> {
    let mut equations = Vec::new();
    let ordered = det
        .equations
        .iter()
        .filter(|e| e.xdot_power > 0)
        .chain(det.equations.iter().filter(|e| e.xdot_power == 0));
    for eq in ordered {
        let inst = instantiate_ansatz(&eq.expr, ansatz.xi(), ansatz.eta())?;
        for (q, c) in inst.collect(&Atom::Jet(0)) {
            equations.push(TEquation {
                xdot_power: eq.xdot_power,
                x_power: q,
                expr: c,
            });
        }
    }
    TOdeSystem::with_targets(
        equations,
        ansatz.functions(),
        vec![
            ("xi".into(), ansatz.xi().clone()),
            ("eta".into(), ansatz.eta().clone()),
        ],
    )
}
