//! Exact symbolic kernel: canonical polynomials over a parameter field.

mod atom;
mod eval;
mod param;
mod parse;
mod poly;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub use atom::{ArgVar, Atom, FnDeriv};
pub use eval::Point;
pub use param::{EvalError, ParamField, ParamMono, ParamPoly};
pub use parse::{parse_expr, parse_ratio, parse_rational_number};
pub use poly::{Expr, Monomial};

/// Interned symbol name.
pub type Symbol = Arc<str>;

/// Default bound on any single exponent.
pub const DEFAULT_MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("exponent {exponent} exceeds the bound {max}")]
    ExponentBound { exponent: u32, max: u32 },
    #[error("division by a non-parameter expression `{0}`")]
    NonPolynomialDivision(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Display names of the independent and dependent variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarNames {
    pub indep: String,
    pub dep: String,
}

impl VarNames {
    pub fn new(indep: &str, dep: &str) -> Self {
        VarNames {
            indep: indep.to_string(),
            dep: dep.to_string(),
        }
    }

    pub fn arg_name(&self, v: ArgVar) -> &str {
        match v {
            ArgVar::Indep => &self.indep,
            ArgVar::Dep => &self.dep,
        }
    }
}

impl Default for VarNames {
    fn default() -> Self {
        VarNames::new("t", "x")
    }
}

/// Everything the parser needs to resolve identifiers.
#[derive(Clone, Debug)]
pub struct Symbols {
    pub names: VarNames,
    params: Vec<Symbol>,
    functions: BTreeMap<Symbol, Arc<[ArgVar]>>,
    constants: BTreeSet<Symbol>,
    pub max_exponent: u32,
}

impl Default for Symbols {
    fn default() -> Self {
        Symbols::new::<&str>(&[])
    }
}

impl Symbols {
    /// Symbol table with `xi(t,x)` and `eta(t,x)` predeclared.
    pub fn new<S: AsRef<str>>(params: &[S]) -> Self {
        let mut s = Symbols {
            names: VarNames::default(),
            params: params.iter().map(|p| Symbol::from(p.as_ref())).collect(),
            functions: BTreeMap::new(),
            constants: BTreeSet::new(),
            max_exponent: DEFAULT_MAX_EXPONENT,
        };
        s.functions
            .insert("xi".into(), Arc::from([ArgVar::Indep, ArgVar::Dep]));
        s.functions
            .insert("eta".into(), Arc::from([ArgVar::Indep, ArgVar::Dep]));
        s
    }

    pub fn with_names(mut self, indep: &str, dep: &str) -> Self {
        self.names = VarNames::new(indep, dep);
        self
    }

    pub fn with_function(mut self, name: &str, args: &[ArgVar]) -> Self {
        self.functions.insert(name.into(), Arc::from(args));
        self
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.constants.insert(name.into());
        self
    }

    pub fn with_param(mut self, name: &str) -> Self {
        if !self.is_param(name) {
            self.params.push(name.into());
        }
        self
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| &**p == name)
    }

    pub fn function(&self, name: &str) -> Option<(&Symbol, &Arc<[ArgVar]>)> {
        self.functions.get_key_value(name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    /// The underived unknown-function atom `name`.
    pub fn fn_atom(&self, name: &str) -> Option<FnDeriv> {
        self.function(name)
            .map(|(n, args)| FnDeriv::new(n.clone(), args.clone()))
    }
}
