//! ODE specifications and their plain-text file format.
//!
//! ```text
//! # comment
//! order=2
//! params=a,b
//! rhs_num=t^3 - a^2*t - x - x'^2*x - b*x'*x
//! rhs_den=x^2
//! ```
//!
//! Optional keys: `indep` and `dep` rename the variables (default `t`, `x`);
//! `rhs` gives the right-hand side as one rational expression; `lhs` (with an
//! optional `rhs`) gives the equation `lhs = rhs` instead of a solved form.

use std::collections::BTreeMap;

use crate::expr::{parse_expr, parse_ratio, Atom, Expr, ExprError, Symbol, Symbols, VarNames};
use crate::lie::LieError;

/// Scalar ODE `x⁽ⁿ⁾ = rhs_num / rhs_den`, with `rhs_num`, `rhs_den` free of
/// x⁽ⁿ⁾ and higher.
///
/// On construction, monomial factors common to numerator and denominator are
/// cancelled and the denominator's leading coefficient is made 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeSpec {
    order: u32,
    rhs_num: Expr,
    rhs_den: Expr,
    params: Vec<Symbol>,
    names: VarNames,
}

impl OdeSpec {
    pub fn new(
        order: u32,
        rhs_num: Expr,
        rhs_den: Expr,
        params: Vec<Symbol>,
        names: VarNames,
    ) -> Result<Self, LieError> {
        if order == 0 {
            return Err(LieError::InvalidOde("order must be at least 1".into()));
        }
        if rhs_den.is_zero() {
            return Err(LieError::InvalidOde("rhs_den is zero".into()));
        }
        for (what, e) in [("rhs_num", &rhs_num), ("rhs_den", &rhs_den)] {
            for a in e.atoms() {
                match a {
                    Atom::Jet(k) if k >= order => {
                        return Err(LieError::InvalidOde(format!(
                            "{what} contains {}, which is not below the ODE order {order}",
                            a.display_with(&names)
                        )))
                    }
                    Atom::Fn(_) | Atom::Const(_) => {
                        return Err(LieError::InvalidOde(format!(
                            "{what} contains the symbolic unknown {}",
                            a.display_with(&names)
                        )))
                    }
                    _ => {}
                }
            }
            if let Some(p) = e.parameters().into_iter().find(|p| !params.contains(p)) {
                return Err(LieError::InvalidOde(format!(
                    "{what} uses undeclared parameter {p}"
                )));
            }
        }
        let (mut rhs_num, mut rhs_den) = (rhs_num, rhs_den);
        if !rhs_num.is_zero() {
            let common = rhs_num
                .monomial_content(|_| true)
                .gcd(&rhs_den.monomial_content(|_| true));
            if !common.is_one() {
                rhs_num = rhs_num.div_monomial(&common).expect("common factor divides");
                rhs_den = rhs_den.div_monomial(&common).expect("common factor divides");
            }
        } else {
            rhs_den = Expr::one();
        }
        let lead = rhs_den
            .terms()
            .next_back()
            .map(|(_, c)| c.clone())
            .expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.inv();
            rhs_num = rhs_num.scale(&inv);
            rhs_den = rhs_den.scale(&inv);
        }
        Ok(OdeSpec {
            order,
            rhs_num,
            rhs_den,
            params,
            names,
        })
    }

    /// Solves `lhs = 0` for the highest jet coordinate, which must occur linearly.
    pub fn from_lhs(
        order: u32,
        lhs: &Expr,
        params: Vec<Symbol>,
        names: VarNames,
    ) -> Result<Self, LieError> {
        let top = Atom::Jet(order);
        if lhs.max_jet_order().unwrap_or(0) > order {
            return Err(LieError::InvalidOde(format!(
                "equation involves derivatives above order {order}"
            )));
        }
        let parts = lhs.collect(&top);
        let (mut a, mut b) = (Expr::zero(), Expr::zero());
        for (p, e) in parts {
            match p {
                0 => b = e,
                1 => a = e,
                _ => {
                    return Err(LieError::InvalidOde(format!(
                        "equation is not linear in {}",
                        top.display_with(&names)
                    )))
                }
            }
        }
        if a.is_zero() {
            return Err(LieError::InvalidOde(format!(
                "equation does not involve {}",
                top.display_with(&names)
            )));
        }
        OdeSpec::new(order, -b, a, params, names)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rhs_num(&self) -> &Expr {
        &self.rhs_num
    }

    pub fn rhs_den(&self) -> &Expr {
        &self.rhs_den
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn names(&self) -> &VarNames {
        &self.names
    }

    pub fn symbols(&self) -> Symbols {
        let names: Vec<&str> = self.params.iter().map(|p| &**p).collect();
        Symbols::new(&names).with_names(&self.names.indep, &self.names.dep)
    }

    /// The equation as a polynomial: `rhs_den * x⁽ⁿ⁾ - rhs_num`.
    pub fn cleared_equation(&self) -> Expr {
        &self.rhs_den * &Expr::jet(self.order) - &self.rhs_num
    }

    /// Domain restrictions from the denominator (`x != 0` style), one per
    /// distinct monomial factor, or the whole denominator when it is not a
    /// monomial.
    pub fn side_conditions(&self) -> Vec<String> {
        if self.rhs_den.is_constant() {
            return Vec::new();
        }
        if self.rhs_den.len() == 1 {
            let (m, _) = self.rhs_den.terms().next().unwrap();
            return m
                .factors()
                .iter()
                .map(|(a, _)| format!("{} != 0", a.display_with(&self.names)))
                .collect();
        }
        vec![format!("{} != 0", self.rhs_den.display_with(&self.names))]
    }

    /// Substitutes parameter values; bound parameters leave the declaration list.
    pub fn with_params_replaced(
        &self,
        rhs_num: Expr,
        rhs_den: Expr,
        params: Vec<Symbol>,
    ) -> Result<OdeSpec, LieError> {
        OdeSpec::new(self.order, rhs_num, rhs_den, params, self.names.clone())
    }

    pub fn display(&self) -> String {
        let top = Atom::Jet(self.order).display_with(&self.names);
        if self.rhs_den == Expr::one() {
            format!("{top} = {}", self.rhs_num.display_with(&self.names))
        } else {
            format!(
                "{top} = ({})/({})",
                self.rhs_num.display_with(&self.names),
                self.rhs_den.display_with(&self.names)
            )
        }
    }

    pub fn to_latex(&self) -> String {
        let top = Expr::jet(self.order).to_latex_with(&self.names);
        let num = self.rhs_num.to_latex_with(&self.names);
        if self.rhs_den == Expr::one() {
            format!("{top} = {num}")
        } else {
            format!(
                "{top} = \\frac{{{num}}}{{{}}}",
                self.rhs_den.to_latex_with(&self.names)
            )
        }
    }

    /// Serializes in the ODE file format, preceded by `# ` comment lines.
    pub fn to_file_string(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!("order={}\n", self.order));
        if self.names != VarNames::default() {
            out.push_str(&format!("indep={}\ndep={}\n", self.names.indep, self.names.dep));
        }
        let params: Vec<&str> = self.params.iter().map(|p| &**p).collect();
        out.push_str(&format!("params={}\n", params.join(",")));
        out.push_str(&format!("rhs_num={}\n", self.rhs_num.display_with(&self.names)));
        out.push_str(&format!("rhs_den={}\n", self.rhs_den.display_with(&self.names)));
        out
    }
}

/// Failure while reading an ODE file; `line` is 1-based, 0 when not line-specific.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct OdeFileError {
    pub line: usize,
    pub kind: OdeFileErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeFileErrorKind {
    #[error("expected `key=value`")]
    NotKeyValue,
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("duplicate key `{0}`")]
    Duplicate(String),
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("invalid value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Ode(#[from] LieError),
}

/// Raw contents of an ODE file before interpretation.
#[derive(Clone, Debug)]
pub struct OdeFile {
    entries: BTreeMap<String, (usize, String)>,
    pub order: u32,
    pub params: Vec<Symbol>,
    pub names: VarNames,
}

const KEYS: &[&str] = &["order", "params", "indep", "dep", "rhs_num", "rhs_den", "rhs", "lhs"];

impl OdeFile {
    pub fn parse(text: &str) -> Result<OdeFile, OdeFileError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |kind| OdeFileError { line, kind };
            let (k, v) = body.split_once('=').ok_or_else(|| err(OdeFileErrorKind::NotKeyValue))?;
            let k = k.trim().to_string();
            if !KEYS.contains(&k.as_str()) {
                return Err(err(OdeFileErrorKind::UnknownKey(k)));
            }
            if entries.contains_key(&k) {
                return Err(err(OdeFileErrorKind::Duplicate(k)));
            }
            entries.insert(k, (line, v.trim().to_string()));
        }
        let (order_line, order_text) = entries.get("order").cloned().ok_or(OdeFileError {
            line: 0,
            kind: OdeFileErrorKind::Missing("order".into()),
        })?;
        let order: u32 = order_text.parse().map_err(|_| OdeFileError {
            line: order_line,
            kind: OdeFileErrorKind::BadValue {
                key: "order".into(),
                msg: format!("`{order_text}` is not a positive integer"),
            },
        })?;
        let params = entries
            .get("params")
            .map(|(_, v)| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(Symbol::from)
                    .collect()
            })
            .unwrap_or_default();
        let name = |key: &str, default: &str| -> Result<String, OdeFileError> {
            match entries.get(key) {
                None => Ok(default.to_string()),
                Some((line, v)) => {
                    let ok = v.len() == 1 && v.chars().all(|c| c.is_ascii_alphabetic());
                    if ok {
                        Ok(v.clone())
                    } else {
                        Err(OdeFileError {
                            line: *line,
                            kind: OdeFileErrorKind::BadValue {
                                key: key.into(),
                                msg: "variable names are single letters".into(),
                            },
                        })
                    }
                }
            }
        };
        let names = VarNames {
            indep: name("indep", "t")?,
            dep: name("dep", "x")?,
        };
        Ok(OdeFile {
            entries,
            order,
            params,
            names,
        })
    }

    pub fn symbols(&self) -> Symbols {
        let names: Vec<&str> = self.params.iter().map(|p| &**p).collect();
        Symbols::new(&names).with_names(&self.names.indep, &self.names.dep)
    }

    fn expr(&self, key: &str) -> Result<Option<(usize, Expr)>, OdeFileError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, text)) => parse_expr(text, &self.symbols())
                .map(|e| Some((*line, e)))
                .map_err(|e| OdeFileError {
                    line: *line,
                    kind: e.into(),
                }),
        }
    }

    pub(crate) fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    /// The equation `lhs - rhs = 0`, when given in equation form.
    pub fn equation(&self) -> Result<Option<Expr>, OdeFileError> {
        let Some((_, lhs)) = self.expr("lhs")? else {
            return Ok(None);
        };
        let rhs = self.expr("rhs")?.map(|(_, e)| e).unwrap_or_default();
        Ok(Some(&lhs - &rhs))
    }

    /// Interprets the file as an explicit ODE.
    pub fn to_spec(&self) -> Result<OdeSpec, OdeFileError> {
        let wrap = |line: usize| move |e: LieError| OdeFileError { line, kind: e.into() };
        if let Some(eq) = self.equation()? {
            return OdeSpec::from_lhs(self.order, &eq, self.params.clone(), self.names.clone())
                .map_err(wrap(self.line_of("lhs")));
        }
        let (num, den) = if let Some((line, text)) = self.entries.get("rhs") {
            if self.entries.contains_key("rhs_num") {
                return Err(OdeFileError {
                    line: *line,
                    kind: OdeFileErrorKind::BadValue {
                        key: "rhs".into(),
                        msg: "give either rhs or rhs_num/rhs_den".into(),
                    },
                });
            }
            parse_ratio(text, &self.symbols()).map_err(|e| OdeFileError {
                line: *line,
                kind: e.into(),
            })?
        } else {
            let (_, num) = self.expr("rhs_num")?.ok_or(OdeFileError {
                line: 0,
                kind: OdeFileErrorKind::Missing("rhs_num".into()),
            })?;
            let den = self.expr("rhs_den")?.map(|(_, e)| e).unwrap_or_else(Expr::one);
            (num, den)
        };
        OdeSpec::new(self.order, num, den, self.params.clone(), self.names.clone())
            .map_err(wrap(self.line_of("rhs_num").max(self.line_of("rhs"))))
    }
}

/// Parse an ODE file directly into an [`OdeSpec`].
pub fn parse_ode_spec(text: &str) -> Result<OdeSpec, OdeFileError> {
    OdeFile::parse(text)?.to_spec()
}
