//! Plain-text and LaTeX printers.
//!
//! Terms print in descending graded-lexicographic order. The plain-text form
//! is accepted by the parser, so printing then parsing returns the same `Expr`.

use std::fmt;

use crate::expr::{Atom, Expr, FnDeriv, Monomial, ParamField, VarNames};

fn atom_text(a: &Atom, names: &VarNames) -> String {
    match a {
        Atom::Indep => names.indep.clone(),
        Atom::Jet(k) => format!("{}{}", names.dep, "'".repeat(*k as usize)),
        Atom::Fn(f) => fn_text(f, names),
        Atom::Const(n) => n.to_string(),
    }
}

fn fn_text(f: &FnDeriv, names: &VarNames) -> String {
    if f.args().len() == 1 {
        return format!("{}{}", f.name(), "'".repeat(f.orders()[0] as usize));
    }
    if f.total_order() == 0 {
        return f.name().to_string();
    }
    let sub: String = subscript(f, names, "");
    format!("{}_{}", f.name(), sub)
}

fn subscript(f: &FnDeriv, names: &VarNames, sep: &str) -> String {
    f.args()
        .iter()
        .zip(f.orders())
        .flat_map(|(a, n)| std::iter::repeat_n(names.arg_name(*a), *n as usize))
        .collect::<Vec<_>>()
        .join(sep)
}

fn monomial_text(m: &Monomial, names: &VarNames) -> String {
    m.factors()
        .iter()
        .map(|(a, e)| {
            let s = atom_text(a, names);
            if *e == 1 {
                s
            } else {
                format!("{s}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn coefficient_factor(c: &ParamField) -> String {
    if c.denom().is_one() && c.numer().num_terms() > 1 {
        format!("({c})")
    } else {
        c.to_string()
    }
}

fn term_text(m: &Monomial, c: &ParamField, names: &VarNames) -> String {
    if m.is_one() {
        return c.to_string();
    }
    let mono = monomial_text(m, names);
    if c.is_one() {
        mono
    } else if (-c.clone()).is_one() {
        format!("-{mono}")
    } else {
        format!("{}*{mono}", coefficient_factor(c))
    }
}

fn join_terms(terms: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, t) in terms.enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_name(name: &str) -> String {
    match name {
        "xi" => "\\xi".into(),
        "eta" => "\\eta".into(),
        "zeta" => "\\zeta".into(),
        _ => {
            if let Some((base, rest)) = name.split_once('_') {
                return format!("{}_{{{}}}", base, rest.replace('_', ","));
            }
            let split = name
                .find(|c: char| c.is_ascii_digit())
                .unwrap_or(name.len());
            if split == 0 || split == name.len() {
                if name.len() == 1 {
                    name.to_string()
                } else {
                    format!("\\mathrm{{{name}}}")
                }
            } else {
                format!("{}_{{{}}}", &name[..split], &name[split..])
            }
        }
    }
}

fn atom_latex(a: &Atom, names: &VarNames) -> String {
    match a {
        Atom::Indep => names.indep.clone(),
        Atom::Jet(k) => {
            let dots = names.indep == "t";
            match (k, dots) {
                (0, _) => names.dep.clone(),
                (1, true) => format!("\\dot{{{}}}", names.dep),
                (2, true) => format!("\\ddot{{{}}}", names.dep),
                (k, true) => format!("{}^{{({k})}}", names.dep),
                (k, false) if *k <= 3 => format!("{}{}", names.dep, "'".repeat(*k as usize)),
                (k, false) => format!("{}^{{({k})}}", names.dep),
            }
        }
        Atom::Fn(f) => {
            let base = latex_name(f.name());
            if f.args().len() == 1 {
                let n = f.orders()[0] as usize;
                if n <= 3 {
                    format!("{base}{}", "'".repeat(n))
                } else {
                    format!("{base}^{{({n})}}")
                }
            } else if f.total_order() == 0 {
                base
            } else {
                format!("{base}_{{{}}}", subscript(f, names, ""))
            }
        }
        Atom::Const(n) => latex_name(n),
    }
}

fn monomial_latex(m: &Monomial, names: &VarNames) -> String {
    m.factors()
        .iter()
        .map(|(a, e)| {
            let s = atom_latex(a, names);
            match e {
                1 => s,
                e if s.contains('\'') || s.contains('_') && !s.ends_with('}') => {
                    format!("{{{s}}}^{{{e}}}")
                }
                e if s.contains('^') => format!("\\left({s}\\right)^{{{e}}}"),
                e => format!("{s}^{{{e}}}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn term_latex(m: &Monomial, c: &ParamField, names: &VarNames) -> String {
    if m.is_one() {
        return c.to_latex();
    }
    let mono = monomial_latex(m, names);
    if c.is_one() {
        mono
    } else if (-c.clone()).is_one() {
        format!("-{mono}")
    } else if c.denom().is_one() && c.numer().num_terms() > 1 {
        format!("\\left({}\\right) {mono}", c.to_latex())
    } else {
        format!("{} {mono}", c.to_latex())
    }
}

impl Expr {
    /// Plain text using the given variable names.
    pub fn display_with(&self, names: &VarNames) -> String {
        join_terms(self.terms().rev().map(|(m, c)| term_text(m, c, names)))
    }

    pub fn to_latex_with(&self, names: &VarNames) -> String {
        join_terms(self.terms().rev().map(|(m, c)| term_latex(m, c, names)))
    }

    pub fn to_latex(&self) -> String {
        self.to_latex_with(&VarNames::default())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VarNames::default()))
    }
}

impl Monomial {
    pub fn display_with(&self, names: &VarNames) -> String {
        if self.is_one() {
            "1".into()
        } else {
            monomial_text(self, names)
        }
    }
}

impl Atom {
    pub fn display_with(&self, names: &VarNames) -> String {
        atom_text(self, names)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&atom_text(self, &VarNames::default()))
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse_expr, ArgVar, Symbols};

    fn syms() -> Symbols {
        Symbols::new(&["a", "b"])
            .with_function("f1", &[ArgVar::Indep])
            .with_constant("c1")
    }

    #[test]
    fn text_round_trip_examples() {
        let s = syms();
        for src in [
            "x^2*x'' + x*x'^2 + x + a^2*t - t^3 + b*x'*x",
            "-3/4*a*f1'*x^3 + (2*b^2 + 9)/3*f1*x^2",
            "c1*t^4/b - 2*c1*a^2/b*t^2 + xi_tx*eta_xx - 7",
            "(a + b)/(a*b)*t + t/(a - 1)",
            "0",
        ] {
            let e = parse_expr(src, &s).unwrap();
            let printed = e.display_with(&s.names);
            assert_eq!(parse_expr(&printed, &s).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn descending_order() {
        let e = parse_expr("1 + x + t^2", &syms()).unwrap();
        assert_eq!(e.to_string(), "t^2 + x + 1");
    }

    #[test]
    fn latex_forms() {
        let e = parse_expr("-2*xi_x*x^2 + (2*b^2+9)/3*x'", &syms()).unwrap();
        assert_eq!(
            e.to_latex(),
            "-2 x^{2} \\xi_{x} + \\frac{2 b^{2} + 9}{3} \\dot{x}"
        );
    }
}
