//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' integer)?
//! primary := number | ident ticks? call? | '(' sum ')'
//! call    := '(' ident (',' ident)* ')'
//! ```
//!
//! Ticks after the dependent variable select jet coordinates (`x''`). Ticks
//! after a one-argument function denote derivatives (`f1'`). Partial
//! derivatives of multi-argument functions use a subscript (`xi_tx`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::expr::{ArgVar, Atom, Expr, ExprError, FnDeriv, ParamField, Symbols};

/// Parse a polynomial expression. Division is allowed only by parameter expressions.
pub fn parse_expr(text: &str, symbols: &Symbols) -> Result<Expr, ExprError> {
    let (num, den) = parse_ratio(text, symbols)?;
    match den.as_constant() {
        Some(c) => Ok(num.scale(&c.inv())),
        None => Err(ExprError::NonPolynomialDivision(den.display_with(&symbols.names))),
    }
}

/// Parse an expression that may divide by polynomials; returns `(num, den)`.
///
/// Parameter-only denominators are folded into the numerator, so `den` is
/// `1` unless the expression is genuinely rational in the atoms.
pub fn parse_ratio(text: &str, symbols: &Symbols) -> Result<(Expr, Expr), ExprError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        symbols,
    };
    let r = p.sum()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    match r.den.as_constant() {
        Some(c) => Ok((r.num.scale(&c.inv()), Expr::one())),
        None => Ok((r.num, r.den)),
    }
}

/// Parse an exact rational such as `3`, `-2/7` or `0.125`.
pub fn parse_rational_number(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        BigRational::new(BigInt::from_str(n.trim()).ok()?, d)
    } else {
        decimal(body)?
    };
    Some(if neg { -value } else { value })
}

fn decimal(s: &str) -> Option<BigRational> {
    match s.split_once('.') {
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
        Some((int, frac)) => {
            if !frac.chars().all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
                return None;
            }
            let int = if int.is_empty() { "0" } else { int };
            if !int.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let digits = format!("{int}{frac}");
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            Some(BigRational::new(BigInt::from_str(&digits).ok()?, scale))
        }
    }
}

struct Frac {
    num: Expr,
    den: Expr,
}

impl Frac {
    fn poly(e: Expr) -> Self {
        Frac {
            num: e,
            den: Expr::one(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: &'a Symbols,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn mul(&self, a: &Expr, b: &Expr) -> Result<Expr, ExprError> {
        a.checked_mul(b, self.symbols.max_exponent)
    }

    fn sum(&mut self) -> Result<Frac, ExprError> {
        let mut acc = self.product()?;
        loop {
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(acc);
            };
            let rhs = self.product()?;
            let rhs_num = if sign < 0 { -rhs.num } else { rhs.num };
            acc = if acc.den == rhs.den {
                Frac {
                    num: &acc.num + &rhs_num,
                    den: acc.den,
                }
            } else {
                Frac {
                    num: &self.mul(&acc.num, &rhs.den)? + &self.mul(&rhs_num, &acc.den)?,
                    den: self.mul(&acc.den, &rhs.den)?,
                }
            };
        }
    }

    fn product(&mut self) -> Result<Frac, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = Frac {
                    num: self.mul(&acc.num, &rhs.num)?,
                    den: self.mul(&acc.den, &rhs.den)?,
                };
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                if rhs.num.is_zero() {
                    self.pos = at;
                    return Err(ExprError::DivisionByZero);
                }
                acc = Frac {
                    num: self.mul(&acc.num, &rhs.den)?,
                    den: self.mul(&acc.den, &rhs.num)?,
                };
                if let Some(c) = acc.den.as_constant() {
                    acc = Frac::poly(acc.num.scale(&c.inv()));
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, ExprError> {
        if self.eat('-') {
            let f = self.unary()?;
            return Ok(Frac {
                num: -f.num,
                den: f.den,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac, ExprError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.src[start..]
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() {
            return Err(self.error("expected a nonnegative integer exponent"));
        }
        self.pos += digits.len();
        let max = self.symbols.max_exponent;
        let n: u32 = match digits.parse() {
            Ok(n) if n <= max => n,
            _ => {
                return Err(ExprError::ExponentBound {
                    exponent: digits.parse().unwrap_or(u32::MAX),
                    max,
                })
            }
        };
        Ok(Frac {
            num: base.num.pow_bounded(n, max)?,
            den: base.den.pow_bounded(n, max)?,
        })
    }

    fn primary(&mut self) -> Result<Frac, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                let len = self.src[start..]
                    .chars()
                    .take_while(|c| c.is_ascii_digit() || *c == '.')
                    .count();
                self.pos += len;
                let value = decimal(&self.src[start..self.pos]).ok_or(ExprError::Syntax {
                    pos: start,
                    msg: "malformed number".into(),
                })?;
                Ok(Frac::poly(Expr::constant(ParamField::from_rational(&value))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn ident_token(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .count();
        if len == 0 || self.src[start..].starts_with(|c: char| c.is_ascii_digit()) {
            return None;
        }
        self.pos += len;
        Some(&self.src[start..self.pos])
    }

    fn ticks(&mut self) -> u32 {
        let mut n = 0;
        while self.src[self.pos..].starts_with('\'') {
            self.pos += 1;
            n += 1;
        }
        n
    }

    fn identifier(&mut self) -> Result<Frac, ExprError> {
        let start = self.pos;
        let name = self.ident_token().ok_or_else(|| self.error("expected identifier"))?;
        let ticks = self.ticks();
        let syms = self.symbols;
        let no_ticks = |p: &Self| -> Result<(), ExprError> {
            if ticks > 0 {
                Err(ExprError::Syntax {
                    pos: p.pos,
                    msg: format!("`{name}` cannot take derivative ticks"),
                })
            } else {
                Ok(())
            }
        };

        if name == syms.names.indep {
            no_ticks(self)?;
            return Ok(Frac::poly(Expr::indep()));
        }
        if name == syms.names.dep {
            return Ok(Frac::poly(Expr::jet(ticks)));
        }
        if syms.is_param(name) {
            no_ticks(self)?;
            return Ok(Frac::poly(Expr::constant(ParamField::param(name.into()))));
        }
        if syms.is_constant(name) {
            no_ticks(self)?;
            return Ok(Frac::poly(Expr::atom(Atom::constant(name))));
        }
        if let Some(base) = syms.fn_atom(name) {
            let orders = if ticks > 0 {
                if base.args().len() != 1 {
                    return Err(self.error(&format!(
                        "`{name}` has several arguments; use a subscript such as `{name}_{}`",
                        syms.names.indep
                    )));
                }
                vec![ticks]
            } else {
                vec![0; base.args().len()]
            };
            self.call_args(&base)?;
            let atom = FnDeriv::with_orders(base.name().clone(), base.args().clone(), orders);
            return Ok(Frac::poly(Expr::atom(Atom::Fn(atom))));
        }
        if let Some(atom) = self.subscripted(name) {
            no_ticks(self)?;
            self.call_args(&atom.base())?;
            return Ok(Frac::poly(Expr::atom(Atom::Fn(atom))));
        }
        self.pos = start;
        Err(ExprError::Undeclared(name.to_string()))
    }

    /// `xi_tx` style partial derivative of a declared function.
    fn subscripted(&self, name: &str) -> Option<FnDeriv> {
        for (i, _) in name.match_indices('_') {
            let (base, sub) = (&name[..i], &name[i + 1..]);
            let Some(f) = self.symbols.fn_atom(base) else {
                continue;
            };
            if sub.is_empty() {
                continue;
            }
            let mut orders = vec![0u32; f.args().len()];
            let mut ok = true;
            let mut rest = sub;
            'outer: while !rest.is_empty() {
                for (slot, arg) in f.args().iter().enumerate() {
                    let an = self.symbols.names.arg_name(*arg);
                    if let Some(r) = rest.strip_prefix(an) {
                        orders[slot] += 1;
                        rest = r;
                        continue 'outer;
                    }
                }
                ok = false;
                break;
            }
            if ok {
                return Some(FnDeriv::with_orders(f.name().clone(), f.args().clone(), orders));
            }
        }
        None
    }

    /// Optional explicit argument list; must repeat the declared signature.
    fn call_args(&mut self, f: &FnDeriv) -> Result<(), ExprError> {
        if self.peek() != Some('(') {
            return Ok(());
        }
        self.pos += 1;
        for (i, arg) in f.args().iter().enumerate() {
            if i > 0 && !self.eat(',') {
                return Err(self.error("expected `,`"));
            }
            let expected = self.symbols.names.arg_name(*arg).to_string();
            match self.ident_token() {
                Some(got) if got == expected => {}
                _ => {
                    return Err(self.error(&format!(
                        "`{}` takes arguments ({})",
                        f.name(),
                        f.args()
                            .iter()
                            .map(|a| self.symbols.names.arg_name(*a))
                            .collect::<Vec<_>>()
                            .join(",")
                    )))
                }
            }
        }
        if !self.eat(')') {
            return Err(self.error("expected `)`"));
        }
        Ok(())
    }
}

impl ArgVar {
    pub fn atom(self) -> Atom {
        match self {
            ArgVar::Indep => Atom::Indep,
            ArgVar::Dep => Atom::Jet(0),
        }
    }
}
