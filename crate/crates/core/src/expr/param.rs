//! Coefficient field: rational functions in the declared parameters.
//!
//! [`ParamPoly`] is a multivariate polynomial with arbitrary-precision integer
//! coefficients in named parameters. [`ParamField`] is a reduced quotient of
//! two such polynomials. Reduction uses a recursive primitive-remainder-sequence
//! gcd, which is plenty for the handful of low-degree parameter polynomials the
//! symmetry pipeline produces.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::Symbol;
use crate::scalar::Scalar;

/// Power product of parameters, sorted by parameter name, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamMono(Vec<(Symbol, u32)>);

impl ParamMono {
    pub fn one() -> Self {
        ParamMono(Vec::new())
    }

    pub fn var(name: Symbol) -> Self {
        ParamMono(vec![(name, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| &**n == name)
            .map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ParamMono(out)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (name, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *name {
                let d = other.0[j].1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((name.clone(), e - d)),
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *name {
                return None;
            } else {
                out.push((name.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(ParamMono(out))
    }

    fn without(&self, name: &str) -> (u32, ParamMono) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut power = 0;
        for (n, e) in &self.0 {
            if &**n == name {
                power = *e;
            } else {
                rest.push((n.clone(), *e));
            }
        }
        (power, ParamMono(rest))
    }
}

/// Graded lexicographic order; parameters earlier by name are more significant.
impl Ord for ParamMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (l, r) in self.0.iter().zip(&other.0) {
                match l.0.cmp(&r.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match l.1.cmp(&r.1) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for ParamMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer polynomial in the parameters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, BigInt>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMono::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn var(name: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ParamMono::var(name), BigInt::one());
        ParamPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ParamMono, BigInt)>) -> Self {
        let mut p = ParamPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: ParamMono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ParamMono::is_one)
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMono, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&ParamMono, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(name)).max().unwrap_or(0)
    }

    /// Integer content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn mul_term(&self, m: &ParamMono, c: &BigInt) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self` in Z[params].
    pub fn div_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if let Some(c) = divisor.as_constant() {
            let mut terms = BTreeMap::new();
            for (m, v) in &self.terms {
                let (q, r) = v.div_rem(&c);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(m.clone(), q);
            }
            return Some(ParamPoly { terms });
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Multiply by -1 if needed so the leading coefficient is positive.
    pub fn sign_normalized(self) -> ParamPoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }

    /// A primitive, sign-normalized polynomial vanishing exactly where `self`
    /// does: monomials keep each variable to the first power, other
    /// polynomials are divided by their content.
    pub fn divisor_form(&self) -> ParamPoly {
        if self.is_zero() {
            return ParamPoly::zero();
        }
        let content = ParamPoly::constant(self.content());
        let p = self.div_exact(&content).expect("content divides").sign_normalized();
        if p.num_terms() != 1 {
            return p;
        }
        let (m, _) = p.leading().expect("nonzero");
        let m = ParamMono(m.factors().iter().map(|(s, _)| (s.clone(), 1)).collect());
        let mut out = ParamPoly::zero();
        out.add_term(m, BigInt::one());
        out
    }

    fn as_univariate(&self, name: &str) -> Vec<ParamPoly> {
        let deg = self.degree_in(name) as usize;
        let mut coeffs = vec![ParamPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (p, rest) = m.without(name);
            coeffs[p as usize].add_term(rest, c.clone());
        }
        coeffs
    }

    fn from_univariate(name: &Symbol, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (p, c) in coeffs.iter().enumerate() {
            if p == 0 {
                out = &out + c;
            } else {
                let m = ParamMono(vec![(name.clone(), p as u32)]);
                out = &out + &c.mul_term(&m, &BigInt::one());
            }
        }
        out
    }

    /// Greatest common divisor in Z[params], with positive leading coefficient.
    pub fn gcd(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() {
            return other.clone().sign_normalized();
        }
        if other.is_zero() {
            return self.clone().sign_normalized();
        }
        if self.is_constant() || other.is_constant() {
            return ParamPoly::constant(self.content().gcd(&other.content()));
        }
        let mut vars = self.variables();
        vars.extend(other.variables());
        let v = vars.into_iter().next().expect("nonconstant polynomial has a variable");
        let in_self = self.degree_in(&v) > 0;
        let in_other = other.degree_in(&v) > 0;
        if !in_self {
            return self.gcd(&content_in(other, &v));
        }
        if !in_other {
            return other.gcd(&content_in(self, &v));
        }

        if let Some(g) = heuristic_gcd(self, other) {
            return g;
        }
        let (c1, p1) = content_and_primitive(self, &v);
        let (c2, p2) = content_and_primitive(other, &v);
        let content = c1.gcd(&c2);

        let (mut r0, mut r1) = if p1.degree_in(&v) >= p2.degree_in(&v) {
            (p1, p2)
        } else {
            (p2, p1)
        };
        loop {
            let r = pseudo_remainder(&r0, &r1, &v);
            if r.is_zero() {
                break;
            }
            r0 = r1;
            r1 = content_and_primitive(&r, &v).1;
            if r1.degree_in(&v) == 0 {
                r1 = ParamPoly::one();
                break;
            }
        }
        let prim = content_and_primitive(&r1, &v).1;
        (&content * &prim).sign_normalized()
    }

    pub fn eval<S: Scalar>(&self, values: &BTreeMap<String, S>) -> Result<S, String> {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_integer(c);
            for (name, e) in m.factors() {
                let v = values.get(&**name).ok_or_else(|| name.to_string())?;
                for _ in 0..*e {
                    t = t * v.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Substitute rational values for some parameters.
    pub fn specialize(&self, values: &BTreeMap<String, BigRational>) -> ParamField {
        let mut out = ParamField::zero();
        for (m, c) in &self.terms {
            let mut coeff = BigRational::from_integer(c.clone());
            let mut rest = Vec::new();
            for (name, e) in m.factors() {
                match values.get(&**name) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), *e as usize),
                    None => rest.push((name.clone(), *e)),
                }
            }
            let term = ParamField::from_rational(&coeff)
                * ParamField::from_poly(ParamPoly::from_terms([(ParamMono(rest), BigInt::one())]));
            out = out + term;
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_param_mono(m, latex);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if latex {
                out.push_str(&format!("{mag} {mono}"));
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn render_param_mono(m: &ParamMono, latex: bool) -> String {
    let parts: Vec<String> = m
        .factors()
        .iter()
        .map(|(n, e)| match (*e, latex) {
            (1, _) => n.to_string(),
            (e, true) => format!("{n}^{{{e}}}"),
            (e, false) => format!("{n}^{e}"),
        })
        .collect();
    parts.join(if latex { " " } else { "*" })
}

fn max_norm(p: &ParamPoly) -> BigInt {
    p.terms.values().map(BigInt::abs).max().unwrap_or_default()
}

/// `p` with the variable `v` replaced by the integer `at`.
fn eval_at(p: &ParamPoly, v: &str, at: &BigInt) -> ParamPoly {
    let mut out = ParamPoly::zero();
    for (m, c) in &p.terms {
        let (e, rest) = m.without(v);
        out.add_term(rest, c * at.pow(e));
    }
    out
}

/// Inverse of [`eval_at`] for polynomials whose coefficients are below
/// `at / 2` in absolute value: reads off the balanced base-`at` digits.
fn interpolate(mut image: ParamPoly, v: &Symbol, at: &BigInt) -> ParamPoly {
    let half = at / BigInt::from(2);
    let mut out = ParamPoly::zero();
    let mut power = 0u32;
    while !image.is_zero() {
        let mut digit = ParamPoly::zero();
        let mut rest = ParamPoly::zero();
        for (m, c) in &image.terms {
            let mut r = c.mod_floor(at);
            if r > half {
                r -= at;
            }
            rest.add_term(m.clone(), (c - &r) / at);
            digit.add_term(m.clone(), r);
        }
        let shift = ParamMono(vec![(v.clone(), power)]);
        for (m, c) in digit.terms {
            let m = if power == 0 { m } else { m.mul(&shift) };
            out.add_term(m, c);
        }
        image = rest;
        power += 1;
    }
    out
}

/// Heuristic gcd by evaluation at a large integer and balanced-digit
/// reconstruction, accepted only when the candidate divides both inputs.
/// `None` sends the caller to the primitive PRS route.
fn heuristic_gcd(a: &ParamPoly, b: &ParamPoly) -> Option<ParamPoly> {
    let (ca, cb) = (a.content(), b.content());
    let cg = ca.gcd(&cb);
    let a = a.div_exact(&ParamPoly::constant(ca)).expect("content divides");
    let b = b.div_exact(&ParamPoly::constant(cb)).expect("content divides");
    let mut vars = a.variables();
    vars.extend(b.variables());
    let v = vars.into_iter().next()?;
    let mut at = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + BigInt::from(29);
    for _ in 0..6 {
        let (ea, eb) = (eval_at(&a, &v, &at), eval_at(&b, &v, &at));
        if !ea.is_zero() && !eb.is_zero() {
            let image = ea.gcd(&eb);
            let h = interpolate(image, &v, &at);
            if !h.is_zero() {
                let h = h.div_exact(&ParamPoly::constant(h.content())).expect("content divides");
                if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                    return Some(h.scale(&cg).sign_normalized());
                }
            }
        }
        at = at * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

fn content_in(p: &ParamPoly, v: &str) -> ParamPoly {
    p.as_univariate(v)
        .iter()
        .filter(|c| !c.is_zero())
        .fold(ParamPoly::zero(), |acc, c| acc.gcd(c))
}

fn content_and_primitive(p: &ParamPoly, v: &str) -> (ParamPoly, ParamPoly) {
    let c = content_in(p, v);
    let prim = p.div_exact(&c).expect("content divides its polynomial");
    (c, prim)
}

fn pseudo_remainder(a: &ParamPoly, b: &ParamPoly, v: &Symbol) -> ParamPoly {
    let bc = b.as_univariate(v);
    let n = bc.len() - 1;
    let lcb = bc[n].clone();
    let mut r = a.as_univariate(v);
    while r.len() > n && r.iter().any(|c| !c.is_zero()) {
        let m = r.len() - 1;
        let lcr = r[m].clone();
        let shift = m - n;
        let mut next: Vec<ParamPoly> = r.iter().map(|c| c * &lcb).collect();
        for (i, bi) in bc.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bi * &lcr);
        }
        while next.last().is_some_and(ParamPoly::is_zero) {
            next.pop();
        }
        r = next;
    }
    ParamPoly::from_univariate(v, &r)
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Element of the fraction field Q(params), kept reduced.
///
/// The denominator is nonzero with positive leading coefficient and shares
/// no factor with the numerator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParamField {
    num: ParamPoly,
    den: ParamPoly,
}

impl Default for ParamField {
    fn default() -> Self {
        ParamField::zero()
    }
}

impl ParamField {
    pub fn zero() -> Self {
        ParamField {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(ParamPoly::constant(BigInt::from(n)))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamField {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        ParamField {
            num: ParamPoly::constant(r.numer().clone()),
            den: ParamPoly::constant(r.denom().clone()),
        }
    }

    pub fn param(name: Symbol) -> Self {
        Self::from_poly(ParamPoly::var(name))
    }

    /// Builds `num / den`, reducing to canonical form.
    ///
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in ParamField");
        if num.is_zero() {
            return ParamField::zero();
        }
        if let Some(d) = den.as_constant() {
            let g = num.content().gcd(&d);
            let g = if d.is_negative() { -g } else { g };
            let num = num.div_exact(&ParamPoly::constant(g.clone())).expect("content divides");
            return ParamField {
                num,
                den: ParamPoly::constant(d / g),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = -num;
            den = -den;
        }
        ParamField { num, den }
    }

    /// `num / den` for coprime inputs; only the sign is normalized.
    fn from_coprime(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return ParamField::zero();
        }
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            ParamField { num: -num, den: -den }
        } else {
            ParamField { num, den }
        }
    }

    /// `(n1 / d1) · (n2 / d2)` where each quotient is already reduced.
    fn cross_reduced(n1: &ParamPoly, d1: &ParamPoly, n2: &ParamPoly, d2: &ParamPoly) -> Self {
        let g1 = n1.gcd(d2);
        let g2 = n2.gcd(d1);
        let part = |p: &ParamPoly, g: &ParamPoly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        ParamField::from_coprime(
            &part(n1, &g1) * &part(n2, &g2),
            &part(d1, &g2) * &part(d2, &g1),
        )
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when no parameter appears.
    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        Some(BigRational::new(
            self.num.as_constant()?,
            self.den.as_constant()?,
        ))
    }

    pub fn is_negative_leading(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn inv(&self) -> ParamField {
        assert!(!self.is_zero(), "division by zero in ParamField");
        ParamField::from_coprime(self.den.clone(), self.num.clone())
    }

    /// Evaluate; the error names a denominator that vanishes at `values`.
    pub fn eval<S: Scalar>(&self, values: &BTreeMap<String, S>) -> Result<S, EvalError> {
        let d = self
            .den
            .eval(values)
            .map_err(EvalError::Unbound)?;
        if d.is_zero() {
            return Err(EvalError::VanishingDivisor(self.den.to_string()));
        }
        let n = self.num.eval(values).map_err(EvalError::Unbound)?;
        Ok(n / d)
    }

    pub fn specialize(
        &self,
        values: &BTreeMap<String, BigRational>,
    ) -> Result<ParamField, EvalError> {
        let d = self.den.specialize(values);
        if d.is_zero() {
            return Err(EvalError::VanishingDivisor(self.den.to_string()));
        }
        Ok(self.num.specialize(values) / d)
    }

    /// Cross-multiplication equality test (independent of reduction).
    pub fn cross_eq(&self, other: &ParamField) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    fn render(&self, latex: bool) -> String {
        let num = self.num.render(latex);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.render(latex);
        if latex {
            let (sign, num) = match num.strip_prefix('-') {
                Some(rest) if self.num.num_terms() == 1 => ("-", rest.to_string()),
                _ => ("", num),
            };
            format!("{sign}\\frac{{{num}}}{{{den}}}")
        } else {
            let num = if self.num.num_terms() > 1 {
                format!("({num})")
            } else {
                num
            };
            let den = if self.den.num_terms() > 1
                || (!self.den.is_constant() && den.contains('*'))
            {
                format!("({den})")
            } else {
                den
            };
            format!("{num}/{den}")
        }
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value bound for `{0}`")]
    Unbound(String),
    #[error("divisor `{0}` vanishes at the given parameter values")]
    VanishingDivisor(String),
    #[error("cannot evaluate symbolic atom `{0}` numerically")]
    Symbolic(String),
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Add for &ParamField {
    type Output = ParamField;
    fn add(self, rhs: &ParamField) -> ParamField {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ParamField::from_poly(&self.num + &rhs.num);
            }
            return ParamField::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            return ParamField::from_coprime(
                &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                &self.den * &rhs.den,
            );
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d2) + &(&rhs.num * &d1);
        if t.is_zero() {
            return ParamField::zero();
        }
        let g2 = t.gcd(&g);
        ParamField::from_coprime(
            t.div_exact(&g2).expect("gcd divides"),
            &d1 * &rhs.den.div_exact(&g2).expect("gcd divides"),
        )
    }
}

impl Sub for &ParamField {
    type Output = ParamField;
    fn sub(self, rhs: &ParamField) -> ParamField {
        self + &(-rhs.clone())
    }
}

impl Mul for &ParamField {
    type Output = ParamField;
    fn mul(self, rhs: &ParamField) -> ParamField {
        if self.is_zero() || rhs.is_zero() {
            return ParamField::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamField::from_poly(&self.num * &rhs.num);
        }
        ParamField::cross_reduced(&self.num, &self.den, &rhs.num, &rhs.den)
    }
}

impl Div for &ParamField {
    type Output = ParamField;
    fn div(self, rhs: &ParamField) -> ParamField {
        assert!(!rhs.is_zero(), "division by zero in ParamField");
        if self.is_zero() {
            return ParamField::zero();
        }
        ParamField::cross_reduced(&self.num, &self.den, &rhs.den, &rhs.num)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamField {
            type Output = ParamField;
            fn $m(self, rhs: ParamField) -> ParamField {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ParamField {
    type Output = ParamField;
    fn neg(self) -> ParamField {
        ParamField {
            num: -self.num,
            den: self.den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> ParamPoly {
        ParamPoly::var(name.into())
    }

    fn c(n: i64) -> ParamPoly {
        ParamPoly::constant(n.into())
    }

    #[test]
    fn gcd_of_products() {
        let a = p("a");
        let b = p("b");
        let f = &(&a + &b) * &(&a - &c(2));
        let g = &(&a + &b) * &(&b + &c(3));
        assert_eq!(f.gcd(&g), &a + &b);
    }

    #[test]
    fn gcd_includes_integer_content() {
        let a = p("a");
        let f = (&a * &a).scale(&6.into());
        let g = a.scale(&4.into());
        assert_eq!(f.gcd(&g), a.scale(&2.into()));
    }

    #[test]
    fn field_reduces_common_factor() {
        let a = p("a");
        let b = p("b");
        let num = &(&a * &a) - &(&b * &b);
        let den = &(&a + &b).scale(&(-2).into()) * &c(1);
        let q = ParamField::new(num, den);
        assert_eq!(q.numer(), &(-(&a - &b)));
        assert_eq!(q.denom(), &c(2));
    }

    #[test]
    fn denominator_sign_normalized() {
        let q = ParamField::new(c(1), -p("b"));
        assert_eq!(q.denom(), &p("b"));
        assert!(q.is_negative_leading());
    }

    #[test]
    fn division_round_trip() {
        let a = ParamField::param("a".into());
        let b = ParamField::param("b".into());
        let x = &(&a * &a) + &ParamField::from_int(9);
        let y = &(&a * &b) - &ParamField::from_int(1);
        let q = &x / &y;
        assert_eq!(&q * &y, x);
        assert_eq!(q.to_string(), "(a^2 + 9)/(a*b - 1)");
    }

    #[test]
    fn vanishing_divisor_named() {
        let q = ParamField::one() / ParamField::param("b".into());
        let mut vals = BTreeMap::new();
        vals.insert("b".to_string(), BigRational::zero());
        assert_eq!(
            q.specialize(&vals),
            Err(EvalError::VanishingDivisor("b".into()))
        );
    }
}
