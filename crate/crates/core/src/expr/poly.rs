use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use crate::expr::{Atom, ExprError, ParamField, DEFAULT_MAX_EXPONENT};

/// Power product of atoms, sorted by atom, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn power(a: Atom, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    /// Builds a monomial from unsorted factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, e) in factors {
            if e > 0 {
                *map.entry(a).or_default() += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(a))
            .map_or(0, |i| self.0[i].1)
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
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
        Monomial(out)
    }

    /// Exact monomial quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, e) in &self.0 {
            let d = other.exponent(a);
            match e.cmp(&d) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((a.clone(), e - d)),
            }
        }
        if other.0.iter().any(|(a, _)| self.exponent(a) == 0) {
            return None;
        }
        Some(Monomial(out))
    }

    /// Splits off the power of `a`.
    pub fn split(&self, a: &Atom) -> (u32, Monomial) {
        match self.0.binary_search_by(|(x, _)| x.cmp(a)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Factor-wise minimum (the monomial gcd).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, e)| {
                    let d = other.exponent(a).min(*e);
                    (d > 0).then(|| (a.clone(), d))
                })
                .collect(),
        )
    }

    /// Degree counting only atoms matching `pred`.
    pub fn degree_where(&self, pred: impl Fn(&Atom) -> bool) -> u32 {
        self.0.iter().filter(|(a, _)| pred(a)).map(|(_, e)| e).sum()
    }
}

/// Graded lexicographic order over the canonical atom order.
impl Ord for Monomial {
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

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical polynomial over [`ParamField`] in the [`Atom`] indeterminates.
///
/// No stored coefficient is zero, and terms are keyed by monomial, so two
/// `Expr`s are structurally equal exactly when they are equal polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, ParamField>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(ParamField::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(ParamField::from_int(n))
    }

    pub fn constant(c: ParamField) -> Self {
        Expr::term(Monomial::one(), c)
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(Monomial::atom(a), ParamField::one())
    }

    pub fn indep() -> Self {
        Expr::atom(Atom::Indep)
    }

    pub fn jet(k: u32) -> Self {
        Expr::atom(Atom::Jet(k))
    }

    pub fn term(m: Monomial, c: ParamField) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, ParamField)>) -> Self {
        let mut e = Expr::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamField) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ParamField)> + Clone {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, ParamField)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&ParamField> {
        self.terms.get(m)
    }

    /// The value if this expression involves no atoms.
    pub fn as_constant(&self) -> Option<ParamField> {
        match self.terms.len() {
            0 => Some(ParamField::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.exponent(a) > 0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| a.clone()))
            .collect()
    }

    pub fn max_jet_order(&self) -> Option<u32> {
        self.atoms().iter().filter_map(Atom::jet_order).max()
    }

    pub fn scale(&self, c: &ParamField) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(&ParamField) -> ParamField,
    ) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coefficients<E>(
        &self,
        mut f: impl FnMut(&ParamField) -> Result<ParamField, E>,
    ) -> Result<Expr, E> {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Power with the default exponent bound.
    pub fn pow(&self, n: u32) -> Result<Expr, ExprError> {
        self.pow_bounded(n, DEFAULT_MAX_EXPONENT)
    }

    pub fn pow_bounded(&self, n: u32, max_exponent: u32) -> Result<Expr, ExprError> {
        if n > max_exponent {
            return Err(ExprError::ExponentBound {
                exponent: n,
                max: max_exponent,
            });
        }
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = self.checked_mul(&acc, max_exponent)?;
        }
        Ok(acc)
    }

    /// Product that fails once any atom exponent exceeds `max_exponent`.
    pub fn checked_mul(&self, other: &Expr, max_exponent: u32) -> Result<Expr, ExprError> {
        let p = self * other;
        let worst = p.terms.keys().map(Monomial::max_exponent).max().unwrap_or(0);
        if worst > max_exponent {
            return Err(ExprError::ExponentBound {
                exponent: worst,
                max: max_exponent,
            });
        }
        Ok(p)
    }

    /// Replaces every occurrence of `target` by the polynomial `replacement`.
    pub fn substitute(&self, target: &Atom, replacement: &Expr) -> Expr {
        let mut powers: Vec<Expr> = vec![Expr::one()];
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let (p, rest) = m.split(target);
            while powers.len() <= p as usize {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            let piece = powers[p as usize].mul_monomial(&rest).scale(c);
            out = &out + &piece;
        }
        out
    }

    /// Ring homomorphism fixing coefficients: each atom is replaced by `f(atom)`,
    /// or kept when `f` returns `None`. All replacements happen simultaneously.
    pub fn map_atoms(&self, f: impl Fn(&Atom) -> Option<Expr>) -> Expr {
        let mut cache: BTreeMap<(Atom, u32), Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut piece = Expr::constant(c.clone());
            for (a, e) in m.factors() {
                match f(a) {
                    None => kept.push((a.clone(), *e)),
                    Some(img) => {
                        let pw = cache
                            .entry((a.clone(), *e))
                            .or_insert_with(|| {
                                let mut acc = Expr::one();
                                for _ in 0..*e {
                                    acc = &acc * &img;
                                }
                                acc
                            })
                            .clone();
                        piece = &piece * &pw;
                    }
                }
            }
            out = &out + &piece.mul_monomial(&Monomial(kept));
        }
        out
    }

    /// Substitutes `target = num/den` and multiplies through by `den^d`,
    /// where `d` is the degree of `self` in `target`. Returns the cleared
    /// polynomial and `d`.
    ///
    /// Panics if `den` is zero.
    pub fn rational_substitute(&self, target: &Atom, num: &Expr, den: &Expr) -> (Expr, u32) {
        assert!(!den.is_zero(), "rational_substitute with zero denominator");
        let d = self.degree_in(target);
        let mut num_pows = vec![Expr::one()];
        let mut den_pows = vec![Expr::one()];
        for _ in 0..d {
            num_pows.push(num_pows.last().unwrap() * num);
            den_pows.push(den_pows.last().unwrap() * den);
        }
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let (p, rest) = m.split(target);
            let factor = &num_pows[p as usize] * &den_pows[(d - p) as usize];
            out = &out + &factor.mul_monomial(&rest).scale(c);
        }
        (out, d)
    }

    /// Coefficients of each power of `by`, in ascending power; zero powers omitted.
    pub fn collect(&self, by: &Atom) -> Vec<(u32, Expr)> {
        let mut groups: BTreeMap<u32, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (p, rest) = m.split(by);
            groups.entry(p).or_default().add_term(rest, c.clone());
        }
        groups.into_iter().filter(|(_, e)| !e.is_zero()).collect()
    }

    /// Inverse of [`collect`](Self::collect).
    pub fn reassemble(by: &Atom, parts: &[(u32, Expr)]) -> Expr {
        let mut out = Expr::zero();
        for (p, e) in parts {
            out = &out + &e.mul_monomial(&Monomial::power(by.clone(), *p));
        }
        out
    }

    /// Coefficients with respect to all monomials in the atoms selected by `pred`.
    pub fn collect_where(&self, pred: impl Fn(&Atom) -> bool) -> BTreeMap<Monomial, Expr> {
        let mut groups: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (sel, rest): (Vec<_>, Vec<_>) =
                m.factors().iter().cloned().partition(|(a, _)| pred(a));
            groups
                .entry(Monomial(sel))
                .or_default()
                .add_term(Monomial(rest), c.clone());
        }
        groups
    }

    /// Largest monomial dividing every term, restricted to atoms selected by `pred`.
    pub fn monomial_content(&self, pred: impl Fn(&Atom) -> bool) -> Monomial {
        let mut it = self.terms.keys().map(|m| {
            Monomial(m.factors().iter().filter(|(a, _)| pred(a)).cloned().collect())
        });
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first, |acc, m| acc.gcd(&m)),
        }
    }

    /// Divides every term by `m`; `None` unless `m` divides each of them.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Expr> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(Expr { terms })
    }

    /// Total degree in the atoms selected by `pred`.
    pub fn degree_where(&self, pred: impl Fn(&Atom) -> bool + Copy) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_where(pred))
            .max()
            .unwrap_or(0)
    }

    /// Parameters occurring in any coefficient.
    pub fn parameters(&self) -> BTreeSet<crate::expr::Symbol> {
        self.terms.values().flat_map(ParamField::variables).collect()
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<ParamField> for Expr {
    fn from(c: ParamField) -> Self {
        Expr::constant(c)
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}
