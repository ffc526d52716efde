use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Atom, Expr, FnDeriv, Monomial, ParamField, ParamPoly, Symbol, VarNames};
use crate::lie::{instantiate_functions, Generator};
use crate::solver::{SolverError, TOdeSystem};

/// Where a row of a [`LinearSystem`] came from: the coefficient of
/// `ẋ^xdot_power · x^x_power · t^t_power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowOrigin {
    pub xdot_power: u32,
    pub x_power: u32,
    pub t_power: u32,
}

impl RowOrigin {
    pub fn display_with(&self, names: &VarNames) -> String {
        format!(
            "{}'^{} {}^{} {}^{}",
            names.dep, self.xdot_power, names.dep, self.x_power, names.indep, self.t_power
        )
    }
}

impl fmt::Display for RowOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VarNames::default()))
    }
}

/// `Σ coeffs[j] · columns[j] + constant = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRow {
    pub origin: RowOrigin,
    pub coeffs: BTreeMap<usize, ParamField>,
    pub constant: ParamField,
}

impl LinearRow {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }
}

/// Linear system in named constants over the parameter field.
///
/// `targets` are expressions in the constants (typically `xi` and `eta`)
/// evaluated on each solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    columns: Vec<Symbol>,
    rows: Vec<LinearRow>,
    targets: Vec<(String, Expr)>,
}

fn column_map(columns: &[Symbol]) -> BTreeMap<Symbol, usize> {
    columns
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect()
}

impl LinearSystem {
    pub fn new(
        columns: Vec<Symbol>,
        rows: Vec<LinearRow>,
        targets: Vec<(String, Expr)>,
    ) -> Result<Self, SolverError> {
        for r in &rows {
            if let Some((j, _)) = r.coeffs.iter().find(|(j, v)| **j >= columns.len() || v.is_zero()) {
                return Err(SolverError::Invariant(format!(
                    "row {} has an invalid entry in column {j}",
                    r.origin
                )));
            }
        }
        Ok(LinearSystem {
            columns,
            rows,
            targets,
        })
    }

    /// Rows from the coefficients of each `(t, x)` monomial of the given
    /// polynomials, which must be linear in the constants named by `columns`.
    /// Zero rows are dropped.
    pub fn from_polynomials(
        columns: Vec<Symbol>,
        equations: &[(RowOrigin, Expr)],
        targets: Vec<(String, Expr)>,
    ) -> Result<Self, SolverError> {
        let index = column_map(&columns);
        let mut rows = Vec::new();
        for (base, e) in equations {
            let groups = e.collect_where(|a| matches!(a, Atom::Indep | Atom::Jet(0)));
            for (m, coeff) in groups {
                let origin = RowOrigin {
                    xdot_power: base.xdot_power,
                    x_power: base.x_power + m.exponent(&Atom::Jet(0)),
                    t_power: base.t_power + m.exponent(&Atom::Indep),
                };
                let row = linear_row(origin, &coeff, &index)?;
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
        LinearSystem::new(columns, rows, targets)
    }

    pub fn columns(&self) -> &[Symbol] {
        &self.columns
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn targets(&self) -> &[(String, Expr)] {
        &self.targets
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rows.iter().all(|r| r.constant.is_zero())
    }

    /// Row `i` as the expression `Σ coeff · constant + constant_term`.
    pub fn row_expr(&self, i: usize) -> Expr {
        let r = &self.rows[i];
        let mut e = Expr::constant(r.constant.clone());
        for (j, v) in &r.coeffs {
            e.add_term(Monomial::atom(Atom::Const(self.columns[*j].clone())), v.clone());
        }
        e
    }

    /// `Σ row · x^x_power · t^t_power` over rows from `ẋ^xdot_power`.
    pub fn reassemble(&self, xdot_power: u32) -> Expr {
        let mut out = Expr::zero();
        for (i, r) in self.rows.iter().enumerate() {
            if r.origin.xdot_power != xdot_power {
                continue;
            }
            let m = Monomial::from_factors([
                (Atom::Indep, r.origin.t_power),
                (Atom::Jet(0), r.origin.x_power),
            ]);
            out = &out + &self.row_expr(i).mul_monomial(&m);
        }
        out
    }

    pub(crate) fn map_entries(
        &self,
        mut f: impl FnMut(&ParamField) -> Result<ParamField, SolverError>,
        mut g: impl FnMut(&Expr) -> Result<Expr, SolverError>,
    ) -> Result<Self, SolverError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut coeffs = BTreeMap::new();
            for (j, v) in &r.coeffs {
                let v = f(v)?;
                if !v.is_zero() {
                    coeffs.insert(*j, v);
                }
            }
            let row = LinearRow {
                origin: r.origin,
                coeffs,
                constant: f(&r.constant)?,
            };
            if !row.is_zero() {
                rows.push(row);
            }
        }
        let targets = self
            .targets
            .iter()
            .map(|(n, e)| Ok((n.clone(), g(e)?)))
            .collect::<Result<_, SolverError>>()?;
        LinearSystem::new(self.columns.clone(), rows, targets)
    }
}

fn linear_row(
    origin: RowOrigin,
    coeff: &Expr,
    index: &BTreeMap<Symbol, usize>,
) -> Result<LinearRow, SolverError> {
    let mut row = LinearRow {
        origin,
        coeffs: BTreeMap::new(),
        constant: ParamField::zero(),
    };
    for (m, v) in coeff.terms() {
        match m.factors() {
            [] => row.constant = v.clone(),
            [(Atom::Const(c), 1)] if index.contains_key(c) => {
                row.coeffs.insert(index[c], v.clone());
            }
            _ => {
                return Err(SolverError::Invariant(format!(
                    "row {origin} is not linear in the unknown constants"
                )))
            }
        }
    }
    Ok(row)
}

/// Name of the constant multiplying `t^k` in the polynomial replacing `f`.
fn coefficient_name(f: &FnDeriv, k: u32) -> Symbol {
    Symbol::from(format!("c_{}_{k}", f.name()))
}

/// Replaces each unknown function of `t` by `Σ_{k ≤ deg_t} c_f_k t^k` and
/// collects powers of `t`.
///
/// Columns are ordered by function (in the order of `tsys.functions()`) and
/// then by power of `t`.
pub fn t_reduce(tsys: &TOdeSystem, deg_t: u32) -> Result<LinearSystem, SolverError> {
    let mut columns = Vec::new();
    let mut values = Vec::new();
    for f in tsys.functions() {
        let mut poly = Expr::zero();
        for k in 0..=deg_t {
            let c = coefficient_name(f, k);
            poly.add_term(
                Monomial::from_factors([(Atom::Indep, k), (Atom::Const(c.clone()), 1)]),
                ParamField::one(),
            );
            columns.push(c);
        }
        values.push((f.clone(), poly));
    }
    let equations = tsys
        .equations()
        .iter()
        .map(|eq| {
            let e = instantiate_functions(&eq.expr, &values)?;
            let origin = RowOrigin {
                xdot_power: eq.xdot_power,
                x_power: eq.x_power,
                t_power: 0,
            };
            Ok((origin, e))
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    let targets = tsys
        .targets()
        .iter()
        .map(|(n, e)| Ok((n.clone(), instantiate_functions(e, &values)?)))
        .collect::<Result<Vec<_>, SolverError>>()?;
    LinearSystem::from_polynomials(columns, &equations, targets)
}

/// A parameter polynomial assumed nonzero by the elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub divisor: ParamPoly,
    pub origin: String,
}

/// A row reduced to `0 = constant` with a nonzero constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub origin: RowOrigin,
    pub constant: ParamField,
}

/// Solution space of a [`LinearSystem`] and its image under the targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryBasis {
    pub labels: Vec<String>,
    pub columns: Vec<Symbol>,
    /// Pivot columns in elimination order.
    pub pivots: Vec<usize>,
    /// Free columns, ascending; one null vector per entry.
    pub free: Vec<usize>,
    pub vectors: Vec<Vec<ParamField>>,
    /// Target values on each null vector, aligned with `labels`.
    pub elements: Vec<Vec<Expr>>,
    pub genericity: Vec<Genericity>,
    pub inconsistency: Option<Inconsistency>,
}

impl SymmetryBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Elements as generators; requires the targets to be `xi`, `eta`.
    pub fn generators(&self) -> Result<Vec<Generator>, SolverError> {
        if self.labels != ["xi", "eta"] {
            return Err(SolverError::Invariant(format!(
                "basis targets {:?} are not (xi, eta)",
                self.labels
            )));
        }
        self.elements
            .iter()
            .map(|e| Ok(Generator::new(e[0].clone(), e[1].clone())?))
            .collect()
    }

    /// `Σ names[k] · elements[k]` for each target.
    pub fn general_solution(&self, names: &[Symbol]) -> Vec<(String, Expr)> {
        self.labels
            .iter()
            .enumerate()
            .map(|(t, label)| {
                let mut e = Expr::zero();
                for (k, el) in self.elements.iter().enumerate() {
                    let c = Monomial::atom(Atom::Const(names[k].clone()));
                    e = &e + &el[t].mul_monomial(&c);
                }
                (label.clone(), e)
            })
            .collect()
    }

    /// Columns that vanish on the whole solution space.
    pub fn forced_zero(&self) -> Vec<Symbol> {
        (0..self.columns.len())
            .filter(|&j| self.vectors.iter().all(|v| v[j].is_zero()))
            .map(|j| self.columns[j].clone())
            .collect()
    }
}

struct Genericities(Vec<Genericity>);

impl Genericities {
    fn record(&mut self, p: &ParamPoly, origin: impl FnOnce() -> String) {
        if p.is_constant() {
            return;
        }
        let divisor = p.divisor_form();
        if !self.0.iter().any(|g| g.divisor == divisor) {
            self.0.push(Genericity {
                divisor,
                origin: origin(),
            });
        }
    }
}

fn pivot_size(v: &ParamField) -> (usize, usize) {
    (v.numer().num_terms() + v.denom().num_terms(), v.variables().len())
}

/// Exact Gauss-Jordan elimination over the parameter field.
///
/// Columns are processed in order. Within a column the first remaining row
/// with a parameter-free entry is preferred as pivot, then the row whose entry
/// has the fewest terms (earliest on ties); dividing by a parameter-dependent pivot records its
/// numerator as a genericity condition, as does any parameter-dependent
/// denominator in the input.
pub fn eliminate(system: &LinearSystem) -> SymmetryBasis {
    let n = system.columns.len();
    let mut gen = Genericities(Vec::new());
    for r in &system.rows {
        for v in r.coeffs.values().chain([&r.constant]) {
            gen.record(v.denom(), || format!("coefficient denominator in row {}", r.origin));
        }
    }
    let mut rows: Vec<LinearRow> = system.rows.clone();
    let mut pivots = Vec::new();
    for col in 0..n {
        let r = pivots.len();
        let candidates = || (r..rows.len()).filter(|&i| rows[i].coeffs.contains_key(&col));
        let Some(p) = candidates()
            .find(|&i| rows[i].coeffs[&col].is_rational())
            .or_else(|| candidates().min_by_key(|&i| pivot_size(&rows[i].coeffs[&col])))
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].coeffs[&col].clone();
        if !pivot.is_one() {
            gen.record(pivot.numer(), || {
                format!("pivot on {} in row {}", system.columns[col], rows[r].origin)
            });
            let inv = pivot.inv();
            let row = &mut rows[r];
            for v in row.coeffs.values_mut() {
                *v = &*v * &inv;
            }
            row.constant = &row.constant * &inv;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let Some(f) = row.coeffs.get(&col).cloned() else {
                continue;
            };
            for (j, v) in &prow.coeffs {
                let updated = match row.coeffs.get(j) {
                    Some(old) => old - &(&f * v),
                    None => -(&f * v),
                };
                if updated.is_zero() {
                    row.coeffs.remove(j);
                } else {
                    row.coeffs.insert(*j, updated);
                }
            }
            if !prow.constant.is_zero() {
                row.constant = &row.constant - &(&f * &prow.constant);
            }
        }
        pivots.push(col);
    }
    let inconsistency = rows[pivots.len()..]
        .iter()
        .find(|r| !r.constant.is_zero())
        .map(|r| Inconsistency {
            origin: r.origin,
            constant: r.constant.clone(),
        });
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let (vectors, elements) = if inconsistency.is_some() {
        (Vec::new(), Vec::new())
    } else {
        let vectors: Vec<Vec<ParamField>> = free
            .iter()
            .map(|&j| {
                let mut v = vec![ParamField::zero(); n];
                v[j] = ParamField::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    if let Some(x) = rows[k].coeffs.get(&j) {
                        v[pc] = -x.clone();
                    }
                }
                v
            })
            .collect();
        let index = column_map(&system.columns);
        let elements = vectors
            .iter()
            .map(|v| {
                system
                    .targets
                    .iter()
                    .map(|(_, e)| {
                        e.map_atoms(|a| match a {
                            Atom::Const(c) => index.get(c).map(|&j| Expr::constant(v[j].clone())),
                            _ => None,
                        })
                    })
                    .collect()
            })
            .collect();
        (vectors, elements)
    };
    SymmetryBasis {
        labels: system.targets.iter().map(|(n, _)| n.clone()).collect(),
        columns: system.columns.clone(),
        pivots,
        free,
        vectors,
        elements,
        genericity: gen.0,
        inconsistency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ArgVar, Symbols};
    use crate::solver::TEquation;
    use std::sync::Arc;

    fn f(name: &str) -> FnDeriv {
        FnDeriv::new(name.into(), Arc::from([ArgVar::Indep]))
    }

    fn tsys(eqs: &[&str], fns: &[&str]) -> TOdeSystem {
        let s = fns
            .iter()
            .fold(Symbols::new(&["a", "b"]), |s, n| s.with_function(n, &[ArgVar::Indep]));
        let equations = eqs
            .iter()
            .enumerate()
            .map(|(i, e)| TEquation {
                xdot_power: 0,
                x_power: i as u32,
                expr: parse_expr(e, &s).unwrap(),
            })
            .collect();
        TOdeSystem::new(equations, fns.iter().map(|n| f(n)).collect()).unwrap()
    }

    #[test]
    fn derivative_vanishing_leaves_constant_free() {
        let sys = t_reduce(&tsys(&["f'"], &["f"]), 3).unwrap();
        assert_eq!(sys.columns().len(), 4);
        let b = eliminate(&sys);
        assert_eq!(b.dim(), 1);
        let forced = b.forced_zero();
        let names: Vec<&str> = forced.iter().map(|s| &**s).collect();
        assert_eq!(names, ["c_f_1", "c_f_2", "c_f_3"]);
        assert_eq!(b.elements[0][0], Expr::one());
    }

    #[test]
    fn reassembly_of_t_reduction() {
        let t = tsys(&["f'' - 2*t*g + a*f", "b*g' - t^2*f"], &["f", "g"]);
        let sys = t_reduce(&t, 4).unwrap();
        let fs = [f("f"), f("g")];
        let values: Vec<(FnDeriv, Expr)> = fs
            .iter()
            .map(|fd| {
                let mut p = Expr::zero();
                for k in 0..=4 {
                    p.add_term(
                        Monomial::from_factors([
                            (Atom::Indep, k),
                            (Atom::Const(coefficient_name(fd, k)), 1),
                        ]),
                        ParamField::one(),
                    );
                }
                (fd.clone(), p)
            })
            .collect();
        let mut whole = Expr::zero();
        for eq in t.equations() {
            let inst = instantiate_functions(&eq.expr, &values).unwrap();
            whole = &whole + &inst.mul_monomial(&Monomial::power(Atom::Jet(0), eq.x_power));
        }
        assert_eq!(sys.reassemble(0), whole);
    }

    #[test]
    fn inconsistent_row_is_witnessed() {
        let sys = LinearSystem::new(
            vec!["c".into()],
            vec![
                LinearRow {
                    origin: RowOrigin { xdot_power: 0, x_power: 0, t_power: 0 },
                    coeffs: BTreeMap::from([(0, ParamField::one())]),
                    constant: ParamField::zero(),
                },
                LinearRow {
                    origin: RowOrigin { xdot_power: 0, x_power: 0, t_power: 1 },
                    coeffs: BTreeMap::from([(0, ParamField::from_int(2))]),
                    constant: ParamField::one(),
                },
            ],
            Vec::new(),
        )
        .unwrap();
        let b = eliminate(&sys);
        assert_eq!(b.dim(), 0);
        assert_eq!(b.inconsistency.unwrap().origin.t_power, 1);
    }

    #[test]
    fn parameter_pivot_is_recorded() {
        let b = eliminate(&t_reduce(&tsys(&["b*f - g", "g"], &["f", "g"]), 0).unwrap());
        assert_eq!(b.dim(), 0);
        assert_eq!(b.genericity.len(), 1);
        assert_eq!(b.genericity[0].divisor.to_string(), "b");
    }

    #[test]
    fn rational_pivot_preferred() {
        let b = eliminate(&t_reduce(&tsys(&["b*f - g", "f"], &["f", "g"]), 0).unwrap());
        assert_eq!(b.dim(), 0);
        assert!(b.genericity.is_empty());
    }
}
