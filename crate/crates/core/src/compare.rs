//! Term-level comparison of polynomials.

use crate::expr::{Atom, Expr, Monomial, ParamField, VarNames};

/// One monomial whose coefficient differs between two expressions; a zero
/// coefficient means the term is absent on that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMismatch {
    pub monomial: Monomial,
    pub computed: ParamField,
    pub reference: ParamField,
}

/// Differences between a computed expression and a reference.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TermDiff {
    pub mismatches: Vec<TermMismatch>,
}

impl TermDiff {
    pub fn is_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// One line per mismatch: `monomial: computed <coeff>, reference <coeff>`.
    pub fn render(&self, names: &VarNames) -> Vec<String> {
        self.mismatches
            .iter()
            .map(|m| {
                format!(
                    "{}: computed {}, reference {}",
                    m.monomial.display_with(names),
                    m.computed,
                    m.reference
                )
            })
            .collect()
    }
}

/// Compares coefficients of every monomial of `computed` and `reference`.
pub fn term_diff(computed: &Expr, reference: &Expr) -> TermDiff {
    let delta = computed - reference;
    let mismatches = delta
        .terms()
        .rev()
        .map(|(m, _)| TermMismatch {
            monomial: m.clone(),
            computed: computed.coefficient(m).cloned().unwrap_or_default(),
            reference: reference.coefficient(m).cloned().unwrap_or_default(),
        })
        .collect();
    TermDiff { mismatches }
}

/// Like [`term_diff`], after removing from each side the largest power of
/// the dependent variable dividing all of its terms.
pub fn term_diff_up_to_x_power(computed: &Expr, reference: &Expr) -> TermDiff {
    let strip = |e: &Expr| {
        let m = e.monomial_content(|a| *a == Atom::Jet(0));
        e.div_monomial(&m).expect("content divides")
    };
    term_diff(&strip(computed), &strip(reference))
}
