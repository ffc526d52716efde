use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{Atom, EvalError};
use crate::lie::{symmetry_condition, Generator, OdeSpec};
use crate::numeric::NumericError;

/// Smallest admissible `|x|` for jet samples by default.
pub const DEFAULT_X_MIN: f64 = 1e-6;

/// Point `(t, x, ẋ)` of the first jet space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JetSample {
    pub t: f64,
    pub x: f64,
    pub xdot: f64,
}

/// The polynomial symmetry condition of a concrete generator, with
/// coefficients evaluated at fixed parameter values.
#[derive(Clone, Debug)]
pub struct ResidualEvaluator {
    terms: Vec<(f64, [u32; 3])>,
    x_min: f64,
}

fn eval_error(e: EvalError) -> NumericError {
    match e {
        EvalError::Unbound(p) => NumericError::Unbound(p),
        EvalError::VanishingDivisor(d) => NumericError::VanishingDivisor(d),
        EvalError::Symbolic(s) => NumericError::Eval(format!("symbolic atom {s}")),
    }
}

impl ResidualEvaluator {
    pub fn new(
        ode: &OdeSpec,
        g: &Generator,
        params: &BTreeMap<String, f64>,
    ) -> Result<Self, NumericError> {
        if !g.is_concrete() {
            return Err(NumericError::NotConcrete);
        }
        if let Some(p) = ode.params().iter().find(|p| !params.contains_key(&***p)) {
            return Err(NumericError::Unbound(p.to_string()));
        }
        let cond = symmetry_condition(ode, g)?.expr;
        let mut terms = Vec::with_capacity(cond.len());
        for (m, c) in cond.terms() {
            let coeff = c.eval(params).map_err(eval_error)?;
            let mut exps = [0u32; 3];
            for (a, e) in m.factors() {
                let slot = match a {
                    Atom::Indep => 0,
                    Atom::Jet(0) => 1,
                    Atom::Jet(1) => 2,
                    other => {
                        return Err(NumericError::Eval(format!(
                            "unexpected atom {other} in the symmetry condition"
                        )))
                    }
                };
                exps[slot] = *e;
            }
            terms.push((coeff, exps));
        }
        Ok(ResidualEvaluator {
            terms,
            x_min: DEFAULT_X_MIN,
        })
    }

    pub fn with_x_min(mut self, x_min: f64) -> Self {
        self.x_min = x_min;
        self
    }

    /// True when the condition is identically zero.
    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, s: &JetSample) -> Result<f64, NumericError> {
        if !(s.x.abs() >= self.x_min) {
            return Err(NumericError::SampleDomain(format!(
                "|x| = {} is below {}",
                s.x.abs(),
                self.x_min
            )));
        }
        let vals = [s.t, s.x, s.xdot];
        Ok(self
            .terms
            .iter()
            .map(|(c, e)| {
                (0..3).fold(*c, |acc, k| acc * vals[k].powi(e[k] as i32))
            })
            .sum())
    }
}

/// Residual of `g` on `ode` at one sample.
pub fn residual(
    ode: &OdeSpec,
    g: &Generator,
    s: &JetSample,
    params: &BTreeMap<String, f64>,
) -> Result<f64, NumericError> {
    ResidualEvaluator::new(ode, g, params)?.eval(s)
}

/// Sampling box for `(t, x, ẋ)`; samples with `|x| < x_min` are redrawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleBox {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub xdot: (f64, f64),
    pub x_min: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            t: (-2.0, 2.0),
            x: (-2.0, 2.0),
            xdot: (-2.0, 2.0),
            x_min: DEFAULT_X_MIN,
        }
    }
}

impl SampleBox {
    pub fn validate(&self) -> Result<(), NumericError> {
        for (name, (lo, hi)) in [("t", self.t), ("x", self.x), ("xdot", self.xdot)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(NumericError::SampleDomain(format!(
                    "range for {name} must be finite with lo <= hi"
                )));
            }
        }
        if !(self.x_min >= 0.0) || self.x.0.abs().max(self.x.1.abs()) <= self.x_min {
            return Err(NumericError::SampleDomain(
                "x range lies entirely inside the excluded band around 0".into(),
            ));
        }
        Ok(())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> JetSample {
        let uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
            if lo == hi {
                lo
            } else {
                rng.random_range(lo..=hi)
            }
        };
        let t = uniform(rng, self.t);
        let x = loop {
            let x = uniform(rng, self.x);
            if x.abs() >= self.x_min {
                break x;
            }
        };
        let xdot = uniform(rng, self.xdot);
        JetSample { t, x, xdot }
    }
}

/// Summary of a residual sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub seed: u64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub worst_sample: Option<JetSample>,
}

/// Evaluates the residual at `n` samples drawn from `bx` by a ChaCha8
/// generator seeded with `seed`. The result depends only on the inputs.
pub fn sample_sweep(
    eval: &ResidualEvaluator,
    n: usize,
    seed: u64,
    bx: &SampleBox,
) -> Result<SweepReport, NumericError> {
    bx.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<JetSample> = (0..n).map(|_| bx.draw(&mut rng)).collect();
    let eval = eval.clone().with_x_min(bx.x_min);
    let values = samples
        .par_iter()
        .map(|s| eval.eval(s).map(f64::abs))
        .collect::<Result<Vec<f64>, NumericError>>()?;
    let mut worst: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if worst.is_none_or(|w| *v > values[w]) {
            worst = Some(i);
        }
    }
    let sum: f64 = values.iter().sum();
    Ok(SweepReport {
        n,
        seed,
        max_abs: worst.map_or(0.0, |w| values[w]),
        mean_abs: if n == 0 { 0.0 } else { sum / n as f64 },
        worst_sample: worst.map(|w| samples[w]),
    })
}
