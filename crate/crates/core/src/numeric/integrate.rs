use std::io::{self, Write};

use num_traits::Float;
use serde::Serialize;

use crate::numeric::NumericError;

/// Point of the system `x' = y, y' = z, z' = x³ − a²x − y − bz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct System3State<F> {
    pub t: F,
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Float> System3State<F> {
    pub fn new(t: F, x: F, y: F, z: F) -> Self {
        System3State { t, x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        [self.t, self.x, self.y, self.z].iter().all(|v| v.is_finite())
    }

    fn max_abs(&self) -> F {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

/// Parameters `a > 0`, `b ≥ 0`, step size and final time.
///
/// The integration takes `round(t_end / step)` steps; the last state lies at
/// `t0 + n·step`, which may differ from `t0 + t_end` by up to half a step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericParams<F> {
    pub a: F,
    pub b: F,
    pub step: F,
    pub t_end: F,
}

impl<F: Float> NumericParams<F> {
    pub fn validate(&self) -> Result<(), NumericError> {
        let all_finite = [self.a, self.b, self.step, self.t_end]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(NumericError::InvalidParams("values must be finite".into()));
        }
        if self.a <= F::zero() {
            return Err(NumericError::InvalidParams("a must be positive".into()));
        }
        if self.b < F::zero() {
            return Err(NumericError::InvalidParams("b must be nonnegative".into()));
        }
        if self.step <= F::zero() {
            return Err(NumericError::InvalidParams("step must be positive".into()));
        }
        if self.t_end < F::zero() {
            return Err(NumericError::InvalidParams("t_end must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.step).round().to_usize().unwrap_or(0)
    }
}

/// Right-hand side `(y, z, x(x² − a²) − y − bz)`.
pub fn rhs<F: Float>(p: &NumericParams<F>, [x, y, z]: [F; 3]) -> [F; 3] {
    [y, z, x * (x * x - p.a * p.a) - y - p.b * z]
}

/// The three equilibria `(0,0,0)`, `(a,0,0)`, `(-a,0,0)`.
pub fn equilibria<F: Float>(a: F) -> [[F; 3]; 3] {
    let o = F::zero();
    [[o, o, o], [a, o, o], [-a, o, o]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Truncation {
    /// A component exceeded `1e12` in magnitude.
    Diverged,
    /// A component became NaN or infinite.
    NotFinite,
}

/// States at every step, from the initial state to the last good one.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<F> {
    pub states: Vec<System3State<F>>,
    pub truncated: Option<Truncation>,
}

impl<F: Float> Trajectory<F> {
    pub fn last(&self) -> &System3State<F> {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn axpy<F: Float>(y: [F; 3], h: F, k: [F; 3]) -> [F; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Classical fixed-step fourth-order Runge–Kutta.
pub fn integrate<F: Float>(
    params: &NumericParams<F>,
    init: System3State<F>,
) -> Result<Trajectory<F>, NumericError> {
    params.validate()?;
    if !init.is_finite() {
        return Err(NumericError::InvalidState("initial state must be finite".into()));
    }
    let h = params.step;
    let half = h / (F::one() + F::one());
    let sixth = h / F::from(6).expect("small integer");
    let two = F::one() + F::one();
    let limit = F::from(1e12).expect("representable bound");
    let n = params.steps();
    let mut states = Vec::with_capacity(n + 1);
    states.push(init);
    let mut u = [init.x, init.y, init.z];
    for i in 1..=n {
        let k1 = rhs(params, u);
        let k2 = rhs(params, axpy(u, half, k1));
        let k3 = rhs(params, axpy(u, half, k2));
        let k4 = rhs(params, axpy(u, h, k3));
        for c in 0..3 {
            u[c] = u[c] + sixth * (k1[c] + two * k2[c] + two * k3[c] + k4[c]);
        }
        let t = init.t + F::from(i).expect("step count fits") * h;
        let s = System3State::new(t, u[0], u[1], u[2]);
        if !s.is_finite() {
            return Ok(Trajectory { states, truncated: Some(Truncation::NotFinite) });
        }
        if s.max_abs() > limit {
            return Ok(Trajectory { states, truncated: Some(Truncation::Diverged) });
        }
        states.push(s);
    }
    Ok(Trajectory { states, truncated: None })
}

/// CSV with header `t,x,y,z` and 17 significant digits per value.
pub fn write_csv<F: Float + std::fmt::LowerExp, W: Write>(
    traj: &Trajectory<F>,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "t,x,y,z")?;
    for s in &traj.states {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.x, s.y, s.z)?;
    }
    Ok(())
}
