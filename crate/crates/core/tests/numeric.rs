mod common;

use std::collections::BTreeMap;

use common::golden;
use liesym::expr::Expr;
use liesym::lie::{parse_ode_spec, Generator, OdeSpec};
use liesym::numeric::{
    equilibria, integrate, residual, rhs, sample_sweep, JetSample, NumericParams,
    ResidualEvaluator, SampleBox,
};
use liesym::solver::{analyze, AnalysisConfig};
use liesym::{Params, State};

fn floats(text: &str) -> Vec<f64> {
    text.split(',').map(|v| v.trim().parse().unwrap()).collect()
}

struct Smoke {
    params: Params,
    init: State,
    endpoint: [f64; 3],
}

fn smoke(step: f64) -> Smoke {
    let g = golden("rk4_endpoint.txt");
    let init = floats(&g["init"]);
    let end = floats(&g["endpoint"]);
    Smoke {
        params: NumericParams {
            a: g["a"].parse().unwrap(),
            b: g["b"].parse().unwrap(),
            step,
            t_end: g["t_end"].parse().unwrap(),
        },
        init: State::new(0.0, init[0], init[1], init[2]),
        endpoint: [end[0], end[1], end[2]],
    }
}

fn endpoint_error(step: f64) -> f64 {
    let s = smoke(step);
    let last = *integrate(&s.params, s.init).unwrap().last();
    (0..3)
        .map(|i| ([last.x, last.y, last.z][i] - s.endpoint[i]).abs())
        .fold(0.0, f64::max)
}

/// Kutta's 3/8-rule fourth-order scheme.
fn three_eighths(p: &Params, mut u: [f64; 3], h: f64, n: usize) -> [f64; 3] {
    let f = |u: [f64; 3]| {
        let [x, y, z] = u;
        [y, z, x * x * x - p.a * p.a * x - y - p.b * z]
    };
    let add = |u: [f64; 3], terms: &[(f64, [f64; 3])]| {
        let mut out = u;
        for (c, k) in terms {
            for i in 0..3 {
                out[i] += h * c * k[i];
            }
        }
        out
    };
    for _ in 0..n {
        let k1 = f(u);
        let k2 = f(add(u, &[(1.0 / 3.0, k1)]));
        let k3 = f(add(u, &[(-1.0 / 3.0, k1), (1.0, k2)]));
        let k4 = f(add(u, &[(1.0, k1), (-1.0, k2), (1.0, k3)]));
        u = add(u, &[(0.125, k1), (0.375, k2), (0.375, k3), (0.125, k4)]);
    }
    u
}

#[test]
fn golden_endpoint_agrees_with_an_independent_richardson_reference() {
    let s = smoke(1e-3);
    let u0 = [s.init.x, s.init.y, s.init.z];
    let coarse = three_eighths(&s.params, u0, 2e-3, 500);
    let fine = three_eighths(&s.params, u0, 1e-3, 1000);
    for i in 0..3 {
        let extrapolated = fine[i] + (fine[i] - coarse[i]) / 15.0;
        assert!((extrapolated - s.endpoint[i]).abs() < 1e-14, "component {i}");
    }
}

#[test]
fn rk4_matches_golden_endpoint() {
    let s = smoke(1e-3);
    let traj = integrate(&s.params, s.init).unwrap();
    assert_eq!(traj.states.len(), 1001);
    assert!(traj.truncated.is_none());
    assert_eq!(traj.states[0], s.init);
    assert!(endpoint_error(1e-3) < 1e-12);
}

#[test]
fn step_halving_shows_fourth_order_convergence() {
    let ratio = endpoint_error(0.1) / endpoint_error(0.05);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn equilibria_stay_put_over_a_hundred_time_units() {
    for (a, b) in [(1.0, 1.0), (2.0, 0.5), (2.0, 0.0)] {
        let p = NumericParams { a, b, step: 1e-2, t_end: 100.0 };
        for [x, y, z] in equilibria(a) {
            let traj = integrate(&p, State::new(0.0, x, y, z)).unwrap();
            assert!(traj.truncated.is_none());
            for s in &traj.states {
                let drift = (s.x - x).abs().max((s.y - y).abs()).max((s.z - z).abs());
                assert!(drift <= 1e-10);
            }
        }
    }
}

#[test]
fn equilibria_are_the_only_zeros_on_a_sign_grid() {
    for a in [0.5, 1.0, 2.0] {
        let p = NumericParams { a, b: 1.0, step: 1e-2, t_end: 1.0 };
        let grid = [-2.0 * a, -a, -0.5 * a, 0.0, 0.5 * a, a, 2.0 * a];
        let mut zeros = Vec::new();
        for x in grid {
            for y in grid {
                for z in grid {
                    if rhs(&p, [x, y, z]) == [0.0; 3] {
                        zeros.push([x, y, z]);
                    }
                }
            }
        }
        let mut expected = equilibria(a).to_vec();
        expected.sort_by(|u, v| u.partial_cmp(v).unwrap());
        zeros.sort_by(|u, v| u.partial_cmp(v).unwrap());
        assert_eq!(zeros, expected);
    }
}

fn silnikov() -> OdeSpec {
    parse_ode_spec("order=2\nparams=a,b\nrhs_num=t^3 - a^2*t - x - x'^2*x - b*x'*x\nrhs_den=x^2\n")
        .unwrap()
}

fn unit_params() -> BTreeMap<String, f64> {
    BTreeMap::from([("a".to_string(), 1.0), ("b".to_string(), 1.0)])
}

#[test]
fn corrupted_generator_is_detected_and_zero_generator_is_not() {
    let ode = silnikov();
    let at = JetSample { t: 1.0, x: 1.0, xdot: 0.0 };
    let shift = Generator::new(Expr::one(), Expr::zero()).unwrap();
    assert_eq!(residual(&ode, &shift, &at, &unit_params()).unwrap(), -2.0);

    let eval = ResidualEvaluator::new(&ode, &shift, &unit_params()).unwrap();
    let report = sample_sweep(&eval, 1000, 7, &SampleBox::default()).unwrap();
    assert!(report.max_abs >= 1.0);

    let zero = ResidualEvaluator::new(&ode, &Generator::zero(), &unit_params()).unwrap();
    let report = sample_sweep(&zero, 1000, 7, &SampleBox::default()).unwrap();
    assert_eq!(report.max_abs, 0.0);
    assert_eq!(report.mean_abs, 0.0);
}

#[test]
fn free_particle_basis_has_vanishing_sampled_residuals() {
    let ode = parse_ode_spec("order=2\nrhs_num=0\n").unwrap();
    let analysis = analyze(&ode, AnalysisConfig { deg_x: 2, deg_t: 2 }).unwrap();
    let generators = analysis.generators();
    assert_eq!(generators.len(), 8);
    for (i, g) in generators.iter().enumerate() {
        let eval = ResidualEvaluator::new(&ode, g, &BTreeMap::new()).unwrap();
        assert!(eval.is_identically_zero());
        let report = sample_sweep(&eval, 1000, 100 + i as u64, &SampleBox::default()).unwrap();
        assert!(report.max_abs < 1e-10, "generator {i}: {}", report.max_abs);
    }
}

#[test]
fn sweeps_are_reproducible_from_the_seed() {
    let ode = silnikov();
    let shift = Generator::new(Expr::one(), Expr::zero()).unwrap();
    let eval = ResidualEvaluator::new(&ode, &shift, &unit_params()).unwrap();
    let first = sample_sweep(&eval, 500, 42, &SampleBox::default()).unwrap();
    let again = sample_sweep(&eval, 500, 42, &SampleBox::default()).unwrap();
    let other = sample_sweep(&eval, 500, 43, &SampleBox::default()).unwrap();
    assert_eq!(first, again);
    assert_ne!(first, other);
}
