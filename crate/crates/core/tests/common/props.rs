//! Strategies and property checks shared by the proptest suite and the
//! acceptance runner.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use liesym::expr::{
    parse_expr, ArgVar, Atom, Expr, FnDeriv, Monomial, ParamField, ParamPoly, Point, Symbols,
    VarNames,
};
use liesym::jet::{partial, total_derivative, JetContext};
use liesym::lie::{
    determining_system, instantiate_functions, reduce_autonomous, split_determining,
    symmetry_condition, AutonomousOde3, Generator, OdeSpec,
};
use liesym::solver::{
    analyze, eliminate, t_reduce, verify_basis, x_reduce, AnalysisConfig, XAnsatz,
};

pub fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn a() -> ParamPoly {
    ParamPoly::var("a".into())
}

pub fn b() -> ParamPoly {
    ParamPoly::var("b".into())
}

/// `c0 + c1 a + c2 b + c3 a b`.
pub fn param_poly(c: [i64; 4]) -> ParamPoly {
    let ab = &a() * &b();
    [
        (ParamPoly::one(), c[0]),
        (a(), c[1]),
        (b(), c[2]),
        (ab, c[3]),
    ]
    .iter()
    .fold(ParamPoly::zero(), |acc, (p, k)| &acc + &p.scale(&int(*k)))
}

pub fn denominators() -> Vec<ParamPoly> {
    vec![
        ParamPoly::one(),
        ParamPoly::constant(int(2)),
        b(),
        param_poly([1, 1, 0, 0]),
        param_poly([0, 1, -1, 0]),
        param_poly([3, 2, 0, 0]),
        param_poly([1, 0, 0, 1]),
    ]
}

pub fn arb_field() -> impl Strategy<Value = ParamField> {
    (prop::array::uniform4(-3i64..=3), 0..denominators().len())
        .prop_map(|(n, d)| ParamField::new(param_poly(n), denominators()[d].clone()))
}

pub fn arb_nonzero_field() -> impl Strategy<Value = ParamField> {
    arb_field().prop_filter("nonzero", |f| !f.is_zero())
}

pub fn xi_deriv(i: u32, j: u32) -> Atom {
    Atom::Fn(FnDeriv::with_orders(
        "xi".into(),
        Arc::from([ArgVar::Indep, ArgVar::Dep]),
        vec![i, j],
    ))
}

pub fn f1_deriv(k: u32) -> Atom {
    Atom::Fn(FnDeriv::with_orders("f1".into(), Arc::from([ArgVar::Indep]), vec![k]))
}

pub fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::Indep),
        (0u32..=2).prop_map(Atom::Jet),
        (0u32..=2, 0u32..=2).prop_map(|(i, j)| xi_deriv(i, j)),
        (0u32..=2).prop_map(f1_deriv),
        Just(Atom::constant("c1")),
    ]
}

pub fn arb_monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((arb_atom(), 1u32..=3), 0..=3).prop_map(Monomial::from_factors)
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((arb_monomial(), arb_field()), 0..=5).prop_map(Expr::from_terms)
}

pub fn arb_tx_expr() -> impl Strategy<Value = Expr> {
    let atom = prop_oneof![Just(Atom::Indep), Just(Atom::Jet(0))];
    let mono = prop::collection::vec((atom, 1u32..=2), 0..=2).prop_map(Monomial::from_factors);
    prop::collection::vec((mono, arb_field()), 0..=3).prop_map(Expr::from_terms)
}

pub fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| BigRational::new(int(n), int(d)))
}

pub fn symbols() -> Symbols {
    Symbols::new(&["a", "b"])
        .with_function("f1", &[ArgVar::Indep])
        .with_constant("c1")
}

pub fn params_at(a: &BigRational, b: &BigRational) -> std::collections::BTreeMap<String, BigRational> {
    [("a".to_string(), a.clone()), ("b".to_string(), b.clone())].into()
}

pub fn silnikov() -> OdeSpec {
    liesym::lie::parse_ode_spec(
        "order=2\nparams=a,b\nrhs_num=t^3 - a^2*t - x - x'^2*x - b*x'*x\nrhs_den=x^2\n",
    )
    .unwrap()
}

pub fn arb_ode() -> impl Strategy<Value = OdeSpec> {
    let atom = prop_oneof![Just(Atom::Indep), Just(Atom::Jet(0)), Just(Atom::Jet(1))];
    let mono = prop::collection::vec((atom, 1u32..=2), 0..=2).prop_map(Monomial::from_factors);
    let num = prop::collection::vec((mono, arb_nonzero_field()), 0..=3).prop_map(Expr::from_terms);
    let den = prop_oneof![
        Just(Expr::one()),
        Just(Expr::jet(0)),
        Just(&Expr::jet(0) * &Expr::jet(0)),
    ];
    (num, den).prop_map(|(n, d)| {
        OdeSpec::new(2, n, d, vec!["a".into(), "b".into()], VarNames::default()).unwrap()
    })
}

pub fn symbolic_values(xi: &Expr, eta: &Expr) -> Vec<(FnDeriv, Expr)> {
    let g = Generator::symbolic();
    let base = |e: &Expr| e.atoms().into_iter().next().unwrap().as_fn().unwrap().clone();
    vec![(base(g.xi()), xi.clone()), (base(g.eta()), eta.clone())]
}

pub fn third_order_equations() -> Vec<AutonomousOde3> {
    let s = Symbols::new(&["a", "b"]).with_names("t", "y");
    [
        "y''' + b*y'' + y' + a^2*y - y^3",
        "y''' - y'",
        "y'''",
        "2*y''' + y*y'' - a*y'^2 + b",
        "y''' + y'*y'' + y^2*y'",
    ]
    .iter()
    .map(|text| {
        AutonomousOde3::new(
            parse_expr(text, &s).unwrap(),
            vec!["a".into(), "b".into()],
            VarNames::new("t", "y"),
        )
        .unwrap()
    })
    .collect()
}

pub const SEED_KERNEL: u64 = 0x5eed_0001;
pub const SEED_SOLVER: u64 = 0x5eed_0002;
pub const SEED_REDUCTION: u64 = 0x5eed_0003;

pub type Check = Result<(), TestCaseError>;

pub fn check_canonical_round_trip(e: &Expr) -> Check {
    let rebuilt = Expr::from_terms(e.terms().map(|(m, c)| (m.clone(), c.clone())));
    prop_assert_eq!(&rebuilt, e);
    let text = e.display_with(&VarNames::default());
    prop_assert_eq!(&parse_expr(&text, &symbols()).unwrap(), e);
    Ok(())
}

pub fn check_ring_axioms(x: &Expr, y: &Expr, z: &Expr) -> Check {
    prop_assert_eq!(x * &(y + z), &(x * y) + &(x * z));
    prop_assert_eq!(x * y, y * x);
    prop_assert_eq!(x + y, y + x);
    prop_assert_eq!(&(x * y) * z, x * &(y * z));
    prop_assert_eq!(&(x + y) + z, x + &(y + z));
    prop_assert!((x - x).is_zero());
    prop_assert_eq!(&(x * &Expr::one()), x);
    Ok(())
}

pub fn check_collect_reassemble(e: &Expr, atom: &Atom) -> Check {
    let parts = e.collect(atom);
    for (_, c) in &parts {
        prop_assert_eq!(c.degree_in(atom), 0);
    }
    prop_assert_eq!(&Expr::reassemble(atom, &parts), e);
    Ok(())
}

pub fn check_partials_commute(e: &Expr) -> Check {
    let tx = partial(&partial(e, &Atom::Indep).unwrap(), &Atom::Jet(0)).unwrap();
    let xt = partial(&partial(e, &Atom::Jet(0)).unwrap(), &Atom::Indep).unwrap();
    prop_assert_eq!(tx, xt);
    Ok(())
}

pub fn check_total_derivative_derivation(e1: &Expr, e2: &Expr, alpha: &ParamField) -> Check {
    let ctx = JetContext::new(3).unwrap();
    let d = |e: &Expr| total_derivative(e, &ctx).unwrap();
    prop_assert_eq!(d(&(e1 * e2)), &(&d(e1) * e2) + &(e1 * &d(e2)));
    prop_assert_eq!(d(&(&e1.scale(alpha) + e2)), &d(e1).scale(alpha) + &d(e2));
    Ok(())
}

pub fn check_gcd(f: [i64; 4], g: [i64; 4], h: [i64; 4], k: usize) -> Check {
    let f = &param_poly(f) * &denominators()[k];
    let (g, h) = (param_poly(g), param_poly(h));
    prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
    let (fg, fh) = (&f * &g, &f * &h);
    let d = fg.gcd(&fh);
    prop_assert!(d.div_exact(&f).is_some());
    let (u, w) = (fg.div_exact(&d).unwrap(), fh.div_exact(&d).unwrap());
    prop_assert!(u.gcd(&w).is_one());
    prop_assert!(d.leading().unwrap().1 > &int(0));
    Ok(())
}

pub fn check_field_evaluation(p: &ParamField, q: &ParamField, va: &BigRational, vb: &BigRational) -> Check {
    let at = params_at(va, vb);
    let (Ok(pv), Ok(qv)) = (p.eval(&at), q.eval(&at)) else {
        return Err(TestCaseError::reject("denominator vanishes"));
    };
    prop_assume!(qv != BigRational::from_integer(int(0)));
    prop_assert_eq!((p + q).eval(&at).unwrap(), &pv + &qv);
    prop_assert_eq!((p - q).eval(&at).unwrap(), &pv - &qv);
    prop_assert_eq!((p * q).eval(&at).unwrap(), &pv * &qv);
    prop_assert_eq!((p / q).eval(&at).unwrap(), &pv / &qv);
    Ok(())
}

pub fn check_condition_reassembly(xi: &Expr, eta: &Expr) -> Check {
    let ode = silnikov();
    let g = Generator::new(xi.clone(), eta.clone()).unwrap();
    let cond = symmetry_condition(&ode, &g).unwrap();
    let split = split_determining(&cond).unwrap();
    prop_assert_eq!(split.reassemble(), cond.expr.clone());
    prop_assert_eq!(cond.expr.is_zero(), split.equations.iter().all(|e| e.expr.is_zero()));

    let det = determining_system(&ode).unwrap();
    let values = symbolic_values(xi, eta);
    let substituted = instantiate_functions(&det.reassemble(), &values).unwrap();
    prop_assert_eq!(substituted, cond.expr);
    Ok(())
}

pub fn check_solver_reassembly(ode: &OdeSpec, dx: u32, de: u32, dt: u32) -> Check {
    let det = determining_system(ode).unwrap();
    for eq in &det.equations {
        prop_assert!(eq.expr.degree_where(Atom::is_fn) <= 1);
    }
    let ansatz = XAnsatz::polynomial(dx, de, &["a", "b"]).unwrap();
    let tsys = x_reduce(&det, &ansatz).unwrap();
    let values = symbolic_values(ansatz.xi(), ansatz.eta());
    for eq in &det.equations {
        let direct = instantiate_functions(&eq.expr, &values).unwrap();
        prop_assert_eq!(tsys.reassemble(eq.xdot_power), direct);
    }

    let linear = t_reduce(&tsys, dt).unwrap();
    let polys: Vec<(FnDeriv, Expr)> = tsys
        .functions()
        .iter()
        .map(|f| {
            let terms = (0..=dt).map(|k| {
                let c = Atom::constant(&format!("c_{}_{k}", f.name()));
                (Monomial::from_factors([(Atom::Indep, k), (c, 1)]), ParamField::one())
            });
            (f.clone(), Expr::from_terms(terms))
        })
        .collect();
    for eq in &det.equations {
        let direct = instantiate_functions(&tsys.reassemble(eq.xdot_power), &polys).unwrap();
        prop_assert_eq!(linear.reassemble(eq.xdot_power), direct);
    }
    Ok(())
}

pub fn check_elimination(ode: &OdeSpec, dx: u32, dt: u32) -> Check {
    let det = determining_system(ode).unwrap();
    let ansatz = XAnsatz::polynomial(dx, dx, &["a", "b"]).unwrap();
    let linear = t_reduce(&x_reduce(&det, &ansatz).unwrap(), dt).unwrap();
    let basis = eliminate(&linear);
    prop_assert_eq!(&eliminate(&linear), &basis);
    prop_assert!(verify_basis(&basis, ode).unwrap().passed());
    Ok(())
}

pub fn check_analysis_determinism(ode: &OdeSpec) -> Check {
    let cfg = AnalysisConfig { deg_x: 1, deg_t: 1 };
    let first = format!("{:?}", analyze(ode, cfg).unwrap());
    let second = format!("{:?}", analyze(ode, cfg).unwrap());
    prop_assert_eq!(first, second);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn check_reduction(
    which: usize,
    y: &BigRational,
    y1: &BigRational,
    y2: &BigRational,
    y3: &BigRational,
    va: &BigRational,
    vb: &BigRational,
) -> Check {
    prop_assume!(!y1.is_zero());
    let ode3 = &third_order_equations()[which];
    let red = reduce_autonomous(ode3).unwrap();
    let with_params = |p: Point<BigRational>| p.with_param("a", va.clone()).with_param("b", vb.clone());
    let zero = BigRational::from_integer(int(0));
    let original = ode3
        .lhs()
        .eval(&with_params(Point::new(zero, vec![y.clone(), y1.clone(), y2.clone(), y3.clone()])))
        .unwrap();
    let z = y1.clone();
    let z1 = y2 / &z;
    let z2 = (y3 * &z - y2 * y2) / (&z * &z * &z);
    let reduced = red
        .equation
        .eval(&with_params(Point::new(y.clone(), vec![z.clone(), z1, z2])))
        .unwrap();
    prop_assert_eq!(reduced, original);
    Ok(())
}
