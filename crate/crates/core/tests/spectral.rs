use std::f64::consts::PI;

use gasp_core::bipolar::{disk_geometry, from_bipolar, level_circle, BipolarPoint, CartesianPoint};
use gasp_core::complexcore::Complex64;
use gasp_core::error::Error;
use gasp_core::kernels::{fundamental_e, KernelPair};
use gasp_core::legendre::legendre_q;
use gasp_core::spectral::{
    bipo_residual, bipolar_transform, decompose, solve_annulus, solve_disk, solve_exterior, BoundaryTrace,
    FourierLegendreSolution,
};
use gasp_core::weinstein::{reference_solution, ReferenceKind};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pt(x: f64, y: f64) -> CartesianPoint {
    CartesianPoint::new(x, y)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

struct Setup {
    alpha: f64,
    tau0: f64,
    tau1: f64,
}

fn setup() -> Setup {
    let g = disk_geometry(5.0, 3.0).unwrap();
    Setup {
        alpha: g.alpha,
        tau0: g.tau0,
        tau1: 2.0 * g.tau0,
    }
}

#[test]
fn cli_example_value() {
    let s = setup();
    let m = c(2.0, 0.0);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let sol = solve_disk(m, &trace, s.alpha, 32).unwrap();
    let v = sol.evaluate_cartesian(&pt(5.0, 0.2)).unwrap();
    assert!((v - 24.88).norm() < 1e-9, "{v}");
}

#[test]
fn data_circle_reproduces_trace() {
    let s = setup();
    let m = c(0.3, 0.7);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let sol = solve_disk(m, &trace, s.alpha, 32).unwrap();
    for (theta, v) in trace.thetas().iter().zip(&trace.values).step_by(7) {
        let got = sol.evaluate(&BipolarPoint::new(s.tau0, *theta, s.alpha)).unwrap();
        assert!(rel(got, *v) <= 1e-8, "theta={theta}");
    }
}

#[test]
fn transformed_equation_examples() {
    let m = c(2.0, 0.0);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let v = bipolar_transform(m, 1.0, |q| u.eval(q));
    assert!(bipo_residual(m, v, 1.0, 0.7, 1e-4).unwrap().norm() <= 1e-4);

    let m = c(-1.0, 0.0);
    let mu = (m - 1.0) / 2.0;
    let mode = |tau: f64, theta: f64| legendre_q(2, mu, tau).unwrap().value * Complex64::from_polar(1.0, 2.0 * theta);
    assert!(bipo_residual(m, mode, 0.9, 0.4, 1e-4).unwrap().norm() <= 1e-4);
    assert!(matches!(bipo_residual(m, mode, 1e-5, 0.4, 1e-4), Err(Error::Step { .. })));
}

#[test]
fn coefficients_decay_geometrically() {
    let s = setup();
    for m in [c(-1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0), c(0.3, 0.7)] {
        let u = reference_solution(ReferenceKind::Quadratic, m);
        let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
        let sol = solve_disk(m, &trace, s.alpha, 32).unwrap();
        let (xs, ys): (Vec<f64>, Vec<f64>) = (8..=24i64).map(|n| (n as f64, sol.q_coeff(n).norm().ln())).unzip();
        let k = xs.len() as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let rho = ((k * sxy - sx * sy) / (k * sxx - sx * sx)).exp();
        assert!(rho < 0.6, "m={m}: rho={rho}");
    }
}

#[test]
fn equal_traces_give_identical_coefficients() {
    let s = setup();
    let m = c(0.5, 0.0);
    let u = reference_solution(ReferenceKind::LinearY, m);
    let a = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let b = BoundaryTrace::new(s.tau0, a.values.clone()).unwrap();
    let sa = solve_disk(m, &a, s.alpha, 32).unwrap();
    let sb = solve_disk(m, &b, s.alpha, 32).unwrap();
    assert_eq!(sa.q_coeffs, sb.q_coeffs);
}

#[test]
fn maximum_principle() {
    let s = setup();
    let m = c(0.5, 0.0);
    let data = |q: CartesianPoint| c((0.7 * q.y).sin() + 0.1 * q.x, 0.0);
    let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 256, data).unwrap();
    let lo = trace.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let hi = trace.values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    let sol = solve_disk(m, &trace, s.alpha, 64).unwrap();
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..30 {
        let r = 2.9 * rng.gen::<f64>().sqrt();
        let t = rng.gen_range(0.0..2.0 * PI);
        let v = sol.evaluate_cartesian(&pt(5.0 + r * t.cos(), r * t.sin())).unwrap();
        assert!(v.re >= lo - 1e-6 && v.re <= hi + 1e-6, "{v} outside [{lo}, {hi}]");
    }
}

#[test]
fn exterior_reproduces_field_of_inner_source() {
    // Uniqueness of the exterior representation is only known for Re m < 1.
    let s = setup();
    for m in [c(-1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(0.3, 0.7)] {
        let e = |q: CartesianPoint| fundamental_e(m, &KernelPair::new(q.x, q.y, 5.0, 0.3)).unwrap();
        let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, e).unwrap();
        let sol = solve_exterior(m, &trace, s.alpha, 32).unwrap();
        for p in [pt(1.0, 0.2), pt(9.0, 1.0), pt(5.0, 5.0)] {
            assert!(rel(sol.evaluate_cartesian(&p).unwrap(), e(p)) <= 1e-10, "m={m}");
        }
        assert!(sol.evaluate_cartesian(&pt(5.0, 0.0)).is_err());
    }
}

#[test]
fn annulus_split_is_exact_on_coefficients() {
    let s = setup();
    let m = c(0.5, 0.0);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let t0 = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let t1 = BoundaryTrace::from_fn(s.tau1, s.alpha, 128, |q| u.eval(q)).unwrap();
    let sol = solve_annulus(m, &t0, &t1, s.alpha, 32).unwrap();
    let (v, w) = decompose(&sol).unwrap();
    assert_eq!(v.q_coeffs, sol.q_coeffs);
    assert_eq!(w.p_coeffs, sol.p_coeffs);
    assert_eq!(w.tau0, s.tau1);
    assert!(decompose(&v).is_err());
}

#[test]
fn vanishing_part_decays_like_power_of_x() {
    // w ~ x^{1−m} near the half-plane boundary.
    let s = setup();
    let (c1, _) = level_circle(s.tau1, s.alpha).unwrap();
    for m in [c(0.5, 0.0), c(0.0, 0.0), c(0.3, 0.7)] {
        let q = reference_solution(ReferenceKind::Quadratic, m);
        let u = |p: CartesianPoint| q.eval(p) + fundamental_e(m, &KernelPair::new(p.x, p.y, c1, 0.1)).unwrap();
        let t0 = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, u).unwrap();
        let t1 = BoundaryTrace::from_fn(s.tau1, s.alpha, 128, u).unwrap();
        let (_, w) = decompose(&solve_annulus(m, &t0, &t1, s.alpha, 32).unwrap()).unwrap();
        let at = |x: f64| w.evaluate_cartesian(&pt(x, 0.0)).unwrap().norm();
        let factor = at(1e-3) / at(1e-5);
        let want = 100f64.powf(1.0 - m.re);
        assert!((factor / want - 1.0).abs() < 0.01, "m={m}: {factor} vs {want}");
    }
}

#[test]
fn degenerate_mode_at_m_two() {
    // P_{−½}^{½} and Q_{−½}^{½} are both multiples of sh^{−½}τ.
    let s = setup();
    let m = c(2.0, 0.0);
    let t0 = BoundaryTrace::new(s.tau0, vec![c(1.0, 0.0); 128]).unwrap();
    let t1 = BoundaryTrace::new(s.tau1, vec![c(1.0, 0.0); 128]).unwrap();
    match solve_annulus(m, &t0, &t1, s.alpha, 32) {
        Err(Error::SingularMode { n: 0, .. }) => {}
        other => panic!("expected a singular mode, got {other:?}"),
    }
}

#[test]
fn tail_check_on_interior_points() {
    let s = setup();
    let m = c(-1.0, 0.0);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let trace = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let sol = solve_disk(m, &trace, s.alpha, 32).unwrap();
    let deep = BipolarPoint::new(s.tau0 + 0.5, 1.0, s.alpha);
    assert!(sol.evaluate_checked(&deep, 1e-10).is_ok());
    let (_, tail) = sol.evaluate_with_tail(&deep).unwrap();
    assert!(tail < 1e-10);
    let on_circle = BipolarPoint::new(s.tau0, 1.0, s.alpha);
    assert!(sol.evaluate_checked(&on_circle, 1e-12).is_ok());
    let near = BipolarPoint::new(s.tau0 + 0.01, 1.0, s.alpha);
    assert!(matches!(sol.evaluate_checked(&near, 1e-16), Err(Error::SeriesTail { .. })));
}

#[test]
fn json_round_trip_preserves_values() {
    let s = setup();
    let m = c(0.3, 0.7);
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let t0 = BoundaryTrace::from_fn(s.tau0, s.alpha, 128, |q| u.eval(q)).unwrap();
    let t1 = BoundaryTrace::from_fn(s.tau1, s.alpha, 128, |q| u.eval(q)).unwrap();
    let sol = solve_annulus(m, &t0, &t1, s.alpha, 32).unwrap();
    let text = sol.to_json();
    let back = FourierLegendreSolution::from_json(&text).unwrap();
    let p = from_bipolar(&BipolarPoint::new(0.5 * (s.tau0 + s.tau1), 2.0, s.alpha));
    assert_eq!(back.evaluate_cartesian(&p).unwrap(), sol.evaluate_cartesian(&p).unwrap());
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["kind"], "annulus");
    assert_eq!(doc["q_coeffs"][0][0], -32);
}
