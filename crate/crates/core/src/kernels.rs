//! Fundamental solutions E_m of the Weinstein operator, the reflected
//! kernels F_m, the θ-integral families describing their singularity, and
//! the Green representation formula on a circle.
//!
//! With bracket b(θ) = (x−ξ)² + 4xξ sin²(θ/2) + (y−η)²:
//!
//! ```text
//! Re m ≥ 1:  E_m = −(ξ^m / 2π)         ∫₀^π sin^{m−1}θ b^{−m/2}  dθ
//! Re m < 1:  E_m = −(ξ x^{1−m} / 2π)   ∫₀^π sin^{1−m}θ b^{m/2−1} dθ
//! ```
//!
//! L_m annihilates E_m in (x, y) and L_m^⋆ in (ξ, η), away from the
//! diagonal.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipolar::CartesianPoint;
use crate::complexcore::{cpow_posbase, cpow_unchecked, integrate_values, CVec, QuadratureConfig};
use crate::error::{Error, Result};

/// Separations below this are treated as coincident.
pub const MIN_SEPARATION: f64 = 1e-12;

/// Source point (x, y) and field point (ξ, η).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPair {
    pub source: CartesianPoint,
    pub field: CartesianPoint,
}

impl KernelPair {
    pub fn new(x: f64, y: f64, xi: f64, eta: f64) -> Self {
        Self {
            source: CartesianPoint::new(x, y),
            field: CartesianPoint::new(xi, eta),
        }
    }

    pub fn distance(&self) -> f64 {
        self.source.distance(&self.field)
    }

    /// The pair with source and field exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            source: self.field,
            field: self.source,
        }
    }
}

/// E_m and its derivatives in the field variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub d_xi: Complex64,
    pub d_eta: Complex64,
}

fn kernel_cfg() -> QuadratureConfig {
    QuadratureConfig::singular().with_tolerances(1e-200, 1e-14)
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn check_pair(pair: &KernelPair) -> Result<()> {
    let (s, f) = (pair.source, pair.field);
    if !(s.x > 0.0 && f.x > 0.0) || !(s.y.is_finite() && f.y.is_finite() && s.x.is_finite() && f.x.is_finite()) {
        return Err(Error::Domain(format!(
            "kernel points must lie in the right half-plane: ({}, {}), ({}, {})",
            s.x, s.y, f.x, f.y
        )));
    }
    let d = pair.distance();
    if d < MIN_SEPARATION {
        return Err(Error::Singular {
            distance: d,
            leading: Complex64::new(d.max(f64::MIN_POSITIVE).ln() / (2.0 * PI), 0.0),
        });
    }
    Ok(())
}

fn upper_branch(m: Complex64) -> bool {
    m.re >= 1.0
}

/// [∫ w b^p, ∫ w b^{p−1}(ξ − x cos θ), ∫ w b^{p−1}] with w = sin^a θ.
///
/// θ ∈ [π/2, π] is folded onto [0, π/2] so that the only near-singular
/// endpoint (b small at θ = 0 when the points are close) sits at the origin.
fn bracket_integrals(a: Complex64, p: Complex64, x: f64, y: f64, xi: f64, eta: f64, with_grad: bool) -> Result<CVec<3>> {
    let d2 = (x - xi).powi(2) + (y - eta).powi(2);
    let big_b = 4.0 * x * xi;
    let pm1 = p - 1.0;
    let f = |phi: f64| {
        let sin = phi.sin();
        if sin <= 0.0 {
            return CVec([zero(); 3]);
        }
        let w = cpow_unchecked(sin, a);
        let s = (0.5 * phi).sin().powi(2);
        let c2 = (0.5 * phi).cos().powi(2);
        let cos = phi.cos();
        let b1 = d2 + big_b * s;
        let b2 = d2 + big_b * c2;
        let v0 = cpow_unchecked(b1, p) + cpow_unchecked(b2, p);
        if !with_grad {
            return CVec([w * v0, zero(), zero()]);
        }
        let q1 = cpow_unchecked(b1, pm1);
        let q2 = cpow_unchecked(b2, pm1);
        let v1 = q1 * (xi - x * cos) + q2 * (xi + x * cos);
        let v2 = q1 + q2;
        CVec([w * v0, w * v1, w * v2])
    };
    Ok(integrate_values(f, 0.0, FRAC_PI_2, &kernel_cfg())?.value)
}

fn kernel_unchecked(m: Complex64, x: f64, y: f64, xi: f64, eta: f64, with_grad: bool) -> Result<KernelValue> {
    let two_pi = 2.0 * PI;
    if upper_branch(m) {
        let ints = bracket_integrals(m - 1.0, -m / 2.0, x, y, xi, eta, with_grad)?.0;
        let xi_m = cpow_unchecked(xi, m);
        let value = -xi_m / two_pi * ints[0];
        if !with_grad {
            return Ok(KernelValue {
                value,
                d_xi: zero(),
                d_eta: zero(),
            });
        }
        let d_xi = -(m * cpow_unchecked(xi, m - 1.0) * ints[0] - m * xi_m * ints[1]) / two_pi;
        let d_eta = -xi_m / two_pi * m * (y - eta) * ints[2];
        Ok(KernelValue { value, d_xi, d_eta })
    } else {
        let ints = bracket_integrals(1.0 - m, m / 2.0 - 1.0, x, y, xi, eta, with_grad)?.0;
        let x_pow = cpow_posbase(x, 1.0 - m)?;
        let value = -xi * x_pow / two_pi * ints[0];
        if !with_grad {
            return Ok(KernelValue {
                value,
                d_xi: zero(),
                d_eta: zero(),
            });
        }
        let d_xi = -x_pow / two_pi * (ints[0] + xi * (m - 2.0) * ints[1]);
        let d_eta = -xi * x_pow / two_pi * (2.0 - m) * (y - eta) * ints[2];
        Ok(KernelValue { value, d_xi, d_eta })
    }
}

/// Fundamental solution E_m(x, y, ξ, η).
pub fn fundamental_e(m: Complex64, pair: &KernelPair) -> Result<Complex64> {
    check_pair(pair)?;
    let (s, f) = (pair.source, pair.field);
    Ok(kernel_unchecked(m, s.x, s.y, f.x, f.y, false)?.value)
}

/// E_m with ∂_ξ E_m and ∂_η E_m, differentiated under the integral sign.
pub fn fundamental_e_with_gradient(m: Complex64, pair: &KernelPair) -> Result<KernelValue> {
    check_pair(pair)?;
    let (s, f) = (pair.source, pair.field);
    kernel_unchecked(m, s.x, s.y, f.x, f.y, true)
}

/// Reflected kernel: F_m = E_m for Re m < 1 and
/// F_m(x, y, ξ, η) = E_m(x, y, ξ, η) − E_m(−x, y, ξ, η) for Re m ≥ 1.
///
/// For Re m ≥ 1 the bracket at −x is the bracket at x with θ ↦ π − θ, and
/// sin^{m−1}θ is invariant under that map, so the two terms coincide and
/// the difference vanishes up to rounding.
pub fn fundamental_f(m: Complex64, pair: &KernelPair) -> Result<Complex64> {
    check_pair(pair)?;
    let (s, f) = (pair.source, pair.field);
    let direct = kernel_unchecked(m, s.x, s.y, f.x, f.y, false)?.value;
    if !upper_branch(m) {
        return Ok(direct);
    }
    let mirrored = kernel_unchecked(m, -s.x, s.y, f.x, f.y, false)?.value;
    Ok(direct - mirrored)
}

/// Closed form of E_0: −(1/4π) ln(((x+ξ)² + (y−η)²) / ((x−ξ)² + (y−η)²)).
pub fn e0_closed_form(pair: &KernelPair) -> f64 {
    let (s, f) = (pair.source, pair.field);
    let dy2 = (s.y - f.y).powi(2);
    -(((s.x + f.x).powi(2) + dy2) / ((s.x - f.x).powi(2) + dy2)).ln() / (4.0 * PI)
}

/// Closed form of E_1: −ξ/(π√(A+B)) K(√(B/(A+B))), A = d², B = 4xξ.
pub fn e1_closed_form(pair: &KernelPair) -> Result<f64> {
    let (s, f) = (pair.source, pair.field);
    let a = pair.distance().powi(2);
    let b = 4.0 * s.x * f.x;
    let k = crate::complexcore::elliptic_k((b / (a + b)).sqrt())?;
    Ok(-f.x / (PI * (a + b).sqrt()) * k)
}

/// The three θ-integrals governing the kernel near its singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaFamily {
    /// ∫₀^π sin^{m−1}θ (1 + k sin²(θ/2))^{−m/2} dθ
    Base,
    /// ∫₀^π sin²(θ/2) sin^{m−1}θ (1 + k sin²(θ/2))^{−m/2−1} dθ
    Sin2Weight,
    /// ∫₀^π sin^{m−1}θ (1 + k sin²(θ/2))^{−m/2−1} dθ
    PowerPlus1,
}

pub fn theta_integral(family: ThetaFamily, m: Complex64, k: f64) -> Result<Complex64> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("theta integral needs k >= 0, got {k}")));
    }
    let a = m - 1.0;
    let p = match family {
        ThetaFamily::Base => -m / 2.0,
        ThetaFamily::Sin2Weight | ThetaFamily::PowerPlus1 => -m / 2.0 - 1.0,
    };
    let f = |phi: f64| {
        let sin = phi.sin();
        if sin <= 0.0 {
            return zero();
        }
        let w = cpow_unchecked(sin, a);
        let s = (0.5 * phi).sin().powi(2);
        let c2 = (0.5 * phi).cos().powi(2);
        let (t1, t2) = (cpow_unchecked(1.0 + k * s, p), cpow_unchecked(1.0 + k * c2, p));
        match family {
            ThetaFamily::Sin2Weight => w * (t1 * s + t2 * c2),
            _ => w * (t1 + t2),
        }
    };
    Ok(integrate_values(f, 0.0, FRAC_PI_2, &kernel_cfg())?.value)
}

/// Large-k equivalents of the θ-integral families.
pub fn theta_asymptote(family: ThetaFamily, m: Complex64, k: f64) -> Complex64 {
    let two = |e: Complex64| cpow_unchecked(2.0, e);
    let kp = |e: Complex64| cpow_unchecked(k, e);
    match family {
        ThetaFamily::Base => two(m - 1.0) * kp(-m / 2.0) * k.ln(),
        ThetaFamily::Sin2Weight => two(m - 1.0) * kp(-m / 2.0 - 1.0) * k.ln(),
        ThetaFamily::PowerPlus1 => two(m) / m * kp(-m / 2.0),
    }
}

/// E_m / ln d, which tends to 1/2π as the points approach each other.
pub fn singularity_ratio(m: Complex64, pair: &KernelPair) -> Result<Complex64> {
    let d = pair.distance();
    Ok(fundamental_e(m, pair)? / d.ln())
}

/// Samples of (u, ∂_ξ u, ∂_η u) on a circle at angles t_j = 2πj/J.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleTrace {
    pub center: CartesianPoint,
    pub radius: f64,
    pub samples: Vec<[Complex64; 3]>,
}

impl CircleTrace {
    pub fn from_fn<F>(center: CartesianPoint, radius: f64, count: usize, f: F) -> Self
    where
        F: Fn(CartesianPoint) -> [Complex64; 3],
    {
        let samples = (0..count).map(|j| f(circle_point(center, radius, count, j))).collect();
        Self {
            center,
            radius,
            samples,
        }
    }
}

fn angle(count: usize, j: usize) -> f64 {
    2.0 * PI * j as f64 / count as f64
}

fn circle_point(center: CartesianPoint, radius: f64, count: usize, j: usize) -> CartesianPoint {
    let t = angle(count, j);
    CartesianPoint::new(center.x + radius * t.cos(), center.y + radius * t.sin())
}

/// u(x, y) from its boundary trace:
/// u = −∮ [(∂_ξu)E − u ∂_ξE + (m/ξ) u E, (∂_ηu)E − u ∂_ηE] · n ds,
/// valid when L_m u = 0 inside the circle. Trapezoidal rule in the angle.
pub fn green_reproduce(m: Complex64, trace: &CircleTrace, p: CartesianPoint) -> Result<Complex64> {
    let (c, r) = (trace.center, trace.radius);
    if !(r > 0.0) || c.x - r <= 0.0 {
        return Err(Error::Geometry(format!(
            "circle of center ({}, {}) and radius {r} is not inside the right half-plane",
            c.x, c.y
        )));
    }
    if p.distance(&c) >= r {
        return Err(Error::Geometry(format!("point ({}, {}) is not inside the circle", p.x, p.y)));
    }
    let count = trace.samples.len();
    if count == 0 {
        return Err(Error::Parameter("empty boundary trace".into()));
    }
    let mut sum = zero();
    for (j, s) in trace.samples.iter().enumerate() {
        let t = angle(count, j);
        let q = circle_point(c, r, count, j);
        let k = fundamental_e_with_gradient(m, &KernelPair { source: p, field: q })?;
        let [u, ux, uy] = *s;
        let comp_x = ux * k.value - u * k.d_xi + m / q.x * u * k.value;
        let comp_y = uy * k.value - u * k.d_eta;
        sum += comp_x * t.cos() + comp_y * t.sin();
    }
    Ok(-sum * (2.0 * PI * r / count as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn e0_matches_log() {
        let pair = KernelPair::new(1.0, 0.0, 2.0, 0.0);
        let got = fundamental_e(c(0.0, 0.0), &pair).unwrap();
        let want = -(9f64).ln() / (4.0 * PI);
        assert!((got - want).norm() < 1e-13, "{got} {want}");
        assert!((e0_closed_form(&pair) - want).abs() < 1e-15);
    }

    #[test]
    fn e1_matches_elliptic() {
        let pair = KernelPair::new(1.0, 0.0, 2.0, 1.0);
        let got = fundamental_e(c(1.0, 0.0), &pair).unwrap();
        let want = -(2.0 / (PI * 10f64.sqrt())) * crate::complexcore::elliptic_k(0.8f64.sqrt()).unwrap();
        assert!((got - want).norm() < 1e-13 * want.abs());
        assert!((e1_closed_form(&pair).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn swap_relation() {
        let pair = KernelPair::new(1.0, 0.0, 2.0, 1.0);
        for m in [c(2.0, 0.0), c(0.4, 0.3), c(-1.5, 0.0), c(3.0, -1.0)] {
            let lhs = fundamental_e(m, &pair).unwrap();
            let rhs = cpow_posbase(0.5, -m).unwrap() * fundamental_e(m, &pair.swapped()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "m={m}");
        }
    }

    #[test]
    fn coincident_points_are_singular() {
        let err = fundamental_e(c(0.5, 0.0), &KernelPair::new(1.0, 1.0, 1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        assert!(fundamental_e(c(0.5, 0.0), &KernelPair::new(-1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn f_kernel_examples() {
        let pair = KernelPair::new(1.0, 0.0, 2.0, 0.0);
        let f0 = fundamental_f(c(0.0, 0.0), &pair).unwrap();
        assert!((f0 - e0_closed_form(&pair)).norm() < 1e-13);
        let near = fundamental_f(c(2.0, 0.0), &KernelPair::new(1e-6, 0.0, 1.0, 0.0)).unwrap();
        assert!(near.norm() <= 1e-4);
        let up = fundamental_f(c(2.0, 0.0), &KernelPair::new(1.0, 0.0, 1.0, 5.0)).unwrap();
        let down = fundamental_f(c(2.0, 0.0), &KernelPair::new(1.0, 0.0, 1.0, -5.0)).unwrap();
        assert!((up - down).norm() <= 1e-15);
    }

    #[test]
    fn theta_integral_at_zero_k() {
        let v = theta_integral(ThetaFamily::Base, c(2.0, 0.0), 0.0).unwrap();
        assert!((v - 2.0).norm() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = 1e-5;
        for m in [c(2.0, 0.0), c(0.5, 0.0), c(1.0, 1.0), c(-1.0, 0.0)] {
            let pair = KernelPair::new(1.2, 0.3, 2.0, -0.4);
            let k = fundamental_e_with_gradient(m, &pair).unwrap();
            let at = |xi: f64, eta: f64| fundamental_e(m, &KernelPair::new(1.2, 0.3, xi, eta)).unwrap();
            let fx = (at(2.0 + h, -0.4) - at(2.0 - h, -0.4)) / (2.0 * h);
            let fy = (at(2.0, -0.4 + h) - at(2.0, -0.4 - h)) / (2.0 * h);
            assert!((k.d_xi - fx).norm() < 1e-8, "m={m}: {} vs {fx}", k.d_xi);
            assert!((k.d_eta - fy).norm() < 1e-8, "m={m}: {} vs {fy}", k.d_eta);
        }
    }
}
