//! The Weinstein operator L_m u = Δu + (m/x) ∂ₓu, its adjoint, finite
//! difference residuals of the operator identities, and closed-form
//! solutions used as oracles.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipolar::CartesianPoint;
use crate::complexcore::{cpow_posbase, integrate, QuadratureConfig};
use crate::error::{Error, Result};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ReMLt1,
    ReMGe1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeinsteinParam {
    pub m: Complex64,
    /// Legendre order (m − 1)/2.
    pub mu: Complex64,
    pub branch: Branch,
}

impl WeinsteinParam {
    pub fn new(m: Complex64) -> Result<Self> {
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::Domain(format!("m must be finite, got {m}")));
        }
        let branch = if m.re < 1.0 { Branch::ReMLt1 } else { Branch::ReMGe1 };
        Ok(Self {
            m,
            mu: (m - 1.0) * 0.5,
            branch,
        })
    }
}

fn check_step(p: CartesianPoint, h: f64) -> Result<()> {
    if !(h > 0.0) || p.x <= h {
        return Err(Error::Step { h, x: p.x });
    }
    Ok(())
}

struct Stencil {
    center: Complex64,
    dx: Complex64,
    lap: Complex64,
}

fn stencil<F: Fn(CartesianPoint) -> Complex64>(f: &F, p: CartesianPoint, h: f64) -> Stencil {
    let center = f(p);
    let east = f(CartesianPoint::new(p.x + h, p.y));
    let west = f(CartesianPoint::new(p.x - h, p.y));
    let north = f(CartesianPoint::new(p.x, p.y + h));
    let south = f(CartesianPoint::new(p.x, p.y - h));
    Stencil {
        center,
        dx: (east - west) / (2.0 * h),
        lap: (east + west + north + south - 4.0 * center) / (h * h),
    }
}

/// Central-difference approximation of L_m f at p.
pub fn apply_lm<F>(f: F, m: Complex64, p: CartesianPoint, h: f64) -> Result<Complex64>
where
    F: Fn(CartesianPoint) -> Complex64,
{
    check_step(p, h)?;
    let s = stencil(&f, p, h);
    Ok(s.lap + m / p.x * s.dx)
}

/// Central-difference approximation of L_m^⋆ f = Δf − (m/x)∂ₓf + (m/x²)f at p.
pub fn apply_lm_star<F>(f: F, m: Complex64, p: CartesianPoint, h: f64) -> Result<Complex64>
where
    F: Fn(CartesianPoint) -> Complex64,
{
    check_step(p, h)?;
    let s = stencil(&f, p, h);
    Ok(s.lap - m / p.x * s.dx + m / (p.x * p.x) * s.center)
}

/// Residuals of S_m L_m^⋆ = L_m S_m and L_{−m}^⋆ D = D L_m at p, with
/// S_m f = x^{−m} f and D f = ∂ₓf.
///
/// The second identity nests two difference operators; steps around 1e−3
/// balance truncation against rounding.
pub fn conjugation_residuals<F>(f: F, m: Complex64, p: CartesianPoint, h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(CartesianPoint) -> Complex64,
{
    check_step(p, 2.0 * h)?;
    let s_m = |q: CartesianPoint| cpow_posbase(q.x, -m).map(|w| w * f(q)).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let lhs1 = cpow_posbase(p.x, -m)? * apply_lm_star(&f, m, p, h)?;
    let rhs1 = apply_lm(s_m, m, p, h)?;

    let dx = |q: CartesianPoint| {
        (f(CartesianPoint::new(q.x + h, q.y)) - f(CartesianPoint::new(q.x - h, q.y))) / (2.0 * h)
    };
    let lm = |q: CartesianPoint| apply_lm(&f, m, q, h).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let lhs2 = apply_lm_star(dx, -m, p, h)?;
    let rhs2 = (lm(CartesianPoint::new(p.x + h, p.y)) - lm(CartesianPoint::new(p.x - h, p.y))) / (2.0 * h);
    Ok((lhs1 - rhs1, lhs2 - rhs2))
}

/// |L_m f − x^{1−m} L_{2−m}(x^{m−1} f)| at p.
pub fn weinstein_principle_residual<F>(f: F, m: Complex64, p: CartesianPoint, h: f64) -> Result<f64>
where
    F: Fn(CartesianPoint) -> Complex64,
{
    check_step(p, h)?;
    let lhs = apply_lm(&f, m, p, h)?;
    let lifted = |q: CartesianPoint| cpow_posbase(q.x, m - 1.0).map(|w| w * f(q)).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let rhs = cpow_posbase(p.x, 1.0 - m)? * apply_lm(lifted, 2.0 - m, p, h)?;
    Ok((lhs - rhs).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Constant,
    LinearY,
    Quadratic,
    Power,
}

impl std::str::FromStr for ReferenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "linear_y" | "linear-y" => Ok(Self::LinearY),
            "quadratic" => Ok(Self::Quadratic),
            "power" => Ok(Self::Power),
            other => Err(Error::Parameter(format!(
                "unknown reference solution '{other}' (expected constant, linear_y, quadratic or power)"
            ))),
        }
    }
}

/// Closed-form solution of L_m u = 0: u ≡ 1, u = y, u = x² − (m+1)y² or u = x^{1−m}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSolution {
    pub kind: ReferenceKind,
    pub m: Complex64,
}

pub fn reference_solution(kind: ReferenceKind, m: Complex64) -> ReferenceSolution {
    ReferenceSolution { kind, m }
}

impl ReferenceSolution {
    pub fn eval(&self, p: CartesianPoint) -> Complex64 {
        let m = self.m;
        match self.kind {
            ReferenceKind::Constant => Complex64::new(1.0, 0.0),
            ReferenceKind::LinearY => Complex64::new(p.y, 0.0),
            ReferenceKind::Quadratic => p.x * p.x - (m + 1.0) * p.y * p.y,
            ReferenceKind::Power => power(p.x, 1.0 - m),
        }
    }

    /// (∂ₓu, ∂ᵧu).
    pub fn gradient(&self, p: CartesianPoint) -> (Complex64, Complex64) {
        let m = self.m;
        let zero = Complex64::new(0.0, 0.0);
        match self.kind {
            ReferenceKind::Constant => (zero, zero),
            ReferenceKind::LinearY => (zero, Complex64::new(1.0, 0.0)),
            ReferenceKind::Quadratic => (Complex64::new(2.0 * p.x, 0.0), -2.0 * (m + 1.0) * p.y),
            ReferenceKind::Power => ((1.0 - m) * power(p.x, -m), zero),
        }
    }

    pub fn as_fn(&self) -> impl Fn(CartesianPoint) -> Complex64 + '_ {
        move |p| self.eval(p)
    }
}

fn power(x: f64, e: Complex64) -> Complex64 {
    cpow_posbase(x, e).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// Parametrization of the half circle in the mean-value formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleConvention {
    /// point(θ) = (r sin θ, r cos θ), θ ∈ (0, π): θ measured from the
    /// y-axis, so the half circle stays in x ≥ 0.
    #[default]
    FromYAxis,
    /// point(θ) = (r cos θ, r sin θ), θ ∈ (−π/2, π/2).
    Literal,
}

/// |u(0,0)∫ sin^m θ dθ − ∫ u(point(θ)) sin^m θ dθ| over the convention's
/// angular interval.
pub fn mean_value_residual<F>(m: u32, u: F, r: f64, convention: AngleConvention) -> Result<f64>
where
    F: Fn(CartesianPoint) -> Complex64,
{
    if m == 0 {
        return Err(Error::Parameter("mean-value formula needs a positive integer m".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("mean-value radius must be positive, got {r}")));
    }
    let cfg = QuadratureConfig::default().with_tolerances(1e-14, 1e-14);
    let weight = |t: f64| t.sin().powi(m as i32);
    let point = |t: f64| match convention {
        AngleConvention::FromYAxis => CartesianPoint::new(r * t.sin(), r * t.cos()),
        AngleConvention::Literal => CartesianPoint::new(r * t.cos(), r * t.sin()),
    };
    let (a, b) = match convention {
        AngleConvention::FromYAxis => (0.0, PI),
        AngleConvention::Literal => (-FRAC_PI_2, FRAC_PI_2),
    };
    let mass = integrate(|t| Complex64::new(weight(t), 0.0), a, b, &cfg)?.value;
    let lhs = u(CartesianPoint::new(0.0, 0.0)) * mass;
    let rhs = integrate(|t| u(point(t)) * weight(t), a, b, &cfg)?.value;
    Ok((lhs - rhs).norm())
}
