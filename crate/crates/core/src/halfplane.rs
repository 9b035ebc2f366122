//! Dirichlet problem for L_m on the right half-plane, Re m < 1:
//!
//! U(x, y) = C_m x^{1−m} ∫ u(η) dη / (x² + (y−η)²)^{1−m/2},
//! C_m = Γ(1 − m/2)² / (2^m π Γ(1 − m)).
//!
//! With t = (y − η)/x and then t = cot ψ the integral becomes
//! C_m ∫₀^π u(y − x cot ψ) sin^{−m}ψ dψ, a finite interval with an
//! integrable endpoint singularity, so no truncation of the line is needed.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::bipolar::CartesianPoint;
use crate::complexcore::{cpow_posbase, cpow_unchecked, integrate, ln_gamma, QuadratureConfig};
use crate::error::{Error, Result};

fn check_m(m: Complex64) -> Result<()> {
    if m.re < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "the half-plane Dirichlet problem needs Re m < 1, got m = {m}"
        )))
    }
}

fn poisson_cfg() -> QuadratureConfig {
    QuadratureConfig::singular().with_tolerances(1e-15, 1e-14)
}

/// C_m from the gamma closed form.
pub fn poisson_constant(m: Complex64) -> Result<Complex64> {
    check_m(m)?;
    let ln = 2.0 * ln_gamma(1.0 - m / 2.0)? - ln_gamma(1.0 - m)? - m * 2f64.ln() - PI.ln();
    Ok(ln.exp())
}

/// C_m as (1 − m)/(2π) ∫₀^π sin^{1−m}θ dθ.
pub fn poisson_constant_by_integral(m: Complex64) -> Result<Complex64> {
    check_m(m)?;
    let a = 1.0 - m;
    let half = integrate(
        |t: f64| {
            let s = t.sin();
            if s <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                cpow_unchecked(s, a)
            }
        },
        0.0,
        FRAC_PI_2,
        &poisson_cfg(),
    )?;
    Ok(a / (2.0 * PI) * 2.0 * half.value)
}

/// C_m ∫ (1 + t²)^{m/2−1} dt, which equals 1.
pub fn poisson_normalization(m: Complex64) -> Result<Complex64> {
    poisson_solve(m, |_| Complex64::new(1.0, 0.0), CartesianPoint::new(1.0, 0.0))
}

/// U(p) for bounded continuous boundary data u on x = 0.
pub fn poisson_solve<F>(m: Complex64, boundary_data: F, p: CartesianPoint) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    check_m(m)?;
    if !(p.x > 0.0) {
        return Err(Error::Domain(format!("point ({}, {}) is not in the right half-plane", p.x, p.y)));
    }
    let c_m = poisson_constant(m)?;
    let f = |psi: f64| {
        let s = psi.sin();
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let shift = p.x * psi.cos() / s;
        (boundary_data(p.y - shift) + boundary_data(p.y + shift)) * cpow_unchecked(s, -m)
    };
    let res = integrate(f, 0.0, FRAC_PI_2, &poisson_cfg())?;
    Ok(c_m * res.value)
}

/// The kernel form C_m x^{1−m} (x² + (y−η)²)^{m/2−1}, for checks against
/// direct integration in η.
pub fn poisson_kernel(m: Complex64, p: CartesianPoint, eta: f64) -> Result<Complex64> {
    let c_m = poisson_constant(m)?;
    Ok(c_m * cpow_posbase(p.x, 1.0 - m)? * cpow_posbase(p.x * p.x + (p.y - eta).powi(2), m / 2.0 - 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_examples() {
        assert!((poisson_constant(c(0.0, 0.0)).unwrap() - 1.0 / PI).norm() < 1e-15);
        assert!((poisson_constant(c(-1.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        assert!(poisson_constant(c(1.0, 0.0)).is_err());
        for m in [c(0.4, 0.0), c(-2.5, 0.0), c(0.3, 0.4), c(-1.0, -2.0)] {
            let a = poisson_constant(m).unwrap();
            let b = poisson_constant_by_integral(m).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm(), "m={m}: {a} vs {b}");
        }
    }

    #[test]
    fn normalization() {
        let v = poisson_normalization(c(0.4, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn harmonic_oracle() {
        let u = |eta: f64| c(1.0 / (1.0 + eta * eta), 0.0);
        let v = poisson_solve(c(0.0, 0.0), u, CartesianPoint::new(1.0, 1.0)).unwrap();
        assert!((v - 0.4).norm() < 1e-12, "{v}");
    }

    #[test]
    fn matches_eta_integral() {
        // Direct integration of the kernel form over a truncated line.
        let m = c(0.3, 0.4);
        let p = CartesianPoint::new(0.7, -0.2);
        let u = |eta: f64| c((-eta * eta).exp(), 0.0);
        let direct = integrate(
            |eta| poisson_kernel(m, p, eta).unwrap() * u(eta),
            -12.0,
            12.0,
            &QuadratureConfig::default().with_tolerances(1e-14, 1e-13),
        )
        .unwrap()
        .value;
        let v = poisson_solve(m, u, p).unwrap();
        assert!((v - direct).norm() < 1e-11, "{v} vs {direct}");
    }

    #[test]
    fn rejects_upper_branch() {
        assert!(poisson_solve(c(1.5, 0.0), |_| c(1.0, 0.0), CartesianPoint::new(1.0, 0.0)).is_err());
    }
}
