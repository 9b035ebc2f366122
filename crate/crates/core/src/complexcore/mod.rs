//! Complex scalar special functions and quadrature primitives.

mod gamma;
mod quad;

use std::f64::consts::FRAC_PI_2;

pub use gamma::{gamma, gamma_ratio, ln_gamma};
pub use num_complex::Complex64;
pub use quad::{
    integrate, integrate_values, line_integrate, semi_infinite_integrate, semi_infinite_values, truncation_length,
    CVec, EndpointMode, Integral, QuadValue, QuadratureConfig, Tail,
};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// `b^z = exp(z ln b)` for a positive real base.
pub fn cpow_posbase(b: f64, z: Complex64) -> Result<Complex64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("cpow_posbase needs a positive finite base, got {b}")));
    }
    Ok(cpow_unchecked(b, z))
}

/// `b^z` for a base the caller already knows to be positive.
#[inline]
pub(crate) fn cpow_unchecked(b: f64, z: Complex64) -> Complex64 {
    (z * b.ln()).exp()
}

/// Complete elliptic integral of the first kind K(k), by the
/// arithmetic–geometric mean: K(k) = π / (2 AGM(1, √(1-k²))).
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic_k needs 0 <= k < 1, got {k}")));
    }
    let mut a = 1.0;
    let mut g = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..64 {
        if (a - g).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}
