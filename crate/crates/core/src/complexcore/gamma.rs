//! Complex gamma function.
//!
//! Lanczos approximation (g = 7, nine coefficients) on Re z >= 1/2 and the
//! reflection formula elsewhere. The logarithmic form is used internally so
//! ratios of large gamma values can be formed without overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Beyond this modulus the Stirling series replaces the Lanczos sum, whose
// relative accuracy degrades for large |Im z|.
const STIRLING_RADIUS: f64 = 12.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Complex gamma function Γ(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// A logarithm of Γ(z): `ln_gamma(z).exp() == gamma(z)`.
///
/// The imaginary part is not reduced to the principal branch of log Γ, only
/// to a branch of the complex logarithm, which is all that exponentiation
/// and ratio formation need.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::GammaPole(z));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let ln_sin = ln_sin_pi(z);
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin - ln_gamma_right(Complex64::new(1.0, 0.0) - z));
    }
    Ok(ln_gamma_right(z))
}

/// Γ(a)/Γ(b) formed in log space.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    if z.norm() > STIRLING_RADIUS {
        return ln_gamma_stirling(z);
    }
    let zm1 = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (zm1 + 0.5) * t.ln() - t + sum.ln()
}

fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    // Bernoulli terms B_{2k} / (2k (2k-1))
    const TERMS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in TERMS {
        series += c * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// ln sin(πz), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (PI * z).sin().ln();
    }
    // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i; factor out the dominant exponential.
    let iz = Complex64::new(0.0, PI) * z;
    let ln_two_i = Complex64::new(0.0, 2.0).ln();
    if z.im > 0.0 {
        -iz + ((2.0 * iz).exp() - 1.0).ln() - ln_two_i
    } else {
        iz + (1.0 - (-2.0 * iz).exp()).ln() - ln_two_i
    }
}
