//! Gram matrix of the annulus family 𝒞 under the weighted boundary inner
//! product
//!
//! ```text
//! ⟨f, g⟩ = Σ_{τ ∈ {τ₀, τ₁}} (1/2π) ∫₀^{2π} f ḡ · sh^{Re m−1}τ / (ch τ − cos θ)^{Re m} dθ.
//! ```
//!
//! The family is c_{2n} = pref · Qₙ(ch τ)/Qₙ(ch τ₀) · e^{inθ} and
//! c_{2n+1} = pref · Pₙ(ch τ)/Pₙ(ch τ₁) · e^{inθ}. The weight cancels |pref|²,
//! so the Gram matrix splits into 2×2 blocks Mₙ built from the two ratios.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bipolar::BipolarPoint;
use crate::complexcore::{cpow_posbase, integrate, QuadratureConfig};
use crate::error::{Error, Result};
use crate::legendre::{legendre_p, legendre_q_normalized};
use crate::spectral::{mode_ratios, prefactor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramBlock {
    pub n: i64,
    #[serde(skip)]
    pub entries: [[Complex64; 2]; 2],
    #[serde(serialize_with = "real_of")]
    pub det: Complex64,
    pub eig_min: f64,
    pub eig_max: f64,
}

fn real_of<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(z.re)
}

impl GramBlock {
    fn from_ratios(n: i64, p: Complex64, q: Complex64) -> Self {
        let a = 1.0 + q.norm_sqr();
        let d = 1.0 + p.norm_sqr();
        let b = p.conj() + q;
        let entries = [[Complex64::new(a, 0.0), b], [b.conj(), Complex64::new(d, 0.0)]];
        let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        // The smaller root is det / eig_max, which keeps it accurate when
        // the block is nearly singular.
        let eig_max = mid + rad;
        Self {
            n,
            entries,
            det,
            eig_min: det.re / eig_max,
            eig_max,
        }
    }

    /// max |Mₙ − I| over the entries.
    pub fn distance_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((e - id).norm());
            }
        }
        worst
    }
}

fn check_taus(tau0: f64, tau1: f64) -> Result<()> {
    if tau0 > 0.0 && tau1 > tau0 && tau1.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("need 0 < tau0 < tau1, got {tau0} and {tau1}")))
    }
}

/// (P-ratio, Q-ratio) = (Pₙ(τ₀)/Pₙ(τ₁), Qₙ(τ₁)/Qₙ(τ₀)) by direct evaluation.
pub fn ratios(m: Complex64, n: i64, tau0: f64, tau1: f64) -> Result<(Complex64, Complex64)> {
    check_taus(tau0, tau1)?;
    let mu = (m - 1.0) / 2.0;
    let p0 = legendre_p(n, mu, tau0)?.scaled;
    let p1 = legendre_p(n, mu, tau1)?.scaled;
    let q0 = legendre_q_normalized(n, mu, tau0)?;
    let q1 = legendre_q_normalized(n, mu, tau1)?;
    Ok((p0.ratio(&p1), q1.ratio(&q0)))
}

pub fn gram_block(m: Complex64, n: i64, tau0: f64, tau1: f64) -> Result<GramBlock> {
    let (p, q) = ratios(m, n, tau0, tau1)?;
    Ok(GramBlock::from_ratios(n, p, q))
}

/// Blocks for n = 0..=n_max from the recurrence-based sequences. Blocks
/// depend on |n| only.
pub fn gram_blocks(m: Complex64, tau0: f64, tau1: f64, n_max: usize) -> Result<Vec<GramBlock>> {
    check_taus(tau0, tau1)?;
    Ok(mode_ratios(m, tau0, tau1, n_max)?
        .into_iter()
        .enumerate()
        .map(|(n, (p, q))| GramBlock::from_ratios(n as i64, p, q))
        .collect())
}

/// (c², C²): extreme block eigenvalues over |n| ≤ N.
pub fn frame_bounds(m: Complex64, tau0: f64, tau1: f64, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Parameter("frame bounds need N >= 1".into()));
    }
    let blocks = gram_blocks(m, tau0, tau1, n)?;
    let c2 = blocks.iter().map(|b| b.eig_min).fold(f64::INFINITY, f64::min);
    let big_c2 = blocks.iter().map(|b| b.eig_max).fold(0.0, f64::max);
    Ok((c2, big_c2))
}

/// Member c_i of the family evaluated at a bipolar point.
fn family_member(m: Complex64, i: i64, tau0: f64, tau1: f64, p: &BipolarPoint) -> Result<Complex64> {
    let n = i.div_euclid(2);
    let mu = (m - 1.0) / 2.0;
    let radial = if i.rem_euclid(2) == 0 {
        legendre_q_normalized(n, mu, p.tau)?.ratio(&legendre_q_normalized(n, mu, tau0)?)
    } else {
        legendre_p(n, mu, p.tau)?.scaled.ratio(&legendre_p(n, mu, tau1)?.scaled)
    };
    Ok(prefactor(m, p)? * radial * Complex64::from_polar(1.0, n as f64 * p.theta))
}

/// ⟨c_i, c_j⟩ by adaptive quadrature on both circles, with the weight
/// evaluated as written rather than cancelled.
pub fn inner_product_quadrature(m: Complex64, tau0: f64, tau1: f64, i: i64, j: i64) -> Result<Complex64> {
    check_taus(tau0, tau1)?;
    let cfg = QuadratureConfig::default().with_tolerances(1e-13, 1e-12);
    let mut total = Complex64::new(0.0, 0.0);
    for tau in [tau0, tau1] {
        // Radial factors do not depend on θ; evaluate the members once on
        // a unit angular profile and rescale.
        let probe = BipolarPoint::new(tau, 0.0, 1.0);
        let ri = family_member(m, i, tau0, tau1, &probe)? / prefactor(m, &probe)?;
        let rj = family_member(m, j, tau0, tau1, &probe)? / prefactor(m, &probe)?;
        let (ni, nj) = (i.div_euclid(2) as f64, j.div_euclid(2) as f64);
        let sh_w = tau.sinh().powf(m.re - 1.0);
        let integrand = |theta: f64| -> Complex64 {
            let p = BipolarPoint::new(tau, theta, 1.0);
            let pref = prefactor(m, &p).unwrap_or_default();
            let weight = sh_w
                * cpow_posbase(p.denominator(), Complex64::new(-m.re, 0.0))
                    .map(|w| w.re)
                    .unwrap_or(0.0);
            let fi = pref * ri * Complex64::from_polar(1.0, ni * theta);
            let fj = pref * rj * Complex64::from_polar(1.0, nj * theta);
            fi * fj.conj() * weight
        };
        total += integrate(integrand, 0.0, 2.0 * PI, &cfg)?.value / (2.0 * PI);
    }
    Ok(total)
}

/// |⟨c_i, c_j⟩| by quadrature, for members on different Fourier modes.
pub fn gram_offdiag_check(m: Complex64, tau0: f64, tau1: f64, i: i64, j: i64) -> Result<f64> {
    if i.div_euclid(2) == j.div_euclid(2) {
        return Err(Error::Parameter(format!("members {i} and {j} share a Fourier mode")));
    }
    Ok(inner_product_quadrature(m, tau0, tau1, i, j)?.norm())
}
