//! Associated Legendre functions P_ν^μ(ch τ) and Q_ν^μ(ch τ) of half-integer
//! degree ν = n − 1/2 and complex order μ.
//!
//! Values are produced from integral representations and carried as a
//! mantissa with a separate logarithmic scale, because e^{±nτ} leaves the
//! double range long before the solvers run out of modes. Q is returned in
//! the convention that keeps the phase e^{iπμ}; internally the normalized
//! function 𝑸 = e^{−iπμ} Q / Γ(ν+μ+1) is used, which has no poles and
//! satisfies a division-free three-term recursion.
//!
//! Representations:
//!
//! ```text
//! P_ν^μ(ch τ) = 2^μ sh^{−μ}τ / (√π Γ(½−μ)) ∫₀^π (ch τ + sh τ cos θ)^{μ+ν} sin^{−2μ}θ dθ      Re μ < ½
//! Q_ν^μ(ch τ) = e^{iπμ} 2^{−ν−1} Γ(ν+μ+1)/Γ(ν+1) sh^{−μ}τ ∫₀^π (ch τ + cos θ)^{μ−ν−1} sin^{2ν+1}θ dθ
//! Q_ν^μ(ch τ) = √(π/2) e^{iπμ} sh^μ τ / Γ(½−μ) ∫_τ^∞ e^{−(ν+½)t} (ch t − ch τ)^{−μ−½} dt       Re μ < ½
//! ```

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complexcore::{
    cpow_unchecked, integrate, ln_gamma, semi_infinite_integrate, QuadratureConfig, Tail,
};
use crate::error::{Error, Result};

/// Degree index above which Q is taken from the (τ, ∞) representation.
pub const Q_EXPONENTIAL_FROM: i64 = 8;

/// Orders with Re μ at or above this use the (0, π) representation for Q at
/// every degree: the (τ, ∞) integrand behaves like s^{−μ−½} at its endpoint.
pub const Q_EXPONENTIAL_MAX_ORDER: f64 = 0.25;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    IntegralP2,
    IntegralQ,
    Recursion,
    Whipple,
    Asymptotic,
}

/// `mantissa · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        Self { mantissa, log_scale }.normalized()
    }

    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// self / other without forming either value.
    pub fn ratio(&self, other: &Scaled) -> Complex64 {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }

    pub fn scale(&self, factor: Complex64) -> Scaled {
        Scaled::new(self.mantissa * factor, self.log_scale)
    }

    /// self · e^{ln_factor}, with the modulus kept in the exponent.
    pub fn scale_exp(&self, ln_factor: Complex64) -> Scaled {
        Scaled::new(
            self.mantissa * Complex64::from_polar(1.0, ln_factor.im),
            self.log_scale + ln_factor.re,
        )
    }

    /// Moves the modulus of the mantissa into the exponent when it grows
    /// far from 1.
    fn normalized(self) -> Self {
        let mag = self.mantissa.norm();
        if mag == 0.0 || !mag.is_finite() || (1e-100..=1e100).contains(&mag) {
            return self;
        }
        let shift = mag.ln();
        Self {
            mantissa: self.mantissa / mag,
            log_scale: self.log_scale + shift,
        }
    }

    /// a·x + b·y for scaled x, y.
    fn combine(a: Complex64, x: &Scaled, b: Complex64, y: &Scaled) -> Scaled {
        let base = x.log_scale.max(y.log_scale);
        let m = a * x.mantissa * (x.log_scale - base).exp() + b * y.mantissa * (y.log_scale - base).exp();
        Scaled::new(m, base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreEval {
    pub value: Complex64,
    pub method: Method,
    pub est_error: f64,
    /// The same value in scaled form; finite even when `value` overflows.
    pub scaled: Scaled,
}

impl LegendreEval {
    fn new(scaled: Scaled, method: Method, rel_error: f64) -> Self {
        let value = scaled.value();
        Self {
            value,
            method,
            est_error: rel_error * value.norm(),
            scaled,
        }
    }
}

fn legendre_cfg() -> QuadratureConfig {
    QuadratureConfig::singular().with_tolerances(1e-15, 1e-14)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Legendre argument needs tau > 0, got {tau}")))
    }
}

fn degree(n: i64) -> f64 {
    n as f64 - 0.5
}

/// Integral of exp(g(t) − shift) where the shift is the largest Re g over a
/// probe grid. Returns the scaled integral and its relative error.
fn shifted_integral<G>(g: G, a: f64, b: f64) -> Result<(Scaled, f64)>
where
    G: Fn(f64) -> Complex64,
{
    let mut shift = f64::NEG_INFINITY;
    let width = b - a;
    for j in 1..=64 {
        let re = g(a + width * j as f64 / 64.0).re;
        if re.is_finite() {
            shift = shift.max(re);
        }
    }
    for k in 1..40 {
        let re = g(a + width * 0.5f64.powi(k)).re;
        if re.is_finite() {
            shift = shift.max(re);
        }
    }
    if !shift.is_finite() {
        shift = 0.0;
    }
    let res = integrate(|t| (g(t) - shift).exp(), a, b, &legendre_cfg())?;
    let rel = if res.value.norm() > 0.0 {
        res.abs_error / res.value.norm()
    } else {
        0.0
    };
    Ok((Scaled::new(res.value, shift), rel))
}

/// P_ν^μ(ch τ) by the first representation for any complex degree and
/// Re μ < ½.
pub fn p_integral(nu: Complex64, mu: Complex64, tau: f64) -> Result<(Scaled, f64)> {
    check_tau(tau)?;
    if mu.re >= 0.5 {
        return Err(Error::Parameter(format!(
            "integral representation of P needs Re mu < 1/2, got mu = {mu}"
        )));
    }
    let sh = tau.sinh();
    let e = mu + nu;
    let two_sh = 2.0 * sh;
    // Fold θ ∈ [π/2, π] onto [0, π/2]; bases written without cancellation:
    // ch τ ± sh τ cos φ = e^{±τ} ∓ 2 sh τ sin²(φ/2).
    let g = |phi: f64| {
        let s2 = (0.5 * phi).sin().powi(2);
        let ln_sin = phi.sin().ln();
        let plus = (tau.exp() - two_sh * s2).ln();
        let minus = ((-tau).exp() + two_sh * s2).ln();
        let w = -2.0 * mu * ln_sin;
        ln_sum_exp(e * plus + w, e * minus + w)
    };
    let (integral, rel) = shifted_integral(g, 0.0, FRAC_PI_2)?;
    let ln_pref = mu * LN_2 - mu * sh.ln() - 0.5 * PI.ln() - ln_gamma(0.5 - mu)?;
    Ok((integral.scale_exp(ln_pref), rel))
}

/// ln(e^a + e^b) on a branch that exponentiates correctly.
fn ln_sum_exp(a: Complex64, b: Complex64) -> Complex64 {
    let (hi, lo) = if a.re >= b.re { (a, b) } else { (b, a) };
    if !lo.re.is_finite() {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp()).ln()
}

/// Normalized 𝑸_ν^μ(ch τ) = e^{−iπμ} Q / Γ(ν+μ+1) from the (0, π) representation, n ≥ 0.
fn q_hat_trig(n: i64, mu: Complex64, tau: f64) -> Result<(Scaled, f64)> {
    debug_assert!(n >= 0);
    let nu = degree(n);
    let e = mu - nu - 1.0;
    let two_n = 2.0 * n as f64;
    let ch2 = 2.0 * (0.5 * tau).cosh().powi(2);
    let sh2 = 2.0 * (0.5 * tau).sinh().powi(2);
    // ch τ + cos φ = 2ch²(τ/2) − 2sin²(φ/2), ch τ − cos φ = 2sh²(τ/2) + 2sin²(φ/2)
    let g = |phi: f64| {
        let s2 = 2.0 * (0.5 * phi).sin().powi(2);
        let w = if n == 0 { 0.0 } else { two_n * phi.sin().ln() };
        ln_sum_exp(e * (ch2 - s2).ln() + w, e * (sh2 + s2).ln() + w)
    };
    let (integral, rel) = shifted_integral(g, 0.0, FRAC_PI_2)?;
    let ln_pref = -(nu + 1.0) * LN_2 - ln_gamma(c(nu + 1.0))? - mu * tau.sinh().ln();
    Ok((integral.scale_exp(ln_pref), rel))
}

/// Normalized 𝑸 from the (τ, ∞) representation; needs Re μ < ½ and
/// Re(μ + ν + 1) > 0.
fn q_hat_exponential(n: i64, mu: Complex64, tau: f64) -> Result<(Scaled, f64)> {
    let nu = degree(n);
    if mu.re >= 0.5 || (mu.re + nu + 1.0) <= 0.0 {
        return Err(Error::Parameter(format!(
            "exponential representation of Q needs Re mu < 1/2 and Re(mu + nu + 1) > 0 (n = {n}, mu = {mu})"
        )));
    }
    let nf = n as f64;
    let a = -mu - 0.5;
    // t = τ + s, ch t − ch τ = 2 sh(τ + s/2) sh(s/2); the factor e^{−nτ} is kept in the scale.
    let f = |s: f64| {
        let base = 2.0 * (tau + 0.5 * s).sinh() * (0.5 * s).sinh();
        if base <= 0.0 {
            return c(0.0);
        }
        cpow_unchecked(base, a) * (-nf * s).exp()
    };
    let rate = nf + mu.re + 0.5;
    // Far tail: |f(s)| ≤ (e^{τ}/2)^{−Re a}·e^{−rate s}·(1 − e^{−2τ−s})^{..}; sample to bound.
    // |f(s)| e^{rate·s} = base^{Re a} e^{(Re μ + ½)s}; the e^{−ns} factors
    // cancel analytically (they would underflow against overflow at large n).
    let bound = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&s: &f64| {
            let base = 2.0 * (tau + 0.5 * s).sinh() * (0.5 * s).sinh();
            base.powf(a.re) * ((mu.re + 0.5) * s).exp()
        })
        .fold(0.0, f64::max)
        * 2.0;
    let res = semi_infinite_integrate(
        f,
        0.0,
        Tail::Exponential { rate, bound },
        &legendre_cfg().with_tolerances(1e-300, 1e-14),
    )?;
    let rel = if res.value.norm() > 0.0 {
        res.abs_error / res.value.norm()
    } else {
        0.0
    };
    let ln_pref = 0.5 * (FRAC_PI_2).ln() + mu * tau.sinh().ln() - ln_gamma(0.5 - mu)? - ln_gamma(mu + nu + 1.0)?;
    Ok((Scaled::new(res.value, -nf * tau).scale_exp(ln_pref), rel))
}

fn q_hat_direct(n: i64, mu: Complex64, tau: f64) -> Result<(Scaled, f64)> {
    let n = n.abs();
    if n >= Q_EXPONENTIAL_FROM && mu.re < Q_EXPONENTIAL_MAX_ORDER && mu.re + n as f64 + 0.5 > 0.0 {
        q_hat_exponential(n, mu, tau)
    } else {
        q_hat_trig(n, mu, tau)
    }
}

fn q_phase_gamma(n: i64, mu: Complex64) -> Result<Complex64> {
    let nu = degree(n.abs());
    let arg = mu + nu + 1.0;
    if arg.im == 0.0 && arg.re <= 0.0 && arg.re.fract() == 0.0 {
        return Err(Error::Parameter(format!(
            "Q is undefined: mu + nu + 1 = {arg} is a non-positive integer"
        )));
    }
    Ok(Complex64::new(0.0, PI) * mu + ln_gamma(arg)?)
}

/// P_{n−½}^μ(ch τ).
pub fn legendre_p(n: i64, mu: Complex64, tau: f64) -> Result<LegendreEval> {
    check_tau(tau)?;
    let n = n.abs();
    let k = raise_count(mu);
    if k == 0 {
        let (s, rel) = p_integral(c(degree(n)), mu, tau)?;
        return Ok(LegendreEval::new(s, Method::IntegralP2, rel));
    }
    let mu0 = mu - k as f64;
    // Base-order values at degree indices n, n−1, …, n−k.
    let mut column = Vec::with_capacity(k as usize + 1);
    let mut rel: f64 = 0.0;
    for j in 0..=k {
        let (s, r) = p_integral(c(degree((n - j).abs())), mu0, tau)?;
        rel = rel.max(r);
        column.push(s);
    }
    let z = tau.cosh();
    let sh = tau.sinh();
    let mut order = mu0;
    for _ in 0..k {
        // column[j] holds P^{order} at degree index n − j.
        let len = column.len();
        let mut next = Vec::with_capacity(len - 1);
        for j in 0..len - 1 {
            let nu = degree(n - j as i64);
            next.push(raise(&column[j], &column[j + 1], nu, order, z, sh));
        }
        column = next;
        order += 1.0;
    }
    Ok(LegendreEval::new(column[0], Method::Recursion, rel * 4.0))
}

/// Number of unit order raisings used for P at order μ.
///
/// The first representation is only used for Re μ < 0: its weight
/// sin^{−2μ}θ approaches a non-integrable endpoint singularity as Re μ → ½,
/// which no double-precision node set can resolve.
fn raise_count(mu: Complex64) -> i64 {
    if mu.re < 0.0 {
        0
    } else {
        mu.re.floor() as i64 + 1
    }
}

/// P_ν^{μ+1} = [(ν − μ) z P_ν^μ − (ν + μ) P_{ν−1}^μ] / sh τ.
fn raise(p_nu: &Scaled, p_nu_m1: &Scaled, nu: f64, mu: Complex64, z: f64, sh: f64) -> Scaled {
    Scaled::combine((nu - mu) * z / sh, p_nu, -(nu + mu) / sh, p_nu_m1)
}

/// Q_{n−½}^μ(ch τ), including the phase e^{iπμ}.
pub fn legendre_q(n: i64, mu: Complex64, tau: f64) -> Result<LegendreEval> {
    check_tau(tau)?;
    let factor = q_phase_gamma(n, mu)?;
    let (s, rel) = q_hat_direct(n, mu, tau)?;
    let scaled = s.scale_exp(factor);
    Ok(LegendreEval::new(scaled, Method::IntegralQ, rel))
}

/// Normalized second-kind function 𝑸_{n−½}^μ(ch τ) = e^{−iπμ} Q / Γ(ν+μ+1).
///
/// Finite at the poles of Γ(ν+μ+1), where Q itself is undefined; ratios
/// 𝑸(ch τ)/𝑸(ch τ₀) equal the Q ratios wherever Q exists.
pub fn legendre_q_normalized(n: i64, mu: Complex64, tau: f64) -> Result<Scaled> {
    check_tau(tau)?;
    Ok(q_hat_direct(n, mu, tau)?.0)
}

/// The leading-order large-degree behaviour of P.
pub fn asymptotic_p(n: i64, mu: Complex64, tau: f64) -> Result<Complex64> {
    check_tau(tau)?;
    if n < 1 {
        return Err(Error::Domain(format!("asymptotic form needs n >= 1, got {n}")));
    }
    let nu = degree(n);
    let ln = 0.5 * tau - 0.5 * (2.0 * PI * tau.sinh()).ln() + tau * nu;
    Ok(cpow_unchecked(nu, mu - 0.5) * ln.exp())
}

/// The leading-order large-degree behaviour of Q.
pub fn asymptotic_q(n: i64, mu: Complex64, tau: f64) -> Result<Complex64> {
    check_tau(tau)?;
    if n < 1 {
        return Err(Error::Domain(format!("asymptotic form needs n >= 1, got {n}")));
    }
    let nu = degree(n);
    let ln = -0.5 * tau + 0.5 * (PI / (2.0 * tau.sinh())).ln() - tau * nu;
    Ok((Complex64::new(0.0, PI) * mu).exp() * cpow_unchecked(nu, mu - 0.5) * ln.exp())
}

/// Relative residual of the Whipple formula
/// Q_ν^μ(ch τ) = e^{iπμ} √(π/2) Γ(μ+ν+1) sh^{−½}τ · P_{−μ−½}^{−ν−½}(coth τ).
pub fn whipple_check(n: i64, mu: Complex64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let n = n.abs();
    let nu = degree(n);
    let lhs = legendre_q(n, mu, tau)?.scaled;
    // coth τ = ch τ' with sh τ' = 1/sh τ.
    let tau_prime = (1.0 / tau.sinh()).asinh();
    let (p, _) = p_integral(-mu - 0.5, c(-nu - 0.5), tau_prime)?;
    let ln_factor = Complex64::new(0.0, PI) * mu + 0.5 * FRAC_PI_2.ln() + ln_gamma(mu + nu + 1.0)?
        - 0.5 * tau.sinh().ln();
    let rhs = p.scale_exp(ln_factor);
    Ok((1.0 - rhs.ratio(&lhs)).norm())
}

/// P_{n−½}^μ(ch τ) for n = 0..=n_max, by forward recursion in the degree.
pub fn p_sequence(n_max: usize, mu: Complex64, tau: f64) -> Result<Vec<Scaled>> {
    check_tau(tau)?;
    let k = raise_count(mu);
    let mu0 = mu - k as f64;
    // Raising the order consumes no degrees: index n needs n and n − 1, and
    // index −1 is index 1 by symmetry.
    let top = n_max.max(1);
    let mut seq = p_base_sequence(top, mu0, tau)?;
    let z = tau.cosh();
    let sh = tau.sinh();
    let mut order = mu0;
    for _ in 0..k {
        let mut next = Vec::with_capacity(seq.len());
        for n in 0..seq.len() {
            let below = if n == 0 { seq[1] } else { seq[n - 1] };
            next.push(raise(&seq[n], &below, degree(n as i64), order, z, sh));
        }
        seq = next;
        order += 1.0;
    }
    seq.truncate(n_max + 1);
    Ok(seq)
}

fn p_base_sequence(n_max: usize, mu: Complex64, tau: f64) -> Result<Vec<Scaled>> {
    let z = tau.cosh();
    let mut seq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n < 2 {
            seq.push(p_integral(c(degree(n as i64)), mu, tau)?.0);
            continue;
        }
        // (ν − μ + 1) P_{ν+1} = (2ν + 1) z P_ν − (ν + μ) P_{ν−1} with ν = n − 3/2.
        let nu = degree(n as i64 - 1);
        let denom = nu - mu + 1.0;
        seq.push(Scaled::combine(
            (2.0 * nu + 1.0) * z / denom,
            &seq[n - 1],
            -(nu + mu) / denom,
            &seq[n - 2],
        ));
    }
    Ok(seq)
}

/// Normalized 𝑸_{n−½}^μ(ch τ) for n = 0..=n_max, by backward recursion
/// 𝑸_{ν−1} = (2ν + 1) z 𝑸_ν − (ν − μ + 1)(ν + μ + 1) 𝑸_{ν+1}.
pub fn q_normalized_sequence(n_max: usize, mu: Complex64, tau: f64) -> Result<Vec<Scaled>> {
    check_tau(tau)?;
    let z = tau.cosh();
    let top = n_max as i64 + 1;
    let mut seq = vec![Scaled::new(c(0.0), 0.0); top as usize + 1];
    seq[top as usize] = q_hat_direct(top, mu, tau)?.0;
    seq[top as usize - 1] = q_hat_direct(top - 1, mu, tau)?.0;
    for n in (0..top - 1).rev() {
        let nu = degree(n + 1);
        let i = n as usize;
        seq[i] = Scaled::combine(
            c((2.0 * nu + 1.0) * z),
            &seq[i + 1],
            -(nu - mu + 1.0) * (nu + mu + 1.0),
            &seq[i + 2],
        );
    }
    seq.truncate(n_max + 1);
    Ok(seq)
}

/// dP/dz from (z² − 1) dP/dz = ν z P_ν^μ − (ν + μ) P_{ν−1}^μ.
pub fn legendre_p_dz(n: i64, mu: Complex64, tau: f64) -> Result<Complex64> {
    let nu = degree(n);
    let z = tau.cosh();
    let p = legendre_p(n, mu, tau)?.value;
    let p_below = legendre_p(n - 1, mu, tau)?.value;
    Ok((nu * z * p - (nu + mu) * p_below) / tau.sinh().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values: mpmath.legenp / legenq with type=3 at 30 digits.
    const P_REF: [(i64, f64, f64, f64, f64, f64); 10] = [
        (2, -1.0, 0.0, 1.0, 0.7151768678991155, 0.0),
        (3, 0.2, 0.1, 0.8, 3.6014298946875547, 0.3590903201319942),
        (0, 0.3, 0.0, 1.0, 0.8909830539862134, 0.0),
        (5, 0.5, 0.0, 1.0, 54.61929370588482, 0.0),
        (4, 1.0, 0.0, 0.7, 12.342337940306667, 0.0),
        (7, 0.25, 0.25, 1.5, 5535.4422942239735, 2857.6959435482204),
        (1, -0.5, 0.0, 0.3, 0.4402994888659638, 0.0),
        (12, 1.5, -0.3, 0.4, 576.7386052776542, -424.5512095261263),
        (30, -1.0, 0.0, 0.5, 10694.037805998676, 0.0),
        (9, 2.0, 0.5, 0.05, -905.1220441170846, -509.01446915396485),
    ];
    const Q_REF: [(i64, f64, f64, f64, f64, f64); 12] = [
        (1, -1.0, 0.0, 0.9, -0.9551110034817039, 0.0),
        (3, 0.0, 0.4, 0.6, 0.03458042748467714, 0.01638176281720853),
        (0, 0.0, 0.0, 1.0, 1.9753644322888657, 0.0),
        (5, 0.5, 0.0, 1.0, 0.0, 0.007789891649321099),
        (4, 1.0, 0.0, 0.7, -0.19991812956244842, 0.0),
        (7, 0.25, 0.25, 1.5, 1.8540688341249193e-06, 6.233869706099412e-06),
        (12, 1.5, -0.3, 0.4, -0.44373180527201955, -0.40268841065420496),
        (30, -1.0, 0.0, 0.5, -3.318927268036488e-09, 0.0),
        (10, -0.25, 0.35, 2.0, 7.9029027521956e-11, 9.149665181891228e-13),
        (2, -2.0, 0.0, 0.3, 3.171872337230673, 0.0),
        (9, 2.0, 0.5, 0.05, -72.18332674589445, 128.72974312545668),
        (20, 0.3, 0.0, 0.02, 1.7151614471725185, 2.360717206577428),
    ];

    #[test]
    fn reference_p_values() {
        for (n, mr, mi, tau, vr, vi) in P_REF {
            let got = legendre_p(n, cc(mr, mi), tau).unwrap().value;
            assert!(rel(got, cc(vr, vi)) < 1e-10, "P n={n} mu={mr}+{mi}i tau={tau}: {got}");
        }
    }

    #[test]
    fn reference_q_values() {
        for (n, mr, mi, tau, vr, vi) in Q_REF {
            let got = legendre_q(n, cc(mr, mi), tau).unwrap().value;
            assert!(rel(got, cc(vr, vi)) < 1e-10, "Q n={n} mu={mr}+{mi}i tau={tau}: {got}");
        }
    }

    #[test]
    fn p_zero_order_zero_degree() {
        let (s, _) = p_integral(c(0.0), c(0.0), 0.7).unwrap();
        assert!((s.value() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn degree_symmetry_is_exact() {
        let mu = cc(0.2, 0.1);
        assert_eq!(legendre_p(3, mu, 0.8).unwrap().value, legendre_p(-3, mu, 0.8).unwrap().value);
        let mu = cc(0.0, 0.4);
        assert_eq!(legendre_q(-3, mu, 0.6).unwrap().value, legendre_q(3, mu, 0.6).unwrap().value);
    }

    #[test]
    fn q_representations_overlap() {
        for &(mu, tau) in &[(cc(-1.0, 0.0), 0.5), (cc(0.3, 0.2), 1.2), (cc(-0.25, -0.7), 0.2)] {
            for n in 6..14 {
                let a = q_hat_trig(n, mu, tau).unwrap().0;
                let b = q_hat_exponential(n, mu, tau).unwrap().0;
                assert!((a.ratio(&b) - 1.0).norm() < 1e-11, "n={n} mu={mu} tau={tau}");
            }
        }
    }

    #[test]
    fn sequences_match_direct() {
        for &(mu, tau) in &[
            (cc(-1.0, 0.0), 0.5),
            (cc(0.5, 0.0), 1.0),
            (cc(-0.5, 0.0), 0.3),
            (cc(1.0, 0.0), 2.0),
            (cc(0.25, 0.35), 0.9),
            (cc(1.3, -0.4), 0.05),
        ] {
            let ps = p_sequence(40, mu, tau).unwrap();
            let qs = q_normalized_sequence(40, mu, tau).unwrap();
            for n in [0usize, 1, 2, 5, 13, 40] {
                let p = legendre_p(n as i64, mu, tau).unwrap().scaled;
                let q = legendre_q_normalized(n as i64, mu, tau).unwrap();
                assert!((ps[n].ratio(&p) - 1.0).norm() < 1e-10, "P n={n} mu={mu} tau={tau}");
                assert!((qs[n].ratio(&q) - 1.0).norm() < 1e-10, "Q n={n} mu={mu} tau={tau}");
            }
        }
    }

    #[test]
    fn large_degree_stays_finite() {
        let p = legendre_p(400, cc(-1.0, 0.0), 3.0).unwrap();
        let q = legendre_q(400, cc(-1.0, 0.0), 3.0).unwrap();
        // e^{±1200} is outside the double range; the scaled forms are not.
        assert!((p.scaled.log_scale + p.scaled.mantissa.norm().ln() - 1200.0).abs() < 20.0);
        assert!((q.scaled.log_scale + q.scaled.mantissa.norm().ln() + 1200.0).abs() < 20.0);
    }

    #[test]
    fn pole_is_parameter_error() {
        // μ = −½, n = 0: Γ(ν + μ + 1) = Γ(0)
        assert!(matches!(legendre_q(0, c(-0.5), 1.0), Err(Error::Parameter(_))));
        assert!(legendre_q_normalized(0, c(-0.5), 1.0).unwrap().value().norm().is_finite());
    }
}
