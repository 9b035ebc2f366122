//! Fourier–Legendre series solutions of L_m u = 0 in bipolar coordinates:
//! Dirichlet solvers for disks τ ≥ τ₀, their exteriors τ ≤ τ₀, and annuli
//! τ₀ ≤ τ ≤ τ₁, plus the split of an annulus solution into a part regular
//! inside the hole and a part vanishing on the half-plane boundary.
//!
//! Every solution has the form
//!
//! ```text
//! u(τ, θ) = sh^{(1−m)/2}τ (ch τ − cos θ)^{m/2} Σₙ [aₙ Qₙ(ch τ)/Qₙ(ch τ₀) + bₙ Pₙ(ch τ)/Pₙ(ch τ_b)] e^{inθ}
//! ```
//!
//! with Pₙ = P_{n−½}^{(m−1)/2}, Qₙ = Q_{n−½}^{(m−1)/2}, and τ_b the circle the
//! P terms are normalized on (τ₀ for an exterior, τ₁ for an annulus).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipolar::{ch_minus_cos, from_bipolar, to_bipolar, BipolarPoint, CartesianPoint};
use crate::complexcore::cpow_posbase;
use crate::error::{Error, Result};
use crate::legendre::{p_sequence, q_normalized_sequence, Scaled};

pub const DEFAULT_N_MAX: usize = 32;

/// Smallest |1 − pₙqₙ| accepted in an annulus mode solve. The ratios carry
/// relative errors near 1e−13 from the recurrences, so anything smaller is
/// indistinguishable from an exactly singular mode.
pub const MIN_MODE_DETERMINANT: f64 = 1e-10;

// Slack when checking that a point lies in a solution's domain.
const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Disk,
    Exterior,
    Annulus,
}

/// Uniform samples of boundary data on the level circle τ, at θ_j = 2πj/J.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub tau: f64,
    pub values: Vec<Complex64>,
}

impl BoundaryTrace {
    pub fn new(tau: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("trace circle needs tau > 0, got {tau}")));
        }
        if values.is_empty() {
            return Err(Error::Parameter("boundary trace has no samples".into()));
        }
        Ok(Self { tau, values })
    }

    /// Samples `f` at J points of the circle τ with bipolar scale α.
    pub fn from_fn<F>(tau: f64, alpha: f64, samples: usize, f: F) -> Result<Self>
    where
        F: Fn(CartesianPoint) -> Complex64,
    {
        let values = (0..samples)
            .map(|j| f(from_bipolar(&BipolarPoint::new(tau, theta_j(j, samples), alpha))))
            .collect();
        Self::new(tau, values)
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| theta_j(j, self.values.len())).collect()
    }
}

fn theta_j(j: usize, samples: usize) -> f64 {
    2.0 * PI * j as f64 / samples as f64
}

/// Number of samples used by default for a given n_max.
pub fn default_samples(n_max: usize) -> usize {
    (4 * n_max.max(1)).next_power_of_two()
}

/// sh^{(1−m)/2}τ · (ch τ − cos θ)^{m/2}.
pub fn prefactor(m: Complex64, p: &BipolarPoint) -> Result<Complex64> {
    if !(p.tau > 0.0) {
        return Err(Error::Domain(format!("prefactor needs tau > 0, got {}", p.tau)));
    }
    Ok(cpow_posbase(p.tau.sinh(), (1.0 - m) / 2.0)? * cpow_posbase(p.denominator(), m / 2.0)?)
}

/// Weighted discrete Fourier coefficients aₙ, n = −n_max..=n_max, of a trace:
/// aₙ = (1/J) Σⱼ (ch τ − cos θⱼ)^{−m/2} sh^{(m−1)/2}τ · valueⱼ · e^{−inθⱼ}.
pub fn fourier_coeffs(m: Complex64, trace: &BoundaryTrace, n_max: usize) -> Result<Vec<Complex64>> {
    let samples = trace.values.len();
    let required = 4 * n_max.max(1);
    if samples < required || !samples.is_power_of_two() {
        return Err(Error::Resolution {
            samples,
            n_max,
            required: required.next_power_of_two(),
        });
    }
    let sh_pow = cpow_posbase(trace.tau.sinh(), (m - 1.0) / 2.0)?;
    let weighted: Vec<Complex64> = trace
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let theta = theta_j(j, samples);
            cpow_posbase(ch_minus_cos(trace.tau, theta), -m / 2.0).map(|w| w * sh_pow * v)
        })
        .collect::<Result<_>>()?;
    let n_max = n_max as i64;
    Ok((-n_max..=n_max)
        .map(|n| {
            let sum: Complex64 = weighted
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    // Reduce n·j mod J before forming the angle.
                    let k = (n * j as i64).rem_euclid(samples as i64) as f64;
                    w * Complex64::from_polar(1.0, -2.0 * PI * k / samples as f64)
                })
                .sum();
            sum / samples as f64
        })
        .collect())
}

#[derive(Debug, Clone)]
struct ReferenceValues {
    q: Option<Vec<Scaled>>,
    p: Option<Vec<Scaled>>,
}

/// A Fourier–Legendre series solution. Coefficient vectors are indexed by
/// n + n_max.
#[derive(Debug, Clone)]
pub struct FourierLegendreSolution {
    pub m: Complex64,
    pub alpha: f64,
    pub kind: SolutionKind,
    pub tau0: f64,
    pub tau1: Option<f64>,
    pub n_max: usize,
    pub q_coeffs: Vec<Complex64>,
    pub p_coeffs: Vec<Complex64>,
    reference: OnceLock<ReferenceValues>,
}

impl FourierLegendreSolution {
    pub fn new(
        m: Complex64,
        alpha: f64,
        kind: SolutionKind,
        tau0: f64,
        tau1: Option<f64>,
        n_max: usize,
        q_coeffs: Vec<Complex64>,
        p_coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("bipolar scale must be positive, got {alpha}")));
        }
        if !(tau0 > 0.0 && tau0.is_finite()) {
            return Err(Error::Domain(format!("tau0 must be positive, got {tau0}")));
        }
        let len = 2 * n_max + 1;
        let (want_q, want_p) = match kind {
            SolutionKind::Disk => (len, 0),
            SolutionKind::Exterior => (0, len),
            SolutionKind::Annulus => (len, len),
        };
        if q_coeffs.len() != want_q || p_coeffs.len() != want_p {
            return Err(Error::Parameter(format!(
                "{kind:?} solution with n_max = {n_max} needs {want_q} Q and {want_p} P coefficients, got {} and {}",
                q_coeffs.len(),
                p_coeffs.len()
            )));
        }
        match (kind, tau1) {
            (SolutionKind::Annulus, Some(t1)) if t1 > tau0 && t1.is_finite() => {}
            (SolutionKind::Annulus, _) => {
                return Err(Error::Domain(format!("annulus needs tau1 > tau0 = {tau0}, got {tau1:?}")));
            }
            (_, None) => {}
            (_, Some(_)) => return Err(Error::Parameter("tau1 is only used by annulus solutions".into())),
        }
        Ok(Self {
            m,
            alpha,
            kind,
            tau0,
            tau1,
            n_max,
            q_coeffs,
            p_coeffs,
            reference: OnceLock::new(),
        })
    }

    /// Coefficient of mode n in the Q part (zero if absent).
    pub fn q_coeff(&self, n: i64) -> Complex64 {
        coeff(&self.q_coeffs, self.n_max, n)
    }

    pub fn p_coeff(&self, n: i64) -> Complex64 {
        coeff(&self.p_coeffs, self.n_max, n)
    }

    fn mu(&self) -> Complex64 {
        (self.m - 1.0) / 2.0
    }

    /// τ the P terms are normalized on.
    fn p_tau(&self) -> f64 {
        self.tau1.unwrap_or(self.tau0)
    }

    fn reference(&self) -> Result<&ReferenceValues> {
        if let Some(r) = self.reference.get() {
            return Ok(r);
        }
        let mu = self.mu();
        let q = if self.q_coeffs.is_empty() {
            None
        } else {
            Some(q_normalized_sequence(self.n_max, mu, self.tau0)?)
        };
        let p = if self.p_coeffs.is_empty() {
            None
        } else {
            Some(p_sequence(self.n_max, mu, self.p_tau())?)
        };
        Ok(self.reference.get_or_init(|| ReferenceValues { q, p }))
    }

    fn check_domain(&self, tau: f64) -> Result<()> {
        let slack = DOMAIN_SLACK * self.tau0.max(1.0);
        let ok = match self.kind {
            SolutionKind::Disk => tau >= self.tau0 - slack,
            SolutionKind::Exterior => tau > 0.0 && tau <= self.tau0 + slack,
            SolutionKind::Annulus => tau >= self.tau0 - slack && tau <= self.p_tau() + slack,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "tau = {tau} is outside the domain of this {:?} solution",
                self.kind
            )))
        }
    }

    /// Series value and a tail estimate at a bipolar point.
    pub fn evaluate_with_tail(&self, p: &BipolarPoint) -> Result<(Complex64, f64)> {
        if (p.alpha - self.alpha).abs() > 1e-12 * self.alpha {
            return Err(Error::Parameter(format!(
                "point uses bipolar scale {} but the solution uses {}",
                p.alpha, self.alpha
            )));
        }
        self.check_domain(p.tau)?;
        let reference = self.reference()?;
        let mu = self.mu();
        let n_max = self.n_max as i64;
        let mut radial_q = Vec::new();
        let mut radial_p = Vec::new();
        if let Some(q_ref) = &reference.q {
            let q_here = q_normalized_sequence(self.n_max, mu, p.tau)?;
            radial_q = q_here.iter().zip(q_ref).map(|(a, b)| a.ratio(b)).collect();
        }
        if let Some(p_ref) = &reference.p {
            let p_here = p_sequence(self.n_max, mu, p.tau)?;
            radial_p = p_here.iter().zip(p_ref).map(|(a, b)| a.ratio(b)).collect();
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut last = 0.0f64;
        for n in -n_max..=n_max {
            let k = n.unsigned_abs() as usize;
            let mut term = Complex64::new(0.0, 0.0);
            if !radial_q.is_empty() {
                term += self.q_coeff(n) * radial_q[k];
            }
            if !radial_p.is_empty() {
                term += self.p_coeff(n) * radial_p[k];
            }
            if n.abs() == n_max {
                last = last.max(term.norm());
            }
            sum += term * Complex64::from_polar(1.0, n as f64 * p.theta);
        }
        let pref = prefactor(self.m, p)?;
        // Terms decay at least like e^{−|n|·δ}, δ the distance to the
        // nearest normalization circle; bound the omitted terms geometrically.
        let delta = self.decay_gap(p.tau);
        let tail = if delta > 0.0 {
            2.0 * last * (-delta).exp() / (1.0 - (-delta).exp())
        } else {
            f64::INFINITY
        };
        Ok((pref * sum, tail * pref.norm()))
    }

    fn decay_gap(&self, tau: f64) -> f64 {
        match self.kind {
            SolutionKind::Disk => tau - self.tau0,
            SolutionKind::Exterior => self.tau0 - tau,
            SolutionKind::Annulus => (tau - self.tau0).min(self.p_tau() - tau),
        }
    }

    pub fn evaluate(&self, p: &BipolarPoint) -> Result<Complex64> {
        Ok(self.evaluate_with_tail(p)?.0)
    }

    pub fn evaluate_cartesian(&self, q: &CartesianPoint) -> Result<Complex64> {
        self.evaluate(&to_bipolar(q, self.alpha)?)
    }

    /// As [`evaluate`](Self::evaluate), failing when the truncation tail
    /// estimate exceeds `tol` relative to the value.
    pub fn evaluate_checked(&self, p: &BipolarPoint, tol: f64) -> Result<Complex64> {
        let (value, tail) = self.evaluate_with_tail(p)?;
        let allowed = tol * value.norm().max(f64::MIN_POSITIVE);
        if tail > allowed && self.decay_gap(p.tau) > 1e-3 {
            return Err(Error::SeriesTail { tail, tol: allowed });
        }
        Ok(value)
    }

    pub fn to_document(&self) -> SolutionDocument {
        let pack = |v: &[Complex64]| {
            v.iter()
                .enumerate()
                .map(|(i, c)| (i as i64 - self.n_max as i64, c.re, c.im))
                .collect()
        };
        SolutionDocument {
            m: [self.m.re, self.m.im],
            alpha: self.alpha,
            kind: self.kind,
            tau0: self.tau0,
            tau1: self.tau1,
            n_max: self.n_max,
            q_coeffs: pack(&self.q_coeffs),
            p_coeffs: pack(&self.p_coeffs),
        }
    }

    pub fn from_document(doc: &SolutionDocument) -> Result<Self> {
        let unpack = |entries: &[(i64, f64, f64)]| -> Result<Vec<Complex64>> {
            if entries.is_empty() {
                return Ok(Vec::new());
            }
            let mut out = vec![Complex64::new(0.0, 0.0); 2 * doc.n_max + 1];
            for &(n, re, im) in entries {
                if n.unsigned_abs() as usize > doc.n_max {
                    return Err(Error::Parameter(format!("mode {n} exceeds n_max = {}", doc.n_max)));
                }
                out[(n + doc.n_max as i64) as usize] = Complex64::new(re, im);
            }
            Ok(out)
        };
        Self::new(
            Complex64::new(doc.m[0], doc.m[1]),
            doc.alpha,
            doc.kind,
            doc.tau0,
            doc.tau1,
            doc.n_max,
            unpack(&doc.q_coeffs)?,
            unpack(&doc.p_coeffs)?,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("solution documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SolutionDocument =
            serde_json::from_str(text).map_err(|e| Error::Parameter(format!("invalid solution document: {e}")))?;
        Self::from_document(&doc)
    }
}

fn coeff(v: &[Complex64], n_max: usize, n: i64) -> Complex64 {
    if v.is_empty() || n.unsigned_abs() as usize > n_max {
        return Complex64::new(0.0, 0.0);
    }
    v[(n + n_max as i64) as usize]
}

/// Serialized form of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub m: [f64; 2],
    pub alpha: f64,
    pub kind: SolutionKind,
    pub tau0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<f64>,
    pub n_max: usize,
    #[serde(default)]
    pub q_coeffs: Vec<(i64, f64, f64)>,
    #[serde(default)]
    pub p_coeffs: Vec<(i64, f64, f64)>,
}

/// Interior Dirichlet problem on the disk τ ≥ trace.tau.
pub fn solve_disk(m: Complex64, trace: &BoundaryTrace, alpha: f64, n_max: usize) -> Result<FourierLegendreSolution> {
    let a = fourier_coeffs(m, trace, n_max)?;
    FourierLegendreSolution::new(m, alpha, SolutionKind::Disk, trace.tau, None, n_max, a, Vec::new())
}

/// Exterior problem on 0 < τ ≤ trace.tau. The coefficients match the trace
/// mode by mode; uniqueness of such a representation is only known for
/// Re m < 1.
pub fn solve_exterior(
    m: Complex64,
    trace: &BoundaryTrace,
    alpha: f64,
    n_max: usize,
) -> Result<FourierLegendreSolution> {
    let b = fourier_coeffs(m, trace, n_max)?;
    FourierLegendreSolution::new(m, alpha, SolutionKind::Exterior, trace.tau, None, n_max, Vec::new(), b)
}

/// Per-mode ratios (pₙ, qₙ) = (Pₙ(τ₀)/Pₙ(τ₁), Qₙ(τ₁)/Qₙ(τ₀)) for n = 0..=n_max.
pub fn mode_ratios(m: Complex64, tau0: f64, tau1: f64, n_max: usize) -> Result<Vec<(Complex64, Complex64)>> {
    let mu = (m - 1.0) / 2.0;
    let p0 = p_sequence(n_max, mu, tau0)?;
    let p1 = p_sequence(n_max, mu, tau1)?;
    let q0 = q_normalized_sequence(n_max, mu, tau0)?;
    let q1 = q_normalized_sequence(n_max, mu, tau1)?;
    Ok((0..=n_max).map(|n| (p0[n].ratio(&p1[n]), q1[n].ratio(&q0[n]))).collect())
}

/// Dirichlet problem on the annulus τ₀ ≤ τ ≤ τ₁ with data on both circles.
pub fn solve_annulus(
    m: Complex64,
    trace0: &BoundaryTrace,
    trace1: &BoundaryTrace,
    alpha: f64,
    n_max: usize,
) -> Result<FourierLegendreSolution> {
    let (tau0, tau1) = (trace0.tau, trace1.tau);
    if !(tau1 > tau0) {
        return Err(Error::Domain(format!("annulus needs tau0 < tau1, got {tau0} and {tau1}")));
    }
    let f0 = fourier_coeffs(m, trace0, n_max)?;
    let f1 = fourier_coeffs(m, trace1, n_max)?;
    let ratios = mode_ratios(m, tau0, tau1, n_max)?;
    let mut a = Vec::with_capacity(f0.len());
    let mut b = Vec::with_capacity(f0.len());
    for (i, (g0, g1)) in f0.iter().zip(&f1).enumerate() {
        let n = i as i64 - n_max as i64;
        let (p, q) = ratios[n.unsigned_abs() as usize];
        // [1 p; q 1] [A; B] = [g0; g1]
        let det = 1.0 - p * q;
        if det.norm() < MIN_MODE_DETERMINANT {
            return Err(Error::SingularMode { n, det: det.norm() });
        }
        a.push((g0 - p * g1) / det);
        b.push((g1 - q * g0) / det);
    }
    FourierLegendreSolution::new(m, alpha, SolutionKind::Annulus, tau0, Some(tau1), n_max, a, b)
}

/// Splits an annulus solution into its Q part (a disk solution on τ ≥ τ₀,
/// regular inside the hole) and its P part (an exterior solution on τ ≤ τ₁).
pub fn decompose(sol: &FourierLegendreSolution) -> Result<(FourierLegendreSolution, FourierLegendreSolution)> {
    let tau1 = match (sol.kind, sol.tau1) {
        (SolutionKind::Annulus, Some(t)) => t,
        _ => {
            return Err(Error::Parameter(format!(
                "decompose needs an annulus solution, got {:?}",
                sol.kind
            )))
        }
    };
    let interior = FourierLegendreSolution::new(
        sol.m,
        sol.alpha,
        SolutionKind::Disk,
        sol.tau0,
        None,
        sol.n_max,
        sol.q_coeffs.clone(),
        Vec::new(),
    )?;
    let exterior = FourierLegendreSolution::new(
        sol.m,
        sol.alpha,
        SolutionKind::Exterior,
        tau1,
        None,
        sol.n_max,
        Vec::new(),
        sol.p_coeffs.clone(),
    )?;
    Ok((interior, exterior))
}

/// v = sh^{(m−1)/2}τ (ch τ − cos θ)^{−m/2} u, as a function of (τ, θ).
pub fn bipolar_transform<F>(m: Complex64, alpha: f64, u: F) -> impl Fn(f64, f64) -> Complex64
where
    F: Fn(CartesianPoint) -> Complex64,
{
    move |tau, theta| {
        let p = BipolarPoint::new(tau, theta, alpha);
        match prefactor(m, &p) {
            Ok(pref) => u(from_bipolar(&p)) / pref,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    }
}

/// Finite-difference residual of
/// v_ττ + v_θθ + coth τ v_τ + (1/4 − (m−1)²/(4 sh²τ)) v.
pub fn bipo_residual<V>(m: Complex64, v: V, tau: f64, theta: f64, h: f64) -> Result<Complex64>
where
    V: Fn(f64, f64) -> Complex64,
{
    if !(h > 0.0) || tau <= h {
        return Err(Error::Step { h, x: tau });
    }
    let c = v(tau, theta);
    let tp = v(tau + h, theta);
    let tm = v(tau - h, theta);
    let sp = v(tau, theta + h);
    let sm = v(tau, theta - h);
    let v_tt = (tp - 2.0 * c + tm) / (h * h);
    let v_ss = (sp - 2.0 * c + sm) / (h * h);
    let v_t = (tp - tm) / (2.0 * h);
    let sh = tau.sinh();
    let coeff = 0.25 - (m - 1.0) * (m - 1.0) / (4.0 * sh * sh);
    Ok(v_tt + v_ss + v_t / tau.tanh() + coeff * c)
}
