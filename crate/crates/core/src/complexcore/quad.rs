//! Adaptive quadrature for complex-valued integrands.
//!
//! Two engines sit behind [`integrate`]:
//!
//! * globally adaptive 15-point Gauss–Kronrod bisection for smooth integrands;
//! * double-exponential (tanh–sinh) refinement for integrands with algebraic
//!   endpoint behaviour `(t - a)^σ`, `Re σ > -1`.
//!
//! The tanh–sinh nodes approach an endpoint to within ~1e-300 of it, which is
//! only representable when that endpoint is 0. Integrands with a singular
//! endpoint elsewhere should be shifted so the singularity sits at the origin.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the endpoints of an integration interval behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointMode {
    #[default]
    Regular,
    AlgebraicSingularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub endpoint_mode: EndpointMode,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 30,
            endpoint_mode: EndpointMode::Regular,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32, endpoint_mode: EndpointMode) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_depth,
            endpoint_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn singular() -> Self {
        Self {
            endpoint_mode: EndpointMode::AlgebraicSingularity,
            ..Self::default()
        }
    }

    pub fn with_mode(mut self, mode: EndpointMode) -> Self {
        self.endpoint_mode = mode;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::Domain("quadrature max_depth must be >= 1".into()));
        }
        Ok(())
    }

    fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Values that can be integrated: scalars, complex numbers and small
/// complex vectors (used to integrate a kernel and its derivatives together).
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// Max-norm of the components.
    fn magnitude(&self) -> f64;
    /// Leading component, reported in non-convergence errors.
    fn leading(&self) -> Complex64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn leading(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn leading(&self) -> Complex64 {
        *self
    }
}

/// Fixed-length complex vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec<const N: usize>(pub [Complex64; N]);

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for CVec<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> QuadValue for CVec<N> {
    fn zero() -> Self {
        CVec([Complex64::new(0.0, 0.0); N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(QuadValue::magnitude).fold(0.0, f64::max)
    }
    fn leading(&self) -> Complex64 {
        self.0[0]
    }
}

/// Integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: f64,
}

fn no_convergence<T: QuadValue>(value: T, error: f64) -> Error {
    Error::NoConvergence {
        estimate: value.leading(),
        error,
    }
}

/// ∫ₐᵇ f(t) dt for a complex-valued integrand.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    integrate_values(f, a, b, cfg)
}

/// ∫ₐᵇ f(t) dt for any [`QuadValue`] integrand.
pub fn integrate_values<T, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("invalid integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: T::zero(),
            abs_error: 0.0,
        });
    }
    match cfg.endpoint_mode {
        EndpointMode::Regular => gauss_kronrod(&f, a, b, cfg),
        EndpointMode::AlgebraicSingularity => tanh_sinh(&f, a, b, cfg),
    }
}

/// Decay information for [`semi_infinite_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// |f(t)| <= bound · exp(-rate (t - a)) far from `a`.
    Exponential { rate: f64, bound: f64 },
    /// Integrable algebraic decay; the half line is mapped onto [0, 1).
    Algebraic,
}

/// ∫ₐ^∞ f(t) dt.
///
/// With an exponential tail the domain is truncated at the point where the
/// discarded tail falls below a tenth of `abs_tol`; with an algebraic tail the
/// substitution `t = a + s/(1-s)` maps the half line onto a finite interval
/// integrated by tanh–sinh.
pub fn semi_infinite_integrate<F>(f: F, a: f64, tail: Tail, cfg: &QuadratureConfig) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    semi_infinite_values(f, a, tail, cfg)
}

pub fn semi_infinite_values<T, F>(f: F, a: f64, tail: Tail, cfg: &QuadratureConfig) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    match tail {
        Tail::Exponential { rate, bound } => {
            if !(rate > 0.0) || !(bound >= 0.0) {
                return Err(Error::Domain(format!(
                    "exponential tail needs rate > 0 and bound >= 0 (rate {rate}, bound {bound})"
                )));
            }
            let cutoff = truncation_length(rate, bound, cfg.abs_tol);
            let mut res = integrate_values(&f, a, a + cutoff, cfg)?;
            res.abs_error += bound * (-rate * cutoff).exp() / rate;
            Ok(res)
        }
        Tail::Algebraic => {
            let mapped = |s: f64| {
                let one_minus = 1.0 - s;
                if one_minus <= 0.0 {
                    return T::zero();
                }
                f(a + s / one_minus) * (1.0 / (one_minus * one_minus))
            };
            tanh_sinh(&mapped, 0.0, 1.0, cfg)
        }
    }
}

/// Truncation length T such that bound·e^{-rate·T}/rate < abs_tol/10.
pub fn truncation_length(rate: f64, bound: f64, abs_tol: f64) -> f64 {
    if bound == 0.0 {
        return 1.0;
    }
    ((bound / (rate * 0.1 * abs_tol)).ln() / rate).max(1.0)
}

/// ∫_{-∞}^{∞} f(t) dt, folded onto the half line.
pub fn line_integrate<F>(f: F, tail: Tail, cfg: &QuadratureConfig) -> Result<Integral<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    semi_infinite_values(|t: f64| f(t) + f(-t), 0.0, tail, cfg)
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 7/15

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment<T> {
    a: f64,
    b: f64,
    depth: u32,
    value: T,
    error: f64,
}

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    (value, error)
}

const MAX_SEGMENTS: usize = 4000;

fn gauss_kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral<T>> {
    let (value, error) = gk15(f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        depth: 0,
        value,
        error,
    }];
    loop {
        let total = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.magnitude().is_finite() || !total_err.is_finite() {
            return Err(no_convergence(total, f64::INFINITY));
        }
        if total_err <= cfg.target(total.magnitude()) {
            return Ok(Integral {
                value: total,
                abs_error: total_err,
            });
        }
        // Worst segment that may still be split.
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < cfg.max_depth)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(no_convergence(total, total_err));
        };
        if segments.len() >= MAX_SEGMENTS {
            return Err(no_convergence(total, total_err));
        }
        let seg = segments.swap_remove(i);
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = gk15(f, lo, hi);
            segments.push(Segment {
                a: lo,
                b: hi,
                depth: seg.depth + 1,
                value,
                error,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// tanh–sinh

const TS_T_MAX: f64 = 6.0;
const TS_MIN_LEVEL: u32 = 3;
const TS_MAX_LEVEL: u32 = 12;

/// Contribution of the nodes ±t, with the endpoint distances formed directly
/// so nodes next to an endpoint at 0 keep their full relative precision.
fn ts_pair<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, t: f64) -> Option<T> {
    let half = 0.5 * (b - a);
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    let cosh_u = u.cosh();
    let weight = half * std::f64::consts::FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
    if weight == 0.0 {
        return Some(T::zero());
    }
    // distance from the nearer endpoint: half·(1 - tanh u) = 2·half / (1 + e^{2u})
    let offset = 2.0 * half / (1.0 + (2.0 * u).exp());
    let left = a + offset;
    let right = b - offset;
    let fl = f(left);
    let fr = f(right);
    let sum = fl + fr;
    let mag = sum.magnitude();
    if mag.is_finite() {
        Some(sum * weight)
    } else if t > 3.0 {
        // Nodes this close to an endpoint carry negligible weight.
        Some(T::zero())
    } else {
        None
    }
}

fn tanh_sinh<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral<T>> {
    let half = 0.5 * (b - a);
    let center_weight = half * std::f64::consts::FRAC_PI_2;
    let mut sum = f(0.5 * (a + b)) * center_weight;
    if !sum.magnitude().is_finite() {
        return Err(no_convergence(sum, f64::INFINITY));
    }
    let mut h = 1.0;
    let mut k = 1.0;
    while k <= TS_T_MAX {
        sum = sum + ts_pair(f, a, b, k).ok_or_else(|| no_convergence(sum, f64::INFINITY))?;
        k += 1.0;
    }
    let mut estimate = sum * h;
    let max_level = cfg.max_depth.min(TS_MAX_LEVEL);
    let mut level = 0;
    loop {
        level += 1;
        h *= 0.5;
        // Odd multiples of the new step.
        let mut t = h;
        while t <= TS_T_MAX {
            sum = sum + ts_pair(f, a, b, t).ok_or_else(|| no_convergence(sum * h, f64::INFINITY))?;
            t += 2.0 * h;
        }
        let next = sum * h;
        let err = (next - estimate).magnitude();
        estimate = next;
        if level >= TS_MIN_LEVEL && err <= cfg.target(next.magnitude()) {
            return Ok(Integral {
                value: next,
                abs_error: err,
            });
        }
        if level >= max_level {
            return Err(no_convergence(next, err));
        }
    }
}
