//! Bipolar coordinates (τ, θ) on the right half-plane.
//!
//! With poles A = (−α, 0) and B = (α, 0), τ = ln(|MA|/|MB|) and θ is the
//! angle AMB. Equivalently z = x + iy = α coth((τ − iθ)/2).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &CartesianPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BipolarPoint {
    pub tau: f64,
    pub theta: f64,
    pub alpha: f64,
}

impl BipolarPoint {
    pub fn new(tau: f64, theta: f64, alpha: f64) -> Self {
        Self { tau, theta, alpha }
    }

    /// ch τ − cos θ, formed without cancellation as 2sh²(τ/2) + 2sin²(θ/2).
    pub fn denominator(&self) -> f64 {
        ch_minus_cos(self.tau, self.theta)
    }
}

/// ch τ − cos θ without cancellation.
pub fn ch_minus_cos(tau: f64, theta: f64) -> f64 {
    let s = (0.5 * tau).sinh();
    let t = (0.5 * theta).sin();
    2.0 * (s * s + t * t)
}

/// Disk with center (a, 0) and radius R as the bipolar region τ ≥ τ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGeometry {
    pub center_a: f64,
    pub radius_r: f64,
    pub alpha: f64,
    pub tau0: f64,
}

pub fn from_bipolar(p: &BipolarPoint) -> CartesianPoint {
    let den = p.denominator();
    CartesianPoint {
        x: p.alpha * p.tau.sinh() / den,
        y: p.alpha * p.theta.sin() / den,
    }
}

pub fn to_bipolar(q: &CartesianPoint, alpha: f64) -> Result<BipolarPoint> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("bipolar scale must be positive, got {alpha}")));
    }
    if !(q.x > 0.0) {
        return Err(Error::Domain(format!("point ({}, {}) is not in the right half-plane", q.x, q.y)));
    }
    let plus = (q.x + alpha).hypot(q.y);
    let minus = (q.x - alpha).hypot(q.y);
    if minus == 0.0 {
        return Err(Error::Domain(format!("point ({}, {}) is the pole B, where tau is infinite", q.x, q.y)));
    }
    let tau = (plus / minus).ln();
    let z = Complex64::new(q.x, q.y);
    let w = (z + alpha) / (z - alpha);
    let mut theta = (-w.arg()).rem_euclid(TAU);
    if theta >= TAU {
        theta = 0.0;
    }
    Ok(BipolarPoint { tau, theta, alpha })
}

pub fn disk_geometry(a: f64, r: f64) -> Result<DiskGeometry> {
    if !(r > 0.0 && a > r) || !a.is_finite() {
        return Err(Error::Domain(format!("disk needs a > R > 0, got a = {a}, R = {r}")));
    }
    let alpha = ((a - r) * (a + r)).sqrt();
    // ch τ₀ = a/R and sh τ₀ = α/R, so τ₀ = ln((a + α)/R).
    let tau0 = ((a + alpha) / r).ln();
    Ok(DiskGeometry {
        center_a: a,
        radius_r: r,
        alpha,
        tau0,
    })
}

/// Center abscissa and radius of the level circle τ = τ₀.
pub fn level_circle(tau0: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(tau0 > 0.0) {
        return Err(Error::Domain(format!("level circle needs tau0 > 0, got {tau0}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("bipolar scale must be positive, got {alpha}")));
    }
    Ok((alpha / tau0.tanh(), alpha / tau0.sinh()))
}

/// Point of the level circle τ = τ₀ at bipolar angle θ.
pub fn circle_point(tau0: f64, theta: f64, alpha: f64) -> CartesianPoint {
    from_bipolar(&BipolarPoint::new(tau0, theta, alpha))
}

/// Bipolar angles of J uniform samples, θ_j = 2πj/J.
pub fn uniform_angles(samples: usize) -> Vec<f64> {
    (0..samples).map(|j| 2.0 * PI * j as f64 / samples as f64).collect()
}
