//! Generalized axisymmetric potentials: solutions of the Weinstein equation
//! L_m u = Δu + (m/x) ∂ₓu = 0 on the right half-plane for complex m.
//!
//! Modules follow the computational layers: complex scalars and quadrature,
//! bipolar geometry, Legendre functions of complex order, the operator
//! itself, fundamental solutions, the half-plane Poisson problem,
//! Fourier–Legendre series solvers, and the Gram/Riesz diagnostics.

pub mod complexcore;
pub mod error;
pub mod bipolar;
pub mod legendre;
pub mod weinstein;
pub mod kernels;
pub mod halfplane;
pub mod spectral;
pub mod riesz;

pub use bipolar::{BipolarPoint, CartesianPoint};
pub use complexcore::{Complex64, ComplexScalar, QuadratureConfig};
pub use error::{Error, Result};
pub use spectral::{BoundaryTrace, FourierLegendreSolution, SolutionKind};
