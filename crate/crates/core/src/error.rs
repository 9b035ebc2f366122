use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("quadrature did not converge: best estimate {estimate}, achieved error {error:e}")]
    NoConvergence { estimate: Complex64, error: f64 },

    #[error("finite-difference step h = {h} is not smaller than x = {x}")]
    Step { h: f64, x: f64 },

    /// Source and field point (nearly) coincide. `leading` carries the
    /// logarithmic leading term `ln(d) / 2π` as advisory data.
    #[error("kernel singular at separation {distance:e}; leading term {leading}")]
    Singular { distance: f64, leading: Complex64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("resolution error: {samples} samples cannot resolve n_max = {n_max} (need a power of two >= {required})")]
    Resolution {
        samples: usize,
        n_max: usize,
        required: usize,
    },

    #[error("mode {n} is numerically singular: |det| = {det:e}")]
    SingularMode { n: i64, det: f64 },

    #[error("series tail estimate {tail:e} exceeds tolerance {tol:e}")]
    SeriesTail { tail: f64, tol: f64 },
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::SingularMode { .. } | Error::SeriesTail { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
