//! Parsers for command-line values and trace files.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gasp_core::weinstein::{reference_solution, ReferenceKind};
use gasp_core::{CartesianPoint, Complex64};

/// `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("invalid number `{t}` in `{s}`"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{s}`")),
    }
}

pub fn parse_point(s: &str) -> Result<CartesianPoint, String> {
    let z = parse_complex(s)?;
    if !s.contains(',') {
        return Err(format!("expected `x,y`, got `{s}`"));
    }
    Ok(CartesianPoint::new(z.re, z.im))
}

/// `start:stop:step`, stop included up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}` in range `{s}`")))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected `start:stop:step`, got `{s}`"));
    };
    if !(step > 0.0) || stop < start {
        return Err(format!("range `{s}` needs step > 0 and stop >= start"));
    }
    if (stop - start) / step > 1e7 {
        return Err(format!("range `{s}` has too many points"));
    }
    Ok(Range { start, stop, step })
}

/// Two ranges, x then y.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x: Range,
    pub y: Range,
}

impl Grid {
    /// Points in row-major order: y selects the row, x runs along it.
    pub fn points(&self) -> Vec<CartesianPoint> {
        let xs = self.x.values();
        self.y
            .values()
            .into_iter()
            .flat_map(|y| xs.iter().map(move |&x| CartesianPoint::new(x, y)))
            .collect()
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x-range,y-range`, got `{s}`"))?;
    Ok(Grid {
        x: parse_range(x)?,
        y: parse_range(y)?,
    })
}

/// Boundary data for the half-plane problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LineData {
    /// exp(−η²)
    Gaussian,
    /// 1/(1 + η²)
    Lorentzian,
    /// 1
    Constant,
}

impl LineData {
    pub fn eval(self, eta: f64) -> Complex64 {
        let v = match self {
            LineData::Gaussian => (-eta * eta).exp(),
            LineData::Lorentzian => 1.0 / (1.0 + eta * eta),
            LineData::Constant => 1.0,
        };
        Complex64::new(v, 0.0)
    }
}

/// Where the samples of a circle trace come from.
#[derive(Debug, Clone)]
pub enum TraceSource {
    Reference(ReferenceKind),
    File(Vec<Complex64>),
}

impl TraceSource {
    pub fn parse(arg: &str) -> Result<Self> {
        if let Ok(kind) = arg.parse::<ReferenceKind>() {
            return Ok(TraceSource::Reference(kind));
        }
        let path = Path::new(arg);
        if !path.exists() {
            bail!("`{arg}` is neither a reference solution (constant, linear_y, quadratic, power) nor a file");
        }
        Ok(TraceSource::File(read_trace_csv(path)?))
    }

    pub fn samples(&self, m: Complex64, tau: f64, alpha: f64, count: usize) -> Result<gasp_core::BoundaryTrace> {
        match self {
            TraceSource::Reference(kind) => {
                let u = reference_solution(*kind, m);
                Ok(gasp_core::BoundaryTrace::from_fn(tau, alpha, count, |q| u.eval(q))?)
            }
            TraceSource::File(values) => Ok(gasp_core::BoundaryTrace::new(tau, values.clone())?),
        }
    }

    pub fn sample_count(&self) -> Option<usize> {
        match self {
            TraceSource::Reference(_) => None,
            TraceSource::File(v) => Some(v.len()),
        }
    }
}

/// Rows of (θ, re, im) at θ_j = 2πj/J, with an optional header.
pub fn read_trace_csv(path: &Path) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("cannot read trace file {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed row {}", path.display(), i + 1))?;
        let fields: Vec<&str> = record.iter().collect();
        if i == 0 && fields.first().is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let nums: Vec<f64> = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("{}: non-numeric value in row {}", path.display(), i + 1))?;
        let [theta, re, im] = nums[..] else {
            bail!("{}: row {} needs 3 columns (theta, re, im)", path.display(), i + 1);
        };
        rows.push((theta, Complex64::new(re, im)));
    }
    if rows.is_empty() {
        bail!("{}: no samples", path.display());
    }
    let count = rows.len();
    for (j, (theta, _)) in rows.iter().enumerate() {
        let want = 2.0 * PI * j as f64 / count as f64;
        if (theta - want).abs() > 1e-9 {
            bail!(
                "{}: sample {j} is at theta = {theta}, expected uniform angles 2πj/J ({want})",
                path.display()
            );
        }
    }
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("2,0").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("-1.5, 0.25").unwrap(), Complex64::new(-1.5, 0.25));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("0.1:3:0.1,-2:2:0.1").unwrap();
        assert_eq!(g.x.values().len(), 30);
        assert_eq!(g.y.values().len(), 41);
        let pts = g.points();
        assert_eq!(pts.len(), 30 * 41);
        assert_eq!((pts[1].x, pts[1].y), (0.2, -2.0));
        assert!(parse_grid("0:1:0,0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }
}
