use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use gasp_core::bipolar::{disk_geometry, to_bipolar};
use gasp_core::halfplane::{poisson_normalization, poisson_solve};
use gasp_core::kernels::{fundamental_e, fundamental_f, KernelPair};
use gasp_core::legendre::whipple_check;
use gasp_core::riesz::{frame_bounds, gram_blocks};
use gasp_core::spectral::{self, default_samples, FourierLegendreSolution};
use gasp_core::weinstein::{
    apply_lm, apply_lm_star, conjugation_residuals, reference_solution, weinstein_principle_residual, ReferenceKind,
};
use gasp_core::{BoundaryTrace, CartesianPoint, Complex64, SolutionKind};

use crate::input::{Grid, TraceSource};
use crate::{
    AnnulusArgs, CircleArgs, CircleSolveArgs, DecomposeArgs, EvaluateArgs, Failure, FieldArgs, GramArgs, KernelArgs,
    PoissonArgs, SeriesArgs, VerifyArgs,
};

type CmdResult = Result<(), Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: crate::EXIT_INPUT,
        error: anyhow!(msg.into()),
    }
}

fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_text(out: Option<&Path>, text: &str) -> CmdResult {
    let mut w = sink(out)?;
    writeln!(w, "{text}").context("write failed")?;
    w.flush().context("write failed")?;
    Ok(())
}

/// Field values that could not be formed at a point (outside the domain,
/// on a singularity) become NaN; numerical failures abort.
fn value_or_nan(r: gasp_core::Result<Complex64>) -> Result<Complex64, Failure> {
    match r {
        Ok(v) => Ok(v),
        Err(e) if e.is_numerical() => Err(e.into()),
        Err(_) => Ok(Complex64::new(f64::NAN, f64::NAN)),
    }
}

fn write_field<F>(out: Option<&Path>, points: &[CartesianPoint], alpha: f64, f: F) -> CmdResult
where
    F: Fn(&CartesianPoint) -> Result<Complex64, Failure>,
{
    let mut writer = csv::Writer::from_writer(sink(out)?);
    writer.write_record(["x", "y", "tau", "theta", "re", "im"]).context("write failed")?;
    for p in points {
        let (tau, theta) = match to_bipolar(p, alpha) {
            Ok(b) => (b.tau, b.theta),
            Err(_) => (f64::NAN, f64::NAN),
        };
        let v = f(p)?;
        let row = [p.x, p.y, tau, theta, v.re, v.im].map(|x| format!("{x:.16e}"));
        writer.write_record(&row).context("write failed")?;
    }
    writer.flush().context("write failed")?;
    Ok(())
}

pub(crate) fn kernel(a: KernelArgs) -> CmdResult {
    let points = a.grid.points();
    let (m, s) = (a.m, a.source);
    write_field(a.out.as_deref(), &points, a.alpha, |p| {
        let pair = KernelPair::new(s.x, s.y, p.x, p.y);
        if !(p.x > 0.0) {
            return Ok(Complex64::new(f64::NAN, f64::NAN));
        }
        value_or_nan(if a.reflected { fundamental_f(m, &pair) } else { fundamental_e(m, &pair) })
    })
}

pub(crate) fn poisson(a: PoissonArgs) -> CmdResult {
    if a.m.re >= 1.0 {
        return Err(input_error(format!("the half-plane problem needs Re m < 1, got m = {}", a.m)));
    }
    let data = a.data;
    write_field(a.out.as_deref(), &a.grid.points(), a.alpha, |p| {
        value_or_nan(poisson_solve(a.m, |eta| data.eval(eta), *p))
    })
}

fn circle(c: &CircleArgs) -> Result<(f64, f64), Failure> {
    match (c.center, c.radius, c.alpha, c.tau0) {
        (Some(center), Some(radius), _, _) => {
            let g = disk_geometry(center, radius)?;
            Ok((g.alpha, g.tau0))
        }
        (_, _, Some(alpha), Some(tau0)) => Ok((alpha, tau0)),
        _ => Err(input_error("give the circle as --center/--radius or as --alpha/--tau0")),
    }
}

fn sample_count(source: &TraceSource, series: &SeriesArgs) -> usize {
    source
        .sample_count()
        .or(series.samples)
        .unwrap_or_else(|| default_samples(series.nmax))
}

fn emit_solution(sol: &FourierLegendreSolution, output: &FieldArgs) -> CmdResult {
    write_text(output.out.as_deref(), &sol.to_json())?;
    if let (Some(grid), Some(field)) = (&output.grid, &output.field) {
        write_solution_field(sol, grid, Some(field))?;
    }
    Ok(())
}

fn write_solution_field(sol: &FourierLegendreSolution, grid: &Grid, out: Option<&PathBuf>) -> CmdResult {
    write_field(out.map(PathBuf::as_path), &grid.points(), sol.alpha, |p| {
        value_or_nan(sol.evaluate_cartesian(p))
    })
}

pub(crate) fn solve_circle(a: CircleSolveArgs, kind: SolutionKind) -> CmdResult {
    let (alpha, tau0) = circle(&a.circle)?;
    let source = TraceSource::parse(&a.trace)?;
    let trace = source.samples(a.m, tau0, alpha, sample_count(&source, &a.series))?;
    let sol = match kind {
        SolutionKind::Disk => spectral::solve_disk(a.m, &trace, alpha, a.series.nmax)?,
        SolutionKind::Exterior => spectral::solve_exterior(a.m, &trace, alpha, a.series.nmax)?,
        SolutionKind::Annulus => unreachable!("annulus has its own command"),
    };
    emit_solution(&sol, &a.output)
}

pub(crate) fn solve_annulus(a: AnnulusArgs) -> CmdResult {
    let (s0, s1) = match (&a.trace, &a.trace0, &a.trace1) {
        (Some(t), None, None) => (TraceSource::parse(t)?, TraceSource::parse(t)?),
        (None, Some(t0), Some(t1)) => (TraceSource::parse(t0)?, TraceSource::parse(t1)?),
        _ => return Err(input_error("give --trace, or both --trace0 and --trace1")),
    };
    let trace = |s: &TraceSource, tau: f64| -> Result<BoundaryTrace, Failure> {
        Ok(s.samples(a.m, tau, a.alpha, sample_count(s, &a.series))?)
    };
    let sol = spectral::solve_annulus(a.m, &trace(&s0, a.tau0)?, &trace(&s1, a.tau1)?, a.alpha, a.series.nmax)?;
    emit_solution(&sol, &a.output)
}

fn read_solution(path: &Path) -> Result<FourierLegendreSolution, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(FourierLegendreSolution::from_json(&text).with_context(|| format!("in {}", path.display()))?)
}

pub(crate) fn decompose(a: DecomposeArgs) -> CmdResult {
    let sol = read_solution(&a.input)?;
    let (interior, exterior) = spectral::decompose(&sol)?;
    write_text(Some(&a.interior), &interior.to_json())?;
    write_text(Some(&a.exterior), &exterior.to_json())
}

pub(crate) fn gram(a: GramArgs) -> CmdResult {
    if a.n == 0 {
        return Err(input_error("--N must be at least 1"));
    }
    let blocks = gram_blocks(a.m, a.tau0, a.tau1, a.n)?;
    let text = serde_json::to_string_pretty(&blocks).context("serialization failed")?;
    write_text(a.out.as_deref(), &text)
}

pub(crate) fn evaluate(a: EvaluateArgs) -> CmdResult {
    let sol = read_solution(&a.input)?;
    match (&a.point, &a.grid) {
        (Some(p), _) => {
            let v = sol.evaluate_cartesian(p)?;
            write_field(a.out.as_deref(), &[*p], sol.alpha, |_| Ok(v))
        }
        (None, Some(grid)) => write_solution_field(&sol, grid, a.out.as_ref()),
        (None, None) => Err(input_error("give --point or --grid")),
    }
}

struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

fn worst<I: IntoIterator<Item = gasp_core::Result<f64>>>(it: I) -> Result<f64, Failure> {
    let mut w = 0.0f64;
    for r in it {
        w = w.max(r?);
    }
    Ok(w)
}

pub(crate) fn verify(a: VerifyArgs) -> CmdResult {
    let m = a.m;
    let pairs = [(1.0, 0.5, 1.7, 1.1), (0.6, -0.4, 2.2, 0.3), (2.5, 1.0, 1.2, -0.8)];
    let mut checks = Vec::new();

    let pde = worst(pairs.iter().flat_map(|&(x, y, xi, eta)| {
        let (s, f) = (CartesianPoint::new(x, y), CartesianPoint::new(xi, eta));
        [
            apply_lm(|p| fundamental_e(m, &KernelPair::new(p.x, p.y, xi, eta)).unwrap_or_default(), m, s, 1e-4)
                .map(|r| r.norm()),
            apply_lm_star(|p| fundamental_e(m, &KernelPair::new(x, y, p.x, p.y)).unwrap_or_default(), m, f, 1e-4)
                .map(|r| r.norm()),
        ]
    }))?;
    checks.push(Check { name: "kernel PDE residual", value: pde, tol: 1e-4 });

    let field = |p: CartesianPoint| Complex64::new(p.x.exp() * p.y.cos(), p.x * p.y);
    let at = CartesianPoint::new(0.9, 0.3);
    let (r1, r2) = conjugation_residuals(field, m, at, 1e-3)?;
    checks.push(Check { name: "conjugation identities", value: r1.norm().max(r2.norm()), tol: 1e-4 });
    checks.push(Check {
        name: "Weinstein principle",
        value: weinstein_principle_residual(field, m, at, 1e-4)?,
        tol: 1e-4,
    });

    let mu = (m - 1.0) / 2.0;
    checks.push(Check {
        name: "Whipple formulas",
        value: worst((0..5).map(|n| whipple_check(n, mu, 0.8)))?,
        tol: 1e-8,
    });

    let g = disk_geometry(5.0, 3.0)?;
    let u = reference_solution(ReferenceKind::Quadratic, m);
    let trace = BoundaryTrace::from_fn(g.tau0, g.alpha, 128, |q| u.eval(q))?;
    let sol = spectral::solve_disk(m, &trace, g.alpha, 32)?;
    let disk = worst([(5.0, 0.2), (3.0, 1.0), (7.5, -0.5)].iter().map(|&(x, y)| {
        let p = CartesianPoint::new(x, y);
        sol.evaluate_cartesian(&p).map(|v| (v - u.eval(p)).norm() / u.eval(p).norm())
    }))?;
    checks.push(Check { name: "disk solver on x^2-(m+1)y^2", value: disk, tol: 1e-6 });

    if m.re < 1.0 {
        checks.push(Check {
            name: "Poisson normalization",
            value: (poisson_normalization(m)? - 1.0).norm(),
            tol: 1e-9,
        });
    }

    // A lower frame bound below the block rounding level means a degenerate mode.
    let (c2, _) = frame_bounds(m, 0.5, 1.0, 64)?;
    checks.push(Check { name: "annulus family lower frame bound (1/c2)", value: 1.0 / c2.max(f64::MIN_POSITIVE), tol: 1e10 });

    let mut out = sink(None)?;
    let mut failed = 0;
    for c in &checks {
        failed += usize::from(!c.passed());
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {}: {:.3e} (tol {:.0e})", c.name, c.value, c.tol).context("write failed")?;
    }
    out.flush().context("write failed")?;
    if failed > 0 {
        return Err(Failure {
            code: crate::EXIT_NUMERICAL,
            error: anyhow!("{failed} check(s) failed for m = {m}"),
        });
    }
    Ok(())
}
