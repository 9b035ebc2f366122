//! Command-line front end for `gasp-core`.
//!
//! `run` parses arguments, merges an optional flat JSON config file (flags
//! given on the command line win) and maps failures to exit codes: 1 for
//! bad input, 2 for numerical failures.

mod commands;
mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use gasp_core::{CartesianPoint, Complex64};

pub use input::{parse_complex, parse_grid, parse_point, Grid, LineData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gasp", version, about = "Generalized axisymmetric potentials: kernels, solvers and diagnostics")]
struct Cli {
    /// Flat JSON object of flag values; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate E_m (or the reflected kernel F_m) on a grid of field points.
    #[command(args_override_self = true)]
    Kernel(KernelArgs),
    /// Solve the half-plane Dirichlet problem (Re m < 1) on a grid.
    #[command(args_override_self = true)]
    Poisson(PoissonArgs),
    /// Dirichlet problem inside a disk.
    #[command(name = "solve-disk", args_override_self = true)]
    SolveDisk(CircleSolveArgs),
    /// Dirichlet problem outside a disk.
    #[command(name = "solve-exterior", args_override_self = true)]
    SolveExterior(CircleSolveArgs),
    /// Dirichlet problem on the region between two nested level circles.
    #[command(name = "solve-annulus", args_override_self = true)]
    SolveAnnulus(AnnulusArgs),
    /// Split an annulus solution into its interior and exterior parts.
    #[command(args_override_self = true)]
    Decompose(DecomposeArgs),
    /// Gram block diagnostics for the annulus family.
    #[command(args_override_self = true)]
    Gram(GramArgs),
    /// Evaluate a stored solution at a point or on a grid.
    #[command(args_override_self = true)]
    Evaluate(EvaluateArgs),
    /// Run the invariant checks for one value of m.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Weinstein parameter as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
    /// Source point (x, y) as `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    source: CartesianPoint,
    /// Field grid `x0:x1:dx,y0:y1:dy`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Grid,
    /// Evaluate the reflected kernel F_m instead of E_m.
    #[arg(long)]
    reflected: bool,
    /// Bipolar scale used for the tau/theta columns.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Output CSV file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PoissonArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
    /// Boundary data on x = 0.
    #[arg(long, value_enum)]
    data: LineData,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Grid,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Circle given either by center/radius or by bipolar (alpha, tau0).
#[derive(Debug, Args)]
struct CircleArgs {
    /// Disk center on the x-axis.
    #[arg(long, requires = "radius", conflicts_with_all = ["alpha", "tau0"])]
    center: Option<f64>,
    #[arg(long, requires = "center")]
    radius: Option<f64>,
    #[arg(long, requires = "tau0")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    tau0: Option<f64>,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Highest Fourier mode kept.
    #[arg(long, default_value_t = gasp_core::spectral::DEFAULT_N_MAX)]
    nmax: usize,
    /// Samples taken from named reference traces (default: 4·nmax rounded up to a power of two).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Solution JSON file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also evaluate the solution on this grid.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, requires = "field")]
    grid: Option<Grid>,
    /// CSV file for the grid evaluation.
    #[arg(long, requires = "grid")]
    field: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CircleSolveArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
    #[command(flatten)]
    circle: CircleArgs,
    /// Reference solution name (constant, linear_y, quadratic, power) or CSV of (theta, re, im).
    #[arg(long)]
    trace: String,
    #[command(flatten)]
    series: SeriesArgs,
    #[command(flatten)]
    output: FieldArgs,
}

#[derive(Debug, Args)]
struct AnnulusArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
    #[arg(long)]
    alpha: f64,
    /// Outer circle (smaller tau).
    #[arg(long)]
    tau0: f64,
    /// Inner circle (larger tau).
    #[arg(long)]
    tau1: f64,
    /// Data for both circles: a reference solution name.
    #[arg(long, conflicts_with_all = ["trace0", "trace1"])]
    trace: Option<String>,
    /// Data on the tau0 circle (name or CSV).
    #[arg(long, requires = "trace1")]
    trace0: Option<String>,
    /// Data on the tau1 circle (name or CSV).
    #[arg(long, requires = "trace0")]
    trace1: Option<String>,
    #[command(flatten)]
    series: SeriesArgs,
    #[command(flatten)]
    output: FieldArgs,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// Annulus solution JSON.
    #[arg(long)]
    input: PathBuf,
    /// Output for the part regular inside the hole.
    #[arg(long)]
    interior: PathBuf,
    /// Output for the part vanishing on the half-plane boundary.
    #[arg(long)]
    exterior: PathBuf,
}

#[derive(Debug, Args)]
struct GramArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
    #[arg(long)]
    tau0: f64,
    #[arg(long)]
    tau1: f64,
    /// Highest |n|.
    #[arg(long = "N", default_value_t = 64)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Solution JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    point: Option<CartesianPoint>,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    m: Complex64,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let numerical = error
            .chain()
            .any(|e| e.downcast_ref::<gasp_core::Error>().is_some_and(|e| e.is_numerical()));
        let code = if numerical { EXIT_NUMERICAL } else { EXIT_INPUT };
        Failure { code, error }
    }
}

impl From<gasp_core::Error> for Failure {
    fn from(error: gasp_core::Error) -> Self {
        anyhow::Error::from(error).into()
    }
}

/// Turns `--config FILE` into flags inserted right after the subcommand, so
/// later (explicit) flags override them.
fn expand_config(argv: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let pos = argv.iter().position(|a| a == "--config");
    let inline = argv.iter().position(|a| a.to_string_lossy().starts_with("--config="));
    let (path, remove) = match (pos, inline) {
        (Some(i), _) => {
            let Some(p) = argv.get(i + 1) else { return Ok(argv) };
            (PathBuf::from(p), vec![i, i + 1])
        }
        (None, Some(i)) => {
            let text = argv[i].to_string_lossy().into_owned();
            (PathBuf::from(&text["--config=".len()..]), vec![i])
        }
        (None, None) => return Ok(argv),
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("config {} is not valid JSON", path.display()))?;
    let Some(object) = value.as_object() else {
        bail!("config {} must be a JSON object", path.display());
    };
    let mut extra = Vec::new();
    for (key, v) in object {
        let flag = OsString::from(format!("--{key}"));
        match v {
            serde_json::Value::Bool(true) => extra.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => extra.extend([flag, s.into()]),
            serde_json::Value::Number(n) => extra.extend([flag, n.to_string().into()]),
            serde_json::Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        _ => Err(anyhow::anyhow!("config key `{key}` has a non-scalar array entry")),
                    })
                    .collect::<anyhow::Result<_>>()?;
                extra.extend([flag, joined.join(",").into()]);
            }
            serde_json::Value::Object(_) => bail!("config key `{key}` must not be an object (the config is flat)"),
        }
    }
    let mut rest: Vec<OsString> = argv
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !remove.contains(i))
        .map(|(_, a)| a)
        .collect();
    // Insert after the subcommand name: the first non-flag token after argv[0].
    let sub = rest
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| !a.to_string_lossy().starts_with('-'))
        .map(|(i, _)| i + 1)
        .unwrap_or(rest.len());
    let tail = rest.split_off(sub);
    rest.extend(extra);
    rest.extend(tail);
    Ok(rest)
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_INPUT;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Kernel(a) => commands::kernel(a),
        Command::Poisson(a) => commands::poisson(a),
        Command::SolveDisk(a) => commands::solve_circle(a, gasp_core::SolutionKind::Disk),
        Command::SolveExterior(a) => commands::solve_circle(a, gasp_core::SolutionKind::Exterior),
        Command::SolveAnnulus(a) => commands::solve_annulus(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Gram(a) => commands::gram(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Verify(a) => commands::verify(a),
    }
}
