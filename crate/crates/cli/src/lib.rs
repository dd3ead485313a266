//! Command-line front end for the `sasaki` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use thiserror::Error;

pub mod commands;
pub mod config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sasaki::Error),
    #[error("{0}")]
    Io(String),
    /// Some numerical check missed its tolerance.
    #[error("{0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_PRECONDITION,
            CliError::Core(sasaki::Error::Io { .. }) | CliError::Io(_) => EXIT_IO,
            CliError::Core(_) => EXIT_PRECONDITION,
            CliError::Tolerance(_) => EXIT_TOLERANCE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// A number typed on the command line, kept exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact {
    pub exact: BigRational,
    pub value: f64,
}

impl Exact {
    pub fn parse(text: &str) -> Result<Self, String> {
        let exact = sasaki::periodicity::parse_rational(text).map_err(|e| e.to_string())?;
        let value = sasaki::periodicity::to_f64(&exact);
        if !value.is_finite() {
            return Err(format!("`{text}` does not fit in a double"));
        }
        Ok(Self { exact, value })
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&sasaki::periodicity::format_rational(&self.exact))
    }
}

fn exact(text: &str) -> Result<Exact, String> {
    Exact::parse(text)
}

/// Structure and field strength, shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Deformation parameter, c = 4/alpha - 3.
    #[arg(long, default_value = "1", value_parser = exact)]
    pub alpha: Exact,
    /// Magnetic field strength.
    #[arg(long, default_value = "1", value_parser = exact, allow_hyphen_values = true)]
    pub q: Exact,
}

impl ParamArgs {
    pub fn params(&self) -> Result<sasaki::Params, CliError> {
        Ok(sasaki::Params::from_alpha(self.alpha.value, self.q.value)?)
    }
}

/// Rationality resolution.
#[derive(Debug, Clone, Args)]
pub struct RationalArgs {
    #[arg(long, default_value_t = sasaki::periodicity::DEFAULT_MAX_DENOMINATOR)]
    pub max_denominator: u64,
    #[arg(long, default_value_t = sasaki::periodicity::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    /// Exact solution through the identity.
    Closed,
    /// Lie-group integrator.
    Integrator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Ikawa,
    Helix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Obj,
    Svg,
}

impl From<Format> for sasaki::viz::CurveFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => Self::Csv,
            Format::Obj => Self::Obj,
            Format::Svg => Self::Svg,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "sasaki",
    version,
    about = "Magnetic trajectories on Berger spheres"
)]
pub struct RunConfig {
    /// Flat key=value file of defaults; flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the invariant suite and print the curvature tables.
    #[command(args_override_self = true)]
    Verify {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Integrate a trajectory from the identity and write it as CSV.
    #[command(args_override_self = true)]
    Integrate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = exact, allow_hyphen_values = true)]
        cos_theta: Exact,
        #[arg(long, default_value_t = 1e-3)]
        ds: f64,
        #[arg(long)]
        s_max: f64,
        #[arg(long, value_enum, default_value = "integrator")]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample an explicit curve on the round sphere.
    #[command(args_override_self = true)]
    Curve {
        #[arg(value_enum)]
        kind: CurveKind,
        /// Contact angle of the Ikawa curve.
        #[arg(long, value_parser = exact, allow_hyphen_values = true)]
        cos_theta: Option<Exact>,
        /// Helix angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<f64>,
        /// Rational frequency ratio b/a of the helix.
        #[arg(long, value_parser = exact)]
        p: Option<Exact>,
        /// Defaults to one period when the curve is known to close.
        #[arg(long)]
        s_max: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        ds: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stereographically project a trajectory CSV.
    #[command(args_override_self = true)]
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mesh the Hopf torus over a circle of radius R about the north pole.
    #[command(args_override_self = true)]
    Tube {
        #[command(flatten)]
        params: ParamArgs,
        /// Circle radius as a fraction of r = sqrt(alpha)/2.
        #[arg(long, default_value_t = 0.5)]
        radius_ratio: f64,
        #[arg(long, default_value_t = 64)]
        nt: usize,
        #[arg(long, default_value_t = 256)]
        nu: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the measured lift holonomy with A/(2r^2).
    #[command(args_override_self = true)]
    Holonomy {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0.5)]
        radius_ratio: f64,
        /// Largest accepted gap between measurement and prediction.
        #[arg(long, default_value_t = 1e-4)]
        check: f64,
    },
    /// Closure criterion of a trajectory, with its period when it closes.
    #[command(args_override_self = true)]
    Period {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = exact, allow_hyphen_values = true)]
        cos_theta: Exact,
        #[command(flatten)]
        rational: RationalArgs,
        /// Also search for the first return numerically.
        #[arg(long)]
        measure: bool,
        #[arg(long, value_enum, default_value = "closed")]
        source: Source,
        #[arg(long, default_value_t = 1e-3)]
        ds: f64,
        /// Search horizon; defaults to slightly past the predicted period.
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 1e-5)]
        return_tol: f64,
    },
    /// Slope quantization on a Hopf torus.
    #[command(args_override_self = true)]
    Quantize {
        #[command(flatten)]
        params: ParamArgs,
        /// Circle radius as a fraction of r.
        #[arg(long)]
        radius_ratio: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        /// Builds sigma from the lattice direction (m, n) instead.
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "n",
            conflicts_with = "sigma"
        )]
        m: Option<i64>,
        #[arg(long, requires = "m")]
        n: Option<u64>,
        #[command(flatten)]
        rational: RationalArgs,
    },
    /// Closure ratios over a grid of contact angles, as CSV.
    #[command(args_override_self = true)]
    Scan {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[command(flatten)]
        rational: RationalArgs,
        /// Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind the Ikawa curve and tube figures.
    #[command(args_override_self = true)]
    Figure {
        #[arg(long)]
        out_dir: PathBuf,
        /// Samples per curve.
        #[arg(long, default_value_t = 12_000)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        nt: usize,
        #[arg(long, default_value_t = 256)]
        nu: usize,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Data goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let raw: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let merged = match config::merge_args(raw) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let cfg = match RunConfig::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_PRECONDITION
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match commands::dispatch(&cfg, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
