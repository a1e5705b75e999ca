//! Flag definitions and the glue from parsed flags to rendered output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::config::{Format, Knobs, ListSpec, RootsSpec};
use crate::error::{CliError, CliResult};
use crate::report::{envelope, to_json_text};

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Dunkl operators, kappa-harmonics and the fundamentality test")]
pub struct Cli {
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// json, csv or text.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct SystemFlags {
    /// z2, dihedral or custom.
    #[arg(long)]
    pub family: Option<String>,
    /// Dimension of Z2^d (or of a custom system).
    #[arg(long)]
    pub d: Option<usize>,
    /// Order parameter of I2(m).
    #[arg(long)]
    pub m: Option<usize>,
    /// Multiplicities, e.g. 1/2,1/2.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Custom roots, e.g. "1,0;-1,0;0,1;0,-1".
    #[arg(long, allow_hyphen_values = true)]
    pub roots: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the root-system axioms and kappa invariance.
    ValidateRoots {
        #[command(flatten)]
        system: SystemFlags,
    },
    /// Apply Dunkl operators to a polynomial.
    DunklApply {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Only D_axis (1-based).
        #[arg(long)]
        axis: Option<usize>,
        /// The Dunkl Laplacian instead.
        #[arg(long)]
        laplacian: bool,
    },
    /// Matrices of the intertwining operator per degree.
    Intertwine {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        nmax: Option<usize>,
        /// Also apply V to this polynomial.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Weighted cubature on the sphere.
    Rule {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        degree: Option<usize>,
        /// Write nodes and weights as CSV to this path.
        #[arg(long)]
        export: Option<String>,
    },
    /// Basis of kappa-harmonics of one degree.
    Harmonics {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        degree: usize,
    },
    /// Reproducing-kernel identity residuals per degree.
    KernelCheck {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Gegenbauer coefficients b_n of g.
    Expand {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        quad_order: Option<usize>,
        /// auto or quadrature.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Uniform error of a Cesaro mean.
    Cesaro {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        g: Option<String>,
        /// Order N of the mean.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Decide b_n != 0 for n <= nmax. Exit 0 fundamental, 2 not.
    CheckFundamental {
        #[command(flatten)]
        system: SystemFlags,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        zero_threshold: Option<f64>,
        #[arg(long)]
        quad_order: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Run the acceptance checks.
    VerifyAll {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn system_knobs(s: &SystemFlags) -> Knobs {
    Knobs {
        family: s.family.clone(),
        d: s.d,
        m: s.m,
        kappa: s.kappa.clone().map(ListSpec::Text),
        roots: s.roots.clone().map(RootsSpec::Text),
        ..Knobs::default()
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ValidateRoots { .. } => "validate-roots",
            Command::DunklApply { .. } => "dunkl-apply",
            Command::Intertwine { .. } => "intertwine",
            Command::Rule { .. } => "rule",
            Command::Harmonics { .. } => "harmonics",
            Command::KernelCheck { .. } => "kernel-check",
            Command::Expand { .. } => "expand",
            Command::Cesaro { .. } => "cesaro",
            Command::CheckFundamental { .. } => "check-fundamental",
            Command::VerifyAll { .. } => "verify-all",
        }
    }

    pub fn knobs(&self) -> Knobs {
        match self {
            Command::ValidateRoots { system } => system_knobs(system),
            Command::DunklApply { system, poly, axis, laplacian } => Knobs {
                poly: Some(poly.clone()),
                axis: *axis,
                laplacian: laplacian.then_some(true),
                ..system_knobs(system)
            },
            Command::Intertwine { system, nmax, poly } => Knobs { nmax: *nmax, poly: poly.clone(), ..system_knobs(system) },
            Command::Rule { system, degree, export } => Knobs { degree: *degree, export: export.clone(), ..system_knobs(system) },
            Command::Harmonics { system, degree } => Knobs { degree: Some(*degree), ..system_knobs(system) },
            Command::KernelCheck { system, nmax, samples, seed, tol } => {
                Knobs { nmax: *nmax, samples: *samples, seed: *seed, tol: *tol, ..system_knobs(system) }
            }
            Command::Expand { system, lambda, g, nmax, quad_order, mode } => Knobs {
                lambda: lambda.clone(),
                g: g.clone(),
                nmax: *nmax,
                quad_order: *quad_order,
                mode: mode.clone(),
                ..system_knobs(system)
            },
            Command::Cesaro { system, lambda, g, nmax, delta, grid, quad_order } => Knobs {
                lambda: lambda.clone(),
                g: g.clone(),
                nmax: *nmax,
                delta: delta.clone(),
                grid: *grid,
                quad_order: *quad_order,
                ..system_knobs(system)
            },
            Command::CheckFundamental { system, lambda, g, nmax, zero_threshold, quad_order, mode } => Knobs {
                lambda: lambda.clone(),
                g: g.clone(),
                nmax: *nmax,
                zero_threshold: *zero_threshold,
                quad_order: *quad_order,
                mode: mode.clone(),
                ..system_knobs(system)
            },
            Command::VerifyAll { seed } => Knobs { seed: *seed, ..Knobs::default() },
        }
    }
}

/// Rendered output and the process exit code.
pub fn render(command: &str, knobs: &Knobs, outcome: Outcome) -> CliResult<(String, i32)> {
    let body = match knobs.format()? {
        Format::Json => to_json_text(&envelope(command, knobs, outcome.result)),
        Format::Text => match outcome.text {
            Some(t) => t,
            None => to_json_text(&envelope(command, knobs, outcome.result)),
        },
        Format::Csv => outcome.csv.ok_or_else(|| CliError::Config(format!("{command} has no CSV output")))?,
    };
    Ok((body, outcome.exit))
}

pub fn execute(cli: &Cli) -> CliResult<(String, i32)> {
    let mut flags = cli.command.knobs();
    flags.format = cli.format.clone();
    let knobs = match &cli.config {
        Some(path) => flags.over(Knobs::load(path)?),
        None => flags,
    };
    let name = cli.command.name();
    let outcome = commands::run(name, &knobs)?;
    render(name, &knobs, outcome)
}
