//! `qcalc`: batch front end for the q-deformed calculus library.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcalc_core::{DivergencePolicy, QError};

use output::Format;

/// Numerical symmetric q-deformed calculus.
#[derive(Debug, Parser)]
#[command(name = "qcalc", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Deformation parameter, 0 < q < 1.
    #[arg(long, allow_negative_numbers = true, global = true)]
    pub q: Option<f64>,

    /// Absolute truncation tolerance for lattice sums and series.
    #[arg(
        long,
        allow_negative_numbers = true,
        global = true,
        default_value_t = 1e-12
    )]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_terms: usize,

    /// Bound on |f| over the lattice; larger samples trip the guard.
    #[arg(
        long,
        allow_negative_numbers = true,
        global = true,
        default_value_t = 1e6
    )]
    pub magnitude_bound: f64,

    #[arg(long, global = true, value_enum, default_value_t = OnDivergence::Error)]
    pub on_divergence: OnDivergence,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnDivergence {
    /// Fail with exit code 3.
    Error,
    /// Return the partial sum and report a flag.
    Partial,
}

impl From<OnDivergence> for DivergencePolicy {
    fn from(p: OnDivergence) -> Self {
        match p {
            OnDivergence::Error => DivergencePolicy::Error,
            OnDivergence::Partial => DivergencePolicy::ReturnPartialWithFlag,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-brackets, q-factorials and their distance from the classical integers.
    Qnum(commands::QnumArgs),
    /// Jackson derivative at points.
    Deriv(commands::DerivArgs),
    /// Jackson integrals (finite, interval, improper, real-line).
    Integrate(commands::IntegrateArgs),
    /// Lattice points, weights and weighted samples.
    Lattice(commands::LatticeArgs),
    /// Truncated q-oscillator matrices, relation residuals and spectra.
    Fock(commands::FockArgs),
    /// q-exponential, q-sine, q-cosine tables with q-ODE residuals.
    Special(commands::SpecialArgs),
    /// Lattice recovery of integral-equation solutions and the uniqueness demo.
    Solve(commands::SolveArgs),
    /// Pointwise-dominant integrand with the smaller interval integral.
    Counterexample(commands::CounterexampleArgs),
    /// Deviation from the classical limit as q approaches 1.
    LimitStudy(commands::LimitStudyArgs),
}

pub(crate) enum Failure {
    Usage(clap::Error),
    Math(QError),
    Io(io::Error),
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        Failure::Math(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let report = commands::dispatch(&cli.common, &cli.command)?;
    match &cli.common.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(cli.common.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(cli.common.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(2)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_divergence() { 3 } else { 1 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
