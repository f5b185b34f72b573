//! `hyperstokes`: evaluate hyperterminants, hyperasymptotic remainders of Γ*
//! and the level-2 Stokes multiplier curves from the command line.

mod commands;
mod config;
mod output;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{DumpArgs, EvalArgs, SmoothArgs, SmoothingArgs, TerminantArgs};
use crate::config::{ConfigError, Format, RunConfig};
use crate::verify::VerifyArgs;

#[derive(Parser, Debug)]
#[command(name = "hyperstokes", version, about = "Hyperterminants, hyperasymptotics of the scaled gamma function and smooth higher-order Stokes transitions")]
struct Cli {
    /// Working precision in significant digits, at least 30 [default: HYPERSTOKES_DIGITS, else 50; smooth and eval raise it to the scheduled value]
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Relative quadrature tolerance, in (0, 1e-4] [default: 1e-10]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format; csv for smooth and coeffs dump, json elsewhere
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file supplying flag values: top-level keys for global flags, an optional `command`, and a table per subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated expansion of Γ*(z) or 1/Γ*(z) at level 0, 1 or 2, with its remainder and the oracle value
    Eval(EvalArgs),
    /// Level-2 Stokes multiplier curve over a θ grid, as CSV
    Smooth(SmoothArgs),
    /// Hyperterminant F^(m)(z) for given orders and singulants
    Terminant(TerminantArgs),
    /// Term-by-term erfc-polynomial approximation of equal-singulant F^(m)
    Smoothing(SmoothingArgs),
    /// Run an invariant suite; exit status 1 if any check fails
    Verify(VerifyArgs),
    /// Exact coefficient tables
    Coeffs {
        #[command(subcommand)]
        action: CoeffsAction,
    },
}

#[derive(Subcommand, Debug)]
enum CoeffsAction {
    /// γ_n and a_n as numerator/denominator pairs
    Dump(DumpArgs),
}

#[derive(Debug)]
pub enum Failure {
    /// Invalid input; exit status 2.
    Config(String),
    /// Computation or I/O failure; exit status 1.
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Config(e)
    }
}

impl From<hyperstokes::Error> for Failure {
    fn from(e: hyperstokes::Error) -> Self {
        use hyperstokes::Error as E;
        match e {
            E::Domain(_) | E::Config(_) | E::Pole(_) => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let cfg = RunConfig::new(cli.digits, cli.tol, cli.format, cli.out)?;
    match &cli.command {
        Command::Eval(a) => commands::eval(&cfg, a),
        Command::Smooth(a) => commands::smooth(&cfg, a),
        Command::Terminant(a) => commands::terminant(&cfg, a),
        Command::Smoothing(a) => commands::smoothing(&cfg, a),
        Command::Verify(a) => verify::verify(&cfg, a),
        Command::Coeffs { action: CoeffsAction::Dump(a) } => commands::coeffs_dump(&cfg, a),
    }
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
