//! `qmagic`: reproduces the game-value and magic-state tables, the qutrit
//! uncertainty landscape and Sato–Tate samples, and runs the self-checks.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmagic_core::Error;

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "qmagic",
    version,
    about = "Qudit magic states: Bell values, MUB balance, entropies, Wigner functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Prime dimension; repeat for several.
    #[arg(long = "p", global = true, value_name = "P")]
    pub p: Vec<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random restarts for stochastic searches (default depends on p).
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Grid points per axis.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Tolerance override for checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantum value, bounds and classical value of the qudit CHSH game.
    Table1,
    /// Wigner minimum, mana and total min-entropy per magic-state class.
    Table2,
    /// Qutrit total min-entropy over (x, y) phase exponents.
    Fig2,
    /// Normalized cubic exponential sums.
    SatoTate {
        /// Restrict to one value of a.
        #[arg(long)]
        a: Option<u64>,
        #[arg(long, default_value_t = qmagic_core::balance::DEFAULT_BINS)]
        bins: usize,
    },
    /// Minimize total min-entropy over equatorial states.
    EntropyMin,
    /// Run the invariant suite.
    Verify,
    /// Stabilizer vectors visited by the magic cycler.
    Orbit {
        #[arg(long, default_value_t = 0)]
        c: i64,
    },
    /// Discrete Wigner function of a magic state.
    Wigner {
        #[arg(long, default_value_t = 1)]
        a: i64,
        #[arg(long, default_value_t = 0)]
        b: i64,
        #[arg(long, default_value_t = 0)]
        c: i64,
    },
}

/// Failure mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = format!("{}: {e}", e.code());
        match e {
            Error::TheoremViolation { .. } => CliError::Verification(msg),
            Error::NotPrime(_)
            | Error::UnsupportedDimension { .. }
            | Error::InvalidMagicParams(_)
            | Error::BudgetExceeded { .. }
            | Error::InvalidArgument(_)
            | Error::InversionOfZero(_)
            | Error::ModulusMismatch(..) => CliError::Usage(msg),
            Error::NotHermitian(_)
            | Error::DimensionMismatch { .. }
            | Error::NoConvergence(_)
            | Error::NotNormalized(_) => CliError::Numeric(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Table1 => commands::table1(&cli.config),
        Command::Table2 => commands::table2(&cli.config),
        Command::Fig2 => commands::fig2(&cli.config),
        Command::SatoTate { a, bins } => commands::sato_tate(&cli.config, a, bins),
        Command::EntropyMin => commands::entropy_min(&cli.config),
        Command::Verify => commands::verify(&cli.config),
        Command::Orbit { c } => commands::orbit(&cli.config, c),
        Command::Wigner { a, b, c } => commands::wigner(&cli.config, a, b, c),
    };
    match result.and_then(|text| commands::emit(&cli.config, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
