//! psicorr: experiments with character sums of elliptic division
//! polynomials. Subcommands: find, corr, spectrum, verify, sweep.

mod context;
mod output;
mod sweep;
mod verify;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit codes: 0 success, 1 verification failure, 2 no-result or range
/// error, 3 config error.
#[derive(Debug)]
pub enum CliError {
    Verify,
    NoResult(String),
    Config(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify => 1,
            CliError::NoResult(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "psicorr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ContextArgs {
    /// Prime modulus p > 3
    #[arg(long)]
    pub p: u64,
    /// Curve coefficient a
    #[arg(long)]
    pub a: u64,
    /// Curve coefficient b
    #[arg(long)]
    pub b: u64,
    /// x-coordinate of an explicit base point
    #[arg(long, requires = "py")]
    pub px: Option<u64>,
    /// y-coordinate of an explicit base point
    #[arg(long, requires = "px")]
    pub py: Option<u64>,
    /// Pick the first enumerated point with at least this order
    #[arg(long, default_value_t = 3, conflicts_with = "px")]
    pub min_order: u64,
    /// Character order d (must divide p - 1)
    #[arg(long = "char-order", default_value_t = 2)]
    pub char_order: u64,
    /// Twist exponent t coprime to d: evaluates chi^t
    #[arg(long, default_value_t = 1)]
    pub twist: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List the curve's group order and a base point matching the filters
    Find {
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Shifted correlations S(N, h) for h = 1..H plus U/V aggregates
    Corr {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Shift range H (default R)
        #[arg(long = "H")]
        h: Option<u64>,
        /// Sum length N (default R)
        #[arg(long = "N")]
        n: Option<u64>,
        /// Correlation dimension m >= 2
        #[arg(long, default_value_t = 2)]
        m: u64,
        /// Threshold for the exceptional-shift count
        #[arg(long)]
        delta: Option<f64>,
        /// Monte-Carlo sample size for tuple averages above the budget
        #[arg(long)]
        sample: Option<u64>,
        /// RNG seed for sampling (ChaCha12)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the FFT cross-correlation path (requires N = R)
        #[arg(long, conflicts_with = "direct")]
        fft: bool,
        /// Force the direct per-shift path (default)
        #[arg(long)]
        direct: bool,
        /// Conjugate the shifted factor (the chi * conj(chi) reading)
        #[arg(long)]
        conj: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a JSON mirror next to the CSV
        #[arg(long)]
        json: bool,
    },
    /// Twisted spectrum |S^(a)| for a = 1..R with Parseval line
    Spectrum {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Constant in the spectrum budget column
        #[arg(long, default_value_t = 1.0)]
        c3: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suites on bundled contexts
    Verify {
        /// Suite name or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Self-test hook: flip one sequence value and expect failures
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep over a key=value config file, resumable
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (default sweep.csv)
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Find { ctx } => context::cmd_find(&ctx),
        Command::Corr {
            ctx,
            h,
            n,
            m,
            delta,
            sample,
            seed,
            fft,
            direct: _,
            conj,
            out,
            json,
        } => output::cmd_corr(&ctx, h, n, m, delta, sample, seed, fft, conj, out, json),
        Command::Spectrum { ctx, c3, out, json } => output::cmd_spectrum(&ctx, c3, out, json),
        Command::Verify {
            suite,
            seed,
            inject_fault,
            out,
        } => verify::cmd_verify(&suite, seed, inject_fault, out),
        Command::Sweep { config, out, json } => sweep::cmd_sweep(&config, &out, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Verify => eprintln!("verification failed"),
                CliError::NoResult(msg) => eprintln!("error: {msg}"),
                CliError::Config(msg) => eprintln!("config error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
