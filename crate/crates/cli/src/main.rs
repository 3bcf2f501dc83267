//! `divrec`: density experiments and identity checks from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument error,
//! 3 range or resource error.

mod commands;
mod reproduce;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divrec::analysis::{parse_count, ScheduleSpec};
use divrec::ScanConfig;

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_ARGUMENT: u8 = 2;
pub const EXIT_RANGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "divrec",
    version,
    about = "Division-based recursions and natural densities"
)]
struct Cli {
    /// Worker threads for sieve-backed counters [default: available cores]
    #[arg(long, global = true, env = "DIVREC_THREADS")]
    threads: Option<usize>,

    /// Integers per sieve segment
    #[arg(long, global = true, env = "DIVREC_SEGMENT_SIZE", value_parser = count_arg)]
    segment_size: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density of integers oddly divisible by m
    Oddly(commands::OddlyArgs),
    /// Density of square-free multiples of t and the given primes
    Squarefree(commands::SquarefreeArgs),
    /// Sums of phi(n)/n over multiples of m
    Phisum(commands::PhisumArgs),
    /// Exhaustive identity checks
    Verify(commands::VerifyArgs),
    /// Recompute the published numerical evidence for the phi sums
    ReproducePaper(reproduce::ReproduceArgs),
}

/// Where to evaluate: one `N` or a geometric schedule.
#[derive(Args, Debug, Clone)]
pub struct Target {
    /// A single checkpoint N (scientific notation accepted, e.g. 1e6)
    #[arg(long = "n", value_parser = count_arg, conflicts_with = "schedule")]
    pub n: Option<u64>,

    /// Geometric checkpoints as start:stop:ratio [default: 1e3:1e7:10]
    #[arg(long, value_parser = schedule_arg)]
    pub schedule: Option<ScheduleSpec>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Include the exact empirical ratio in JSON output where known
    #[arg(long)]
    pub exact_json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn count_arg(s: &str) -> Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn schedule_arg(s: &str) -> Result<ScheduleSpec, String> {
    s.parse().map_err(|e: divrec::Error| e.to_string())
}

/// A failure with its exit code and message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<divrec::Error> for Failure {
    fn from(e: divrec::Error) -> Self {
        Failure {
            code: if e.is_range() {
                EXIT_RANGE
            } else {
                EXIT_ARGUMENT
            },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_RANGE,
            message: format!("output: {e}"),
        }
    }
}

pub type Outcome = Result<u8, Failure>;

fn scan_config(cli: &Cli) -> Result<ScanConfig, Failure> {
    let mut config = ScanConfig::default();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(divrec::Error::InvalidArgument("--threads must be positive".into()).into());
        }
        config.threads = threads;
    }
    if let Some(size) = cli.segment_size {
        if size == 0 || size > 1 << 28 {
            return Err(divrec::Error::InvalidArgument(format!(
                "--segment-size {size} must be between 1 and 2^28"
            ))
            .into());
        }
        config.segment_size = size as usize;
    }
    Ok(config)
}

fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let config = scan_config(cli)?;
    match &cli.command {
        Command::Oddly(args) => commands::oddly(args, &config, out),
        Command::Squarefree(args) => commands::squarefree(args, &config, out),
        Command::Phisum(args) => commands::phisum(args, &config, out),
        Command::Verify(args) => commands::verify(args, out),
        Command::ReproducePaper(args) => reproduce::reproduce(args, &config, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(EXIT_RANGE);
    }
    ExitCode::from(code)
}
