use std::io::Write;

use clap::{Args, ValueEnum};
use divrec::analysis::{
    emit_report_with, run_convergence, CheckpointSchedule, Family, ReportFormat, ScheduleSpec,
};
use divrec::applications::{brown_identity_check, SumMode};
use divrec::sieve::{factorize, is_prime};
use divrec::verify::{
    brown_suite, lemma_suite, oddly_suite, phi_claim_suite, CaseOutcome, DEFAULT_BROWN_PAIRS,
    DEFAULT_CLAIM_TRIPLES, DEFAULT_ODDLY_MODULI,
};
use divrec::{Error, ScanConfig};

use crate::{count_arg, Failure, Format, Outcome, Target, EXIT_VERIFY_FAILED};

#[derive(Args, Debug)]
pub struct OddlyArgs {
    /// Modulus m >= 2
    #[arg(long, value_parser = count_arg)]
    m: u64,

    #[command(flatten)]
    target: Target,
}

#[derive(Args, Debug)]
pub struct SquarefreeArgs {
    /// Square-free modulus t
    #[arg(long, value_parser = count_arg, default_value = "1")]
    t: u64,

    /// Comma-separated distinct primes that must divide the counted numbers
    #[arg(long, default_value = "")]
    primes: String,

    #[command(flatten)]
    target: Target,

    /// Check F(x/p) = G(x/p) + G(x) for this prime p instead of printing a table
    #[arg(long, value_parser = count_arg)]
    check_identity: Option<u64>,

    /// Largest x for --check-identity
    #[arg(long, value_parser = count_arg, default_value = "1e4")]
    max_x: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Args, Debug)]
pub struct PhisumArgs {
    /// Modulus m >= 1
    #[arg(long, value_parser = count_arg)]
    m: u64,

    #[command(flatten)]
    target: Target,

    #[arg(long, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Series form and telescoped expansion of the recursion
    Lemma,
    /// Oddly-divisible recursion and counters
    App1,
    /// Square-free multiple identity
    Brown,
    /// Identity behind the phi-sum densities
    PhiClaim,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,

    /// Modulus for app1 [default: 2, 3, 5 and 10]
    #[arg(long, value_parser = count_arg)]
    m: Option<u64>,

    /// Largest N for app1 (default 1e4) and phi-claim (default 1e3)
    #[arg(long, value_parser = count_arg)]
    max_n: Option<u64>,

    /// Largest x for brown
    #[arg(long, value_parser = count_arg, default_value = "1e4")]
    max_x: u64,

    /// Modulus t for brown and phi-claim
    #[arg(long, value_parser = count_arg)]
    t: Option<u64>,

    /// Prime p for brown and phi-claim; without it the default cases run
    #[arg(long, value_parser = count_arg)]
    p: Option<u64>,

    /// Exponent j for phi-claim
    #[arg(long, value_parser = count_arg)]
    j: Option<u64>,

    /// Random cases for lemma
    #[arg(long, value_parser = count_arg, default_value = "1000")]
    samples: u64,

    /// Deepest expansion for lemma
    #[arg(long, default_value_t = 20)]
    max_j: u32,

    /// Seed for lemma
    #[arg(long, default_value_t = 2024)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
    format: VerifyFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyFormat {
    Text,
    Json,
}

fn schedule_for(target: &Target) -> Result<CheckpointSchedule, Error> {
    match (target.n, &target.schedule) {
        (Some(n), _) => CheckpointSchedule::single(n),
        (None, Some(spec)) => spec.schedule(),
        (None, None) => ScheduleSpec::default().schedule(),
    }
}

fn table(family: &Family, target: &Target, config: &ScanConfig, out: &mut dyn Write) -> Outcome {
    let schedule = schedule_for(target)?;
    let rows = run_convergence(family, &schedule, config)?;
    let format = match target.format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    out.write_all(&emit_report_with(&rows, format, target.exact_json))?;
    Ok(0)
}

pub fn oddly(args: &OddlyArgs, config: &ScanConfig, out: &mut dyn Write) -> Outcome {
    table(&Family::Oddly { m: args.m }, &args.target, config, out)
}

fn parse_primes(list: &str) -> Result<Vec<u64>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(divrec::analysis::parse_count)
        .collect()
}

pub fn squarefree(args: &SquarefreeArgs, config: &ScanConfig, out: &mut dyn Write) -> Outcome {
    if args.t == 0 {
        return Err(Error::InvalidArgument("--t must be positive".into()).into());
    }
    let t_factors = factorize(args.t)?;
    if !t_factors.is_squarefree() {
        return Err(Error::InvalidArgument(format!("t = {} is not square-free", args.t)).into());
    }
    let extra = parse_primes(&args.primes)?;
    let mut primes: Vec<u64> = t_factors.primes().collect();
    for &p in &extra {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")).into());
        }
        if primes.contains(&p) {
            return Err(
                Error::InvalidArgument(format!("prime {p} given twice or divides t")).into(),
            );
        }
        primes.push(p);
    }
    primes.sort_unstable();

    if let Some(p) = args.check_identity {
        let modulus = primes
            .iter()
            .try_fold(1u64, |acc, &q| acc.checked_mul(q))
            .ok_or_else(|| Error::InvalidArgument("modulus overflows 64 bits".into()))?;
        let verdict = brown_identity_check(modulus, p, args.max_x)?;
        return Ok(match verdict.counterexample {
            None => {
                writeln!(
                    out,
                    "PASS Brown identity t={modulus} p={p}: all x <= {}",
                    args.max_x
                )?;
                0
            }
            Some(x) => {
                writeln!(
                    out,
                    "FAIL Brown identity t={modulus} p={p}: fails at x = {x}"
                )?;
                EXIT_VERIFY_FAILED
            }
        });
    }
    table(&Family::Squarefree { primes }, &args.target, config, out)
}

pub fn phisum(args: &PhisumArgs, config: &ScanConfig, out: &mut dyn Write) -> Outcome {
    let mode = match args.mode {
        Mode::Exact => SumMode::Exact,
        Mode::Float => SumMode::Float,
    };
    table(
        &Family::PhiSum { m: args.m, mode },
        &args.target,
        config,
        out,
    )
}

fn exponent(j: u64) -> Result<u32, Failure> {
    u32::try_from(j)
        .map_err(|_| Error::InvalidArgument(format!("exponent j = {j} too large")).into())
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let outcomes: Vec<CaseOutcome> = match args.suite {
        Suite::Lemma => lemma_suite(args.samples as usize, args.max_j, args.seed)?,
        Suite::App1 => {
            let moduli = args.m.map_or(DEFAULT_ODDLY_MODULI.to_vec(), |m| vec![m]);
            oddly_suite(&moduli, args.max_n.unwrap_or(10_000))?
        }
        Suite::Brown => {
            let pairs = match args.p {
                Some(p) => vec![(args.t.unwrap_or(1), p)],
                None => DEFAULT_BROWN_PAIRS.to_vec(),
            };
            brown_suite(&pairs, args.max_x)?
        }
        Suite::PhiClaim => {
            let triples = match args.p {
                Some(p) => vec![(args.t.unwrap_or(1), p, exponent(args.j.unwrap_or(1))?)],
                None => DEFAULT_CLAIM_TRIPLES.to_vec(),
            };
            phi_claim_suite(&triples, args.max_n.unwrap_or(1_000))?
        }
    };

    match args.format {
        VerifyFormat::Text => {
            for o in &outcomes {
                match &o.failure {
                    None => writeln!(out, "PASS {} (checked {})", o.case, o.checked)?,
                    Some(f) => writeln!(out, "FAIL {}: {f}", o.case)?,
                }
            }
        }
        VerifyFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &outcomes).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(if outcomes.iter().all(CaseOutcome::passed) {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}
