//! Convergence experiments: empirical ratios `G(N)/N` at a schedule of
//! checkpoints, set against the closed-form densities, and rendered as CSV
//! or JSON tables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::applications::{
    count_oddly_divisible_fast, phi_ratio_sums_exact, phi_ratio_sums_float,
    predicted_density_oddly, predicted_density_squarefree, predicted_phi_density,
    squarefree_multiple_counts, DensityPrediction, SumMode, MAX_EXACT_N, MAX_FLOAT_N,
    MAX_SQUAREFREE_N,
};
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::recursion::MAX_N;
use crate::scan::ScanConfig;

/// Exact CSV header of a convergence report.
pub const CSV_HEADER: &str = "N,empirical,predicted,abs_err,rel_err";

/// Significant digits of every real-valued report column.
pub const REPORT_DIGITS: usize = 12;

/// Increasing checkpoints `N_k = round(start·ratio^k)`, `N_k ≤ stop`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckpointSchedule {
    points: Vec<u64>,
}

impl CheckpointSchedule {
    /// Geometric schedule; rounding collisions are dropped so points stay
    /// strictly increasing.
    pub fn geometric(start: u64, stop: u64, ratio: &Rational) -> Result<Self> {
        if start == 0 {
            return Err(Error::invalid("schedule start must be positive"));
        }
        if stop < start {
            return Err(Error::invalid(format!(
                "schedule stop {stop} is below start {start}"
            )));
        }
        if *ratio <= Rational::one() {
            return Err(Error::invalid(format!(
                "schedule ratio {ratio} must exceed 1"
            )));
        }
        let stop_big = Rational::from(stop);
        let mut points: Vec<u64> = Vec::new();
        let mut value = Rational::from(start);
        loop {
            let rounded = value.round();
            if Rational::from_integer(rounded.clone()) > stop_big {
                break;
            }
            let n = u64::try_from(&rounded).expect("checkpoint below stop");
            if points.last().is_none_or(|&last| n > last) {
                points.push(n);
            }
            value *= ratio;
        }
        Ok(CheckpointSchedule { points })
    }

    /// A schedule of explicit checkpoints, which must be positive and strictly increasing.
    pub fn from_points(points: Vec<u64>) -> Result<Self> {
        if points.first() == Some(&0) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "checkpoints must be positive and strictly increasing",
            ));
        }
        Ok(CheckpointSchedule { points })
    }

    pub fn single(n: u64) -> Result<Self> {
        Self::from_points(vec![n])
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The textual `start:stop:ratio` form of a geometric schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleSpec {
    pub start: u64,
    pub stop: u64,
    pub ratio: Rational,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        ScheduleSpec {
            start: 1_000,
            stop: 10_000_000,
            ratio: Rational::from(10),
        }
    }
}

impl ScheduleSpec {
    pub fn schedule(&self) -> Result<CheckpointSchedule> {
        CheckpointSchedule::geometric(self.start, self.stop, &self.ratio)
    }
}

/// Parses a nonnegative integer literal, accepting exact scientific notation (`1e7`).
pub fn parse_count(s: &str) -> Result<u64> {
    let value: Rational = s.parse()?;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::invalid(format!(
            "{s:?} is not a nonnegative integer"
        )));
    }
    u64::try_from(value.numer())
        .map_err(|_| Error::invalid(format!("{s:?} does not fit in 64 bits")))
}

impl FromStr for ScheduleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, ratio] = parts[..] else {
            return Err(Error::invalid(format!(
                "schedule {s:?} is not start:stop:ratio"
            )));
        };
        Ok(ScheduleSpec {
            start: parse_count(start)?,
            stop: parse_count(stop)?,
            ratio: ratio.parse()?,
        })
    }
}

/// A counting family and its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Integers oddly divisible by `m`.
    Oddly { m: u64 },
    /// Square-free multiples of the product of `primes`.
    Squarefree { primes: Vec<u64> },
    /// `Σ φ(n)/n` over multiples of `m`.
    PhiSum { m: u64, mode: SumMode },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Oddly { m } => write!(f, "oddly(m={m})"),
            Family::Squarefree { primes } => {
                let list: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "squarefree(primes=[{}])", list.join(","))
            }
            Family::PhiSum { m, mode } => write!(f, "phisum(m={m}, {mode:?})"),
        }
    }
}

impl Family {
    pub fn prediction(&self) -> Result<DensityPrediction> {
        match self {
            Family::Oddly { m } => predicted_density_oddly(*m),
            Family::Squarefree { primes } => predicted_density_squarefree(primes),
            Family::PhiSum { m, .. } => predicted_phi_density(*m),
        }
    }

    /// Largest `N` the family's counter accepts.
    pub fn max_n(&self) -> u64 {
        match self {
            Family::Oddly { .. } => MAX_N,
            Family::Squarefree { .. } => MAX_SQUAREFREE_N,
            Family::PhiSum {
                mode: SumMode::Exact,
                ..
            } => MAX_EXACT_N,
            Family::PhiSum {
                mode: SumMode::Float,
                ..
            } => MAX_FLOAT_N,
        }
    }
}

/// One checkpoint of a convergence run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub abs_err: f64,
    /// `NaN` when the prediction is zero.
    pub rel_err: f64,
    /// The empirical ratio as an exact fraction, where the family is exact.
    pub exact: Option<Rational>,
}

impl ConvergenceRow {
    pub fn new(n: u64, empirical: f64, predicted: f64) -> Self {
        let abs_err = (empirical - predicted).abs();
        let rel_err = if predicted == 0.0 {
            f64::NAN
        } else {
            abs_err / predicted.abs()
        };
        ConvergenceRow {
            n,
            empirical,
            predicted,
            abs_err,
            rel_err,
            exact: None,
        }
    }

    fn from_exact(n: u64, ratio: Rational, predicted: f64) -> Self {
        ConvergenceRow {
            exact: Some(ratio.clone()),
            ..Self::new(n, ratio.to_f64(), predicted)
        }
    }
}

/// Empirical ratio against prediction at every checkpoint, one pass per run.
pub fn run_convergence(
    family: &Family,
    schedule: &CheckpointSchedule,
    config: &ScanConfig,
) -> Result<Vec<ConvergenceRow>> {
    let predicted = family.prediction()?.float_value;
    let points = schedule.points();
    let Some(&last) = points.last() else {
        return Ok(Vec::new());
    };
    check_cap("N", last, family.max_n())?;

    let exact_rows = |values: Vec<u64>| -> Vec<ConvergenceRow> {
        points
            .iter()
            .zip(values)
            .map(|(&n, count)| {
                ConvergenceRow::from_exact(n, Rational::from(count) / Rational::from(n), predicted)
            })
            .collect()
    };

    Ok(match family {
        Family::Oddly { m } => exact_rows(
            points
                .iter()
                .map(|&n| count_oddly_divisible_fast(*m, n))
                .collect::<Result<_>>()?,
        ),
        Family::Squarefree { primes } => {
            let t = primes
                .iter()
                .try_fold(1u64, |acc, &p| acc.checked_mul(p))
                .ok_or_else(|| Error::invalid("product of primes overflows 64 bits"))?;
            exact_rows(squarefree_multiple_counts(t, points, config)?)
        }
        Family::PhiSum {
            m,
            mode: SumMode::Exact,
        } => phi_ratio_sums_exact(*m, points, config)?
            .into_iter()
            .zip(points)
            .map(|(sum, &n)| ConvergenceRow::from_exact(n, sum / Rational::from(n), predicted))
            .collect(),
        Family::PhiSum {
            m,
            mode: SumMode::Float,
        } => phi_ratio_sums_float(*m, points, config)?
            .into_iter()
            .zip(points)
            .map(|(sum, &n)| ConvergenceRow::new(n, sum / n as f64, predicted))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::invalid(format!("unknown report format {s:?}"))),
        }
    }
}

/// `x` to `digits` significant digits in the shortest of fixed or
/// scientific notation, trailing zeros removed (C's `%.{digits}g`).
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let figures: String = mantissa.chars().filter(|c| *c != '.').collect();

    if exp < -4 || exp >= digits as i32 {
        let mut m = format!("{}.{}", &figures[..1], &figures[1..]);
        trim_fraction(&mut m);
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{m}e{esign}{:02}", exp.abs());
    }
    let mut out = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &figures[..split], &figures[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), figures)
    };
    trim_fraction(&mut out);
    format!("{sign}{out}")
}

fn trim_fraction(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}

fn rounded(x: f64) -> f64 {
    format_significant(x, REPORT_DIGITS).parse().unwrap_or(x)
}

#[derive(Serialize)]
struct ExactJson {
    numerator: String,
    denominator: String,
}

#[derive(Serialize)]
struct RowJson {
    #[serde(rename = "N")]
    n: u64,
    empirical: f64,
    predicted: f64,
    abs_err: f64,
    rel_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical_exact: Option<ExactJson>,
}

/// Renders rows with the five standard columns.
pub fn emit_report(rows: &[ConvergenceRow], format: ReportFormat) -> Vec<u8> {
    emit_report_with(rows, format, false)
}

/// Like [`emit_report`]; with `include_exact`, JSON rows carry the exact
/// empirical ratio as numerator/denominator strings where one is known.
pub fn emit_report_with(
    rows: &[ConvergenceRow],
    format: ReportFormat,
    include_exact: bool,
) -> Vec<u8> {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in rows {
                let fields = [row.empirical, row.predicted, row.abs_err, row.rel_err]
                    .map(|x| format_significant(x, REPORT_DIGITS));
                out.push_str(&format!("{},{}\n", row.n, fields.join(",")));
            }
            out.into_bytes()
        }
        ReportFormat::Json => {
            let json: Vec<RowJson> = rows
                .iter()
                .map(|row| RowJson {
                    n: row.n,
                    empirical: rounded(row.empirical),
                    predicted: rounded(row.predicted),
                    abs_err: rounded(row.abs_err),
                    rel_err: rounded(row.rel_err),
                    empirical_exact: row.exact.as_ref().filter(|_| include_exact).map(|r| {
                        ExactJson {
                            numerator: r.numer().to_string(),
                            denominator: r.denom().to_string(),
                        }
                    }),
                })
                .collect();
            let mut out = serde_json::to_vec_pretty(&json).expect("rows serialize");
            out.push(b'\n');
            out
        }
    }
}

/// Parses a CSV report produced by [`emit_report`].
pub fn read_csv_report(bytes: &[u8]) -> Result<Vec<ConvergenceRow>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::invalid("missing or malformed CSV header"));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let bad = || Error::invalid(format!("malformed CSV row {line:?}"));
            let fields: Vec<&str> = line.split(',').collect();
            let [n, e, p, a, r] = fields[..] else {
                return Err(bad());
            };
            let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(ConvergenceRow {
                n: n.parse().map_err(|_| bad())?,
                empirical: real(e)?,
                predicted: real(p)?,
                abs_err: real(a)?,
                rel_err: real(r)?,
                exact: None,
            })
        })
        .collect()
}
