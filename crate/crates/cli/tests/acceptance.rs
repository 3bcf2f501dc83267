//! Acceptance criteria. Prints one `PASS`/`FAIL` line per criterion and
//! exits nonzero if any fails.

use std::panic;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use divrec::analysis::{read_csv_report, ConvergenceRow};
use divrec::applications::{count_oddly_divisible_fast, count_oddly_divisible_oracle};
use divrec::recursion::Identity;
use divrec::{Rational, RecurrenceSpec};

struct Run {
    stdout: Vec<u8>,
    stderr: String,
    code: Option<i32>,
    elapsed: Duration,
}

fn divrec(args: &[&str]) -> Run {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_divrec"))
        .args(args)
        .env_remove("DIVREC_THREADS")
        .env_remove("DIVREC_SEGMENT_SIZE")
        .output()
        .expect("spawn divrec");
    Run {
        elapsed: start.elapsed(),
        stdout: output.stdout,
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        code: output.status.code(),
    }
}

fn single_row(run: &Run) -> ConvergenceRow {
    assert_eq!(run.code, Some(0), "stderr: {}", run.stderr);
    let rows = read_csv_report(&run.stdout).expect("csv report");
    assert_eq!(rows.len(), 1);
    rows.into_iter().next().unwrap()
}

type Verdict = (bool, String);

fn criterion_1_phisum_first_row() -> Verdict {
    let run = divrec(&["phisum", "--m", "5", "--n", "1000"]);
    let row = single_row(&run);
    let ok = (0.10155..=0.10165).contains(&row.empirical)
        && (row.predicted - 0.10132).abs() <= 5e-5
        && run.elapsed < Duration::from_secs(1);
    (
        ok,
        format!(
            "empirical {} predicted {} in {:?}",
            row.empirical, row.predicted, run.elapsed
        ),
    )
}

fn criterion_2_phisum_second_row() -> Verdict {
    let run = divrec(&["phisum", "--m", "200", "--n", "100000"]);
    let row = single_row(&run);
    let ok = (0.0016905..=0.0016915).contains(&row.empirical)
        && (row.predicted - 0.001689).abs() <= 1e-6
        && run.elapsed < Duration::from_secs(2);
    (
        ok,
        format!(
            "empirical {} predicted {} in {:?}",
            row.empirical, row.predicted, run.elapsed
        ),
    )
}

fn criterion_3_phisum_third_row() -> Verdict {
    let run = divrec(&["--threads", "1", "phisum", "--m", "12348", "--n", "1e7"]);
    let row = single_row(&run);
    let small = single_row(&divrec(&[
        "--threads",
        "1",
        "phisum",
        "--m",
        "12348",
        "--n",
        "1e6",
    ]));
    let ok = ((row.empirical - 2.153e-5) / 2.153e-5).abs() < 0.01
        && (row.predicted - 2.154e-5).abs() <= 1e-8
        && run.elapsed < Duration::from_secs(60);
    (
        ok,
        format!(
            "N=1e7 empirical {} predicted {} in {:?} (N=1e6 empirical {})",
            row.empirical, row.predicted, run.elapsed, small.empirical
        ),
    )
}

fn criterion_4_oddly_density() -> Verdict {
    let mut worst = 0.0f64;
    for m in [2u64, 3, 5, 10] {
        let count = count_oddly_divisible_fast(m, 10_000_000).unwrap();
        let err = (count as f64 / 1e7 - 1.0 / (m + 1) as f64).abs();
        worst = worst.max(err);
    }
    let mut mismatch = None;
    'outer: for m in [2u64, 3, 5, 10] {
        for n in 0..=10_000 {
            if count_oddly_divisible_fast(m, n).unwrap()
                != count_oddly_divisible_oracle(m, n).unwrap()
            {
                mismatch = Some((m, n));
                break 'outer;
            }
        }
    }
    (
        worst < 1e-3 && mismatch.is_none(),
        format!("worst density error {worst:e}, oracle mismatch {mismatch:?}"),
    )
}

fn criterion_5_squarefree_density() -> Verdict {
    let six_over_pi2 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let cases: [(&str, f64); 3] = [("", 1.0), ("2", 3.0), ("2,3", 12.0)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (primes, divisor) in cases {
        let row = single_row(&divrec(&["squarefree", "--primes", primes, "--n", "1e7"]));
        let target = six_over_pi2 / divisor;
        let err = (row.empirical - target).abs();
        ok &= err < 1e-3;
        detail.push(format!("{{{primes}}} {} vs {target:.6}", row.empirical));
    }
    (ok, detail.join(", "))
}

fn criterion_6_identity_suites() -> Verdict {
    let suites: [&[&str]; 5] = [
        &[
            "verify",
            "--suite",
            "lemma",
            "--samples",
            "1000",
            "--max-j",
            "20",
        ],
        &["verify", "--suite", "app1", "--max-n", "1e4"],
        &["verify", "--suite", "brown", "--max-x", "1e4"],
        &["verify", "--suite", "phi-claim", "--max-n", "1e3"],
        &["verify", "--suite", "app1", "--m", "3", "--max-n", "10000"],
    ];
    let mut ok = true;
    let mut cases = 0;
    for args in suites {
        let run = divrec(args);
        let text = String::from_utf8_lossy(&run.stdout);
        cases += text.lines().filter(|l| l.starts_with("PASS")).count();
        if run.code != Some(0) || text.lines().any(|l| l.starts_with("FAIL")) || text.is_empty() {
            ok = false;
            println!("{}: {text}{}", args.join(" "), run.stderr);
        }
    }
    (ok, format!("{cases} cases passed"))
}

fn criterion_7_predicted_limit_algebra() -> Verdict {
    let mut ok = true;
    for p in [2i64, 3, 5, 7, 11] {
        let spec = RecurrenceSpec::new(
            p as u64,
            Rational::ratio(p - 1, p),
            Rational::ratio(1, p),
            Rational::one(),
            Identity,
        )
        .unwrap();
        ok &= spec.predicted_limit() == Rational::ratio(1, p + 1);
    }
    for m in 2i64..=10 {
        let spec = RecurrenceSpec::new(
            m as u64,
            Rational::one(),
            Rational::from(-1),
            Rational::one(),
            Identity,
        )
        .unwrap();
        ok &= spec.predicted_limit() == Rational::ratio(1, m + 1);
    }
    (ok, "exact limits 1/(p+1) and 1/(m+1)".to_string())
}

fn criterion_8_reproduce_is_deterministic() -> Verdict {
    let reference = divrec(&["reproduce-paper"]);
    assert_eq!(reference.code, Some(0), "stderr: {}", reference.stderr);
    let mut ok = !reference.stdout.is_empty();
    for _ in 0..2 {
        ok &= divrec(&["reproduce-paper"]).stdout == reference.stdout;
    }
    for threads in ["1", "4"] {
        ok &= divrec(&["--threads", threads, "reproduce-paper"]).stdout == reference.stdout;
        ok &= divrec(&["--threads", threads, "reproduce-paper", "--format", "json"]).stdout
            == divrec(&["reproduce-paper", "--format", "json"]).stdout;
    }
    let lines = String::from_utf8_lossy(&reference.stdout).lines().count();
    (
        ok && lines == 4,
        format!("{lines} lines, identical across runs and threads 1/4"),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Verdict; 8] = [
        criterion_1_phisum_first_row,
        criterion_2_phisum_second_row,
        criterion_3_phisum_third_row,
        criterion_4_oddly_density,
        criterion_5_squarefree_density,
        criterion_6_identity_suites,
        criterion_7_predicted_limit_algebra,
        criterion_8_reproduce_is_deterministic,
    ];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let (ok, detail) = panic::catch_unwind(criterion).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!(
            "{} criterion {}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
