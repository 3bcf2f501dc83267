//! Exhaustive and randomized identity suites behind `divrec verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::applications::{
    brown_identity_check, count_oddly_divisible_fast, oddly_recursion_check,
    phi_claim_identity_check, Verdict, MAX_ODDLY_ORACLE_N,
};
use crate::error::{check_cap, Result};
use crate::rational::Rational;
use crate::recursion::{CountingFunction, ExpansionTerm, FnCounting, Identity, RecurrenceSpec};
use crate::sieve::{divisibility_exponent, isqrt};

/// `(t, p)` pairs checked by default for the Brown identity.
pub const DEFAULT_BROWN_PAIRS: [(u64, u64); 6] = [(1, 2), (1, 3), (2, 3), (3, 2), (6, 5), (15, 2)];

/// `(t, p, j)` triples checked by default for the φ-claim identity.
pub const DEFAULT_CLAIM_TRIPLES: [(u64, u64, u32); 6] = [
    (1, 2, 1),
    (1, 2, 2),
    (1, 3, 1),
    (3, 5, 1),
    (3, 5, 2),
    (5, 2, 3),
];

/// Moduli checked by default for the oddly-divisible recursion.
pub const DEFAULT_ODDLY_MODULI: [u64; 4] = [2, 3, 5, 10];

/// Result of one case of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub checked: u64,
    /// Verbatim inputs of the first failure.
    pub failure: Option<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn from_verdict(case: String, verdict: Verdict, what: &str) -> Self {
        CaseOutcome {
            failure: verdict
                .counterexample
                .map(|x| format!("{case}: fails at {what} = {x}")),
            case,
            checked: verdict.checked,
        }
    }
}

/// Random recursion data: `(m, α, β, F)`.
struct RandomSpec {
    m: u64,
    alpha: Rational,
    beta: Rational,
    f: Box<dyn CountingFunction>,
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn random_counting(rng: &mut ChaCha8Rng) -> Box<dyn CountingFunction> {
    match rng.gen_range(0..5) {
        0 => Box::new(Identity),
        1 => {
            let c = random_rational(rng, 9);
            let label = format!("F(n) = ({c})·n");
            Box::new(FnCounting::new(label, move |n| &c * Rational::from(n)))
        }
        2 => Box::new(FnCounting::new("F(n) = isqrt(n)", |n| {
            Rational::from(isqrt(n))
        })),
        3 => Box::new(FnCounting::new("F(n) = n - floor(n/3)", |n| {
            Rational::from(n - n / 3)
        })),
        _ => Box::new(FnCounting::new("F(n) = n^2/(n+1)", |n| {
            Rational::from(n) * Rational::from(n) / Rational::from(n + 1)
        })),
    }
}

fn random_spec(rng: &mut ChaCha8Rng) -> RandomSpec {
    let m = rng.gen_range(2..=12u64);
    let alpha = random_rational(rng, 20);
    // |β| < m: numerator bounded by m·denominator − 1
    let den = rng.gen_range(1..=20i64);
    let bound = m as i64 * den - 1;
    let beta = Rational::ratio(rng.gen_range(-bound..=bound), den);
    RandomSpec {
        m,
        alpha,
        beta,
        f: random_counting(rng),
    }
}

/// For `samples` random specs and arguments: the finite series equals
/// `G(N)/N` (`N < 10^9`), and every telescoped expansion with
/// `j = 1..=max_j` sums to `G(N)/N` (`N < 10^6`).
pub fn lemma_suite(samples: usize, max_j: u32, seed: u64) -> Result<Vec<CaseOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series_failure = None;
    let mut telescope_failure = None;
    for _ in 0..samples {
        let raw = random_spec(&mut rng);
        let label = format!(
            "m={} alpha={} beta={} {}",
            raw.m,
            raw.alpha,
            raw.beta,
            raw.f.description()
        );
        let spec = RecurrenceSpec::new(raw.m, raw.alpha, raw.beta, Rational::one(), raw.f)?;

        let n = rng.gen_range(1..1_000_000_000u64);
        let g = spec.evaluate_g(n)? / Rational::from(n);
        if series_failure.is_none() && spec.series_form(n)? != g {
            series_failure = Some(format!("{label} N={n}"));
        }

        let n = rng.gen_range(1..1_000_000u64);
        let g = spec.evaluate_g(n)? / Rational::from(n);
        for j in 1..=max_j {
            let total: Rational = spec.expand(n, j)?.iter().map(ExpansionTerm::value).sum();
            if total != g {
                telescope_failure.get_or_insert_with(|| format!("{label} N={n} j={j}"));
                break;
            }
        }
    }
    Ok(vec![
        CaseOutcome {
            case: "series form = G(N)/N".into(),
            checked: samples as u64,
            failure: series_failure,
        },
        CaseOutcome {
            case: format!("telescoped expansion, j = 1..={max_j}"),
            checked: samples as u64 * max_j as u64,
            failure: telescope_failure,
        },
    ])
}

/// For each modulus: the recursion `G(n) = ⌊n/m⌋ − G(⌊n/m⌋)` against
/// enumeration, the fast counter against enumeration, and the generic
/// engine against the fast counter, for all `n ≤ max_n`.
pub fn oddly_suite(moduli: &[u64], max_n: u64) -> Result<Vec<CaseOutcome>> {
    check_cap("N", max_n, MAX_ODDLY_ORACLE_N)?;
    let mut out = Vec::new();
    for &m in moduli {
        out.push(CaseOutcome::from_verdict(
            format!("oddly recursion m={m}"),
            oddly_recursion_check(m, max_n)?,
            "n",
        ));

        let spec = RecurrenceSpec::new(
            m,
            Rational::one(),
            -Rational::one(),
            Rational::one(),
            Identity,
        )?;
        let mut running = 0u64;
        let mut failure = None;
        for n in 1..=max_n {
            if divisibility_exponent(n, m)? % 2 == 1 {
                running += 1;
            }
            let fast = count_oddly_divisible_fast(m, n)?;
            if fast != running {
                failure = Some(format!("m={m} n={n}: fast {fast} vs enumeration {running}"));
                break;
            }
            if spec.evaluate_g(n)? != Rational::from(fast) {
                failure = Some(format!(
                    "m={m} n={n}: engine disagrees with fast count {fast}"
                ));
                break;
            }
        }
        out.push(CaseOutcome {
            case: format!("fast count = enumeration = engine, m={m}"),
            checked: max_n,
            failure,
        });
    }
    Ok(out)
}

pub fn brown_suite(pairs: &[(u64, u64)], max_x: u64) -> Result<Vec<CaseOutcome>> {
    pairs
        .iter()
        .map(|&(t, p)| {
            Ok(CaseOutcome::from_verdict(
                format!("Brown identity t={t} p={p}"),
                brown_identity_check(t, p, max_x)?,
                "x",
            ))
        })
        .collect()
}

pub fn phi_claim_suite(triples: &[(u64, u64, u32)], max_n: u64) -> Result<Vec<CaseOutcome>> {
    triples
        .iter()
        .map(|&(t, p, j)| {
            Ok(CaseOutcome::from_verdict(
                format!("phi claim t={t} p={p} j={j}"),
                phi_claim_identity_check(t, p, j, max_n)?,
                "N",
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite_passes() {
        let out = lemma_suite(50, 20, 7).unwrap();
        assert!(out.iter().all(CaseOutcome::passed), "{out:?}");
    }

    #[test]
    fn lemma_suite_is_deterministic() {
        assert_eq!(
            lemma_suite(10, 5, 3).unwrap(),
            lemma_suite(10, 5, 3).unwrap()
        );
    }

    #[test]
    fn small_suites_pass() {
        assert!(oddly_suite(&[2, 7], 500)
            .unwrap()
            .iter()
            .all(CaseOutcome::passed));
        assert!(brown_suite(&DEFAULT_BROWN_PAIRS, 500)
            .unwrap()
            .iter()
            .all(CaseOutcome::passed));
        assert!(phi_claim_suite(&DEFAULT_CLAIM_TRIPLES, 300)
            .unwrap()
            .iter()
            .all(CaseOutcome::passed));
    }

    #[test]
    fn suite_argument_errors_propagate() {
        assert!(brown_suite(&[(2, 2)], 100).is_err());
        assert!(phi_claim_suite(&[(2, 2, 1)], 100).is_err());
        assert!(oddly_suite(&[1], 100).is_err());
    }
}
