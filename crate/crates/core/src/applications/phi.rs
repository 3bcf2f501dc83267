use num_integer::Integer;

use crate::applications::{DensityPrediction, Verdict};
use crate::error::{check_cap, Error, Result};
use crate::rational::{Rational, RationalSum};
use crate::scan::{first_multiple, scan_checkpoints, ScanConfig};
use crate::sieve::{factorize, is_prime, sieve_segment, SieveTable};
use crate::summation::CompensatedSum;

/// Largest `N` for exact rational sums.
pub const MAX_EXACT_N: u64 = 100_000;

/// Largest `N` for floating-point sums.
pub const MAX_FLOAT_N: u64 = 1_000_000_000;

/// Largest `X` for the exact claim-identity check.
pub const MAX_CLAIM_X: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumMode {
    Exact,
    Float,
}

/// A `φ(n)/n` sum in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSum {
    Exact(Rational),
    Float(f64),
}

impl PhiSum {
    pub fn to_f64(&self) -> f64 {
        match self {
            PhiSum::Exact(r) => r.to_f64(),
            PhiSum::Float(x) => *x,
        }
    }
}

fn check_modulus(m: u64) -> Result<()> {
    if m == 0 {
        Err(Error::invalid("modulus m must be positive"))
    } else {
        Ok(())
    }
}

/// Adds `φ(n)/n` in lowest terms.
fn add_phi_ratio(acc: &mut RationalSum, table: &SieveTable, n: u64) {
    let phi = table.phi(n);
    let g = phi.gcd(&n);
    acc.add_ratio((phi / g) as i64, n / g);
}

/// `Σ_{m|n≤N} φ(n)/n` in the requested mode.
pub fn phi_ratio_sum(m: u64, n: u64, mode: SumMode, config: &ScanConfig) -> Result<PhiSum> {
    Ok(match mode {
        SumMode::Exact => PhiSum::Exact(phi_ratio_sum_exact(m, n)?),
        SumMode::Float => PhiSum::Float(phi_ratio_sum_float(m, n, config)?),
    })
}

/// `Σ_{m|n≤N} φ(n)/n` as an exact rational, `N ≤ 10^5`.
pub fn phi_ratio_sum_exact(m: u64, n: u64) -> Result<Rational> {
    check_modulus(m)?;
    if n == 0 {
        return Ok(Rational::zero());
    }
    let config = ScanConfig::single_threaded();
    Ok(phi_ratio_sums_exact(m, &[n], &config)?.remove(0))
}

/// Exact sums at each checkpoint.
pub fn phi_ratio_sums_exact(
    m: u64,
    checkpoints: &[u64],
    config: &ScanConfig,
) -> Result<Vec<Rational>> {
    check_modulus(m)?;
    if let Some(&last) = checkpoints.last() {
        check_cap("N (exact mode)", last, MAX_EXACT_N)?;
    }
    let sums = scan_checkpoints(checkpoints, config, |table, lo, hi| {
        let mut acc = RationalSum::new();
        for k in (first_multiple(lo, m)..=hi).step_by(m as usize) {
            add_phi_ratio(&mut acc, table, k);
        }
        acc
    })?;
    Ok(sums.iter().map(RationalSum::value).collect())
}

/// `Σ_{m|n≤N} φ(n)/n` in `f64`, compensated, ascending `n`, `N ≤ 10^9`.
pub fn phi_ratio_sum_float(m: u64, n: u64, config: &ScanConfig) -> Result<f64> {
    check_modulus(m)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(phi_ratio_sums_float(m, &[n], config)?[0])
}

/// Floating-point sums at each checkpoint, from one pass.
pub fn phi_ratio_sums_float(m: u64, checkpoints: &[u64], config: &ScanConfig) -> Result<Vec<f64>> {
    check_modulus(m)?;
    if let Some(&last) = checkpoints.last() {
        check_cap("N", last, MAX_FLOAT_N)?;
    }
    let sums = scan_checkpoints(checkpoints, config, |table, lo, hi| {
        (first_multiple(lo, m)..=hi)
            .step_by(m as usize)
            .map(|k| table.phi(k) as f64 / k as f64)
            .collect::<CompensatedSum>()
    })?;
    Ok(sums.iter().map(CompensatedSum::value).collect())
}

/// Checks, for every `N ≤ x_max`,
///
/// ```text
/// Σ_{p^j·t | n ≤ N} φ(n)/n = (p−1)/p · Σ_{t | i ≤ ⌊N/p^j⌋} φ(i)/i + 1/p · Σ_{p·t | i ≤ ⌊N/p^j⌋} φ(i)/i
/// ```
///
/// in exact arithmetic. Both sides are step functions that only move when
/// `p^j | N`, so they are compared at those `N`.
pub fn phi_claim_identity_check(t: u64, p: u64, j: u32, x_max: u64) -> Result<Verdict> {
    if t == 0 {
        return Err(Error::invalid("t must be positive"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if t.is_multiple_of(p) {
        return Err(Error::invalid(format!("p = {p} divides t = {t}")));
    }
    if j == 0 {
        return Err(Error::invalid("exponent j must be at least 1"));
    }
    if x_max == 0 {
        return Err(Error::invalid("bound X must be positive"));
    }
    check_cap("X", x_max, MAX_CLAIM_X)?;

    let Some(step) = p.checked_pow(j).filter(|&s| s <= x_max) else {
        // both sides are empty sums for every N ≤ X
        return Ok(Verdict {
            checked: x_max,
            counterexample: None,
        });
    };
    let table = sieve_segment(1, x_max)?;
    let lhs_modulus = step * t;
    let mut lhs = RationalSum::new();
    let mut over_t = RationalSum::new();
    let mut over_pt = RationalSum::new();
    let p_big = Rational::from(p);
    let weight = Rational::ratio(p as i64 - 1, p as i64);

    for big_n in (step..=x_max).step_by(step as usize) {
        if big_n % lhs_modulus == 0 {
            add_phi_ratio(&mut lhs, &table, big_n);
        }
        let i = big_n / step;
        if i % t == 0 {
            add_phi_ratio(&mut over_t, &table, i);
        }
        if i % (p * t) == 0 {
            add_phi_ratio(&mut over_pt, &table, i);
        }
        let rhs = &weight * over_t.value() + over_pt.value() / &p_big;
        if lhs.value() != rhs {
            return Ok(Verdict {
                checked: x_max,
                counterexample: Some(big_n),
            });
        }
    }
    Ok(Verdict {
        checked: x_max,
        counterexample: None,
    })
}

/// `(6/(π²·m))·∏_{p|m} p/(p + 1)`.
pub fn predicted_phi_density(m: u64) -> Result<DensityPrediction> {
    check_modulus(m)?;
    let mut factor = Rational::ratio(6, 1) / Rational::from(m);
    for p in factorize(m)?.primes() {
        factor = factor * Rational::from(p) / Rational::from(p + 1);
    }
    Ok(DensityPrediction::over_pi_squared(factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::{RecurrenceSpec, TabulatedCounting};

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    /// φ(n) by counting coprime residues.
    fn phi_naive(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    fn exact_naive(m: u64, n: u64) -> Rational {
        (1..=n)
            .filter(|k| k % m == 0)
            .map(|k| Rational::ratio(phi_naive(k) as i64, k as i64))
            .sum()
    }

    #[test]
    fn exact_sum_matches_naive() {
        for m in [1, 2, 3, 5, 12] {
            for n in [0, 1, 7, 60, 301] {
                assert_eq!(
                    phi_ratio_sum_exact(m, n).unwrap(),
                    exact_naive(m, n),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn paper_rows() {
        let config = ScanConfig::default();
        let first = phi_ratio_sum_float(5, 1000, &config).unwrap() / 1000.0;
        assert!((first - 0.1016).abs() < 5e-5, "{first}");
        let second = phi_ratio_sum_float(200, 100_000, &config).unwrap() / 100_000.0;
        assert!((second - 0.001691).abs() < 5e-7, "{second}");
        assert_eq!(phi_ratio_sum_float(7, 6, &config).unwrap(), 0.0);
        assert!(phi_ratio_sum_exact(7, 6).unwrap().is_zero());
    }

    #[test]
    fn mode_caps() {
        assert!(matches!(
            phi_ratio_sum_exact(1, MAX_EXACT_N + 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            phi_ratio_sum_float(1, MAX_FLOAT_N + 1, &ScanConfig::default()),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            phi_ratio_sum_exact(0, 10),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn float_tracks_exact() {
        let config = ScanConfig {
            segment_size: 2048,
            threads: 2,
        };
        for m in 1..=20 {
            let points = [1, 999, 2048, 5000, 10_000];
            let exact = phi_ratio_sums_exact(m, &points, &config).unwrap();
            let float = phi_ratio_sums_float(m, &points, &config).unwrap();
            for (e, f) in exact.iter().zip(&float) {
                let e = e.to_f64();
                if e == 0.0 {
                    assert_eq!(*f, 0.0);
                } else {
                    assert!(((f - e) / e).abs() < 1e-9, "m={m}: {f} vs {e}");
                }
            }
        }
    }

    #[test]
    fn claim_identity_holds() {
        for (t, p, j) in [
            (1, 2, 1),
            (1, 2, 2),
            (1, 3, 1),
            (3, 5, 1),
            (3, 5, 2),
            (5, 2, 3),
        ] {
            let v = phi_claim_identity_check(t, p, j, 1000).unwrap();
            assert!(v.holds(), "t={t} p={p} j={j} at {:?}", v.counterexample);
        }
        assert!(phi_claim_identity_check(1, 2, 20, 1000).unwrap().holds());
    }

    #[test]
    fn claim_identity_preconditions() {
        assert!(matches!(
            phi_claim_identity_check(2, 2, 1, 100),
            Err(Error::InvalidArgument(_))
        ));
        assert!(phi_claim_identity_check(1, 6, 1, 100).is_err());
        assert!(phi_claim_identity_check(1, 2, 0, 100).is_err());
        assert!(phi_claim_identity_check(0, 2, 1, 100).is_err());
        assert!(matches!(
            phi_claim_identity_check(1, 2, 1, MAX_CLAIM_X + 1),
            Err(Error::OutOfRange { .. })
        ));
    }

    /// The `j = 1` identity is a linear division-based recursion; feeding it
    /// to the engine reproduces the direct sums over multiples of `p·t`.
    #[test]
    fn claim_feeds_engine() {
        let (t, p) = (3u64, 2u64);
        let limit = 2000;
        let mut f_values = vec![Rational::zero()];
        let mut running = Rational::zero();
        for n in 1..=limit {
            if n % t == 0 {
                running += Rational::ratio(phi_naive(n) as i64, n as i64);
            }
            f_values.push(running.clone());
        }
        let f = TabulatedCounting::new("sum over t-multiples", f_values).unwrap();
        let spec = RecurrenceSpec::new(
            p,
            Rational::ratio(p as i64 - 1, p as i64),
            Rational::ratio(1, p as i64),
            Rational::one(),
            f,
        )
        .unwrap();
        for n in [1, 2, 6, 97, 600, 1999, 2000] {
            assert_eq!(spec.evaluate_g(n).unwrap(), exact_naive(p * t, n), "N={n}");
        }
        assert_eq!(spec.predicted_limit(), Rational::ratio(1, 3));
    }

    #[test]
    fn predictions() {
        let five = predicted_phi_density(5).unwrap();
        assert_eq!(five.exact_factor, Rational::one());
        assert!((five.float_value - 0.1013).abs() < 5e-5);
        let two_hundred = predicted_phi_density(200).unwrap();
        assert_eq!(two_hundred.exact_factor, Rational::ratio(1, 60));
        assert!((two_hundred.float_value - 0.001689).abs() < 5e-7);
        let big = predicted_phi_density(12348).unwrap();
        assert!((big.float_value - 0.00002154).abs() < 5e-9);
        let one = predicted_phi_density(1).unwrap();
        assert_eq!(one.exact_factor, Rational::from(6));
        assert_eq!(one.pi_squared_power, -1);
        assert!(predicted_phi_density(0).is_err());
    }

    #[test]
    fn prime_power_predictions_scale() {
        for p in [2u64, 3, 5, 7] {
            let base = predicted_phi_density(p).unwrap().exact_factor;
            for e in 2..=5u32 {
                let got = predicted_phi_density(p.pow(e)).unwrap().exact_factor;
                assert_eq!(got, &base / Rational::from(p.pow(e - 1)));
            }
        }
    }
}
