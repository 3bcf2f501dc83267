use crate::applications::{DensityPrediction, Verdict};
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::recursion::MAX_N;
use crate::sieve::divisibility_exponent;

/// Largest `N` for the enumerating counter.
pub const MAX_ODDLY_ORACLE_N: u64 = 10_000_000;

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        Err(Error::invalid(format!(
            "modulus m = {m} must be at least 2"
        )))
    } else {
        Ok(())
    }
}

/// Counts `1 ≤ i ≤ n` whose exact power of `m` is odd, by enumeration.
pub fn count_oddly_divisible_oracle(m: u64, n: u64) -> Result<u64> {
    check_modulus(m)?;
    check_cap("N", n, MAX_ODDLY_ORACLE_N)?;
    let mut count = 0;
    for i in 1..=n {
        if divisibility_exponent(i, m)? % 2 == 1 {
            count += 1;
        }
    }
    Ok(count)
}

/// Same count via `G(n) = ⌊n/m⌋ − G(⌊n/m⌋)`, in `O(log_m n)` steps.
pub fn count_oddly_divisible_fast(m: u64, n: u64) -> Result<u64> {
    check_modulus(m)?;
    check_cap("N", n, MAX_N)?;
    let mut chain = Vec::new();
    let mut k = n;
    while k > 0 {
        chain.push(k);
        k /= m;
    }
    let mut g = 0u64;
    for &k in chain.iter().rev() {
        g = (k / m).checked_sub(g).expect("G(k) never exceeds k");
    }
    Ok(g)
}

/// Same count by levels: `Σ_{t odd} (⌊n/m^t⌋ − ⌊n/m^(t+1)⌋)`, where the bracket
/// is the number of `i ≤ n` with exactly `t` factors of `m`.
pub fn count_oddly_divisible_by_levels(m: u64, n: u64) -> Result<u64> {
    check_modulus(m)?;
    check_cap("N", n, MAX_N)?;
    let quotient = |t: u32| m.checked_pow(t).map_or(0, |mt| n / mt);
    let mut total = 0u64;
    let mut t = 1;
    while quotient(t) > 0 {
        total += quotient(t) - quotient(t + 1);
        t += 2;
    }
    Ok(total)
}

/// `1/(m + 1)`.
pub fn predicted_density_oddly(m: u64) -> Result<DensityPrediction> {
    check_modulus(m)?;
    Ok(DensityPrediction::rational(Rational::ratio(
        1,
        m as i64 + 1,
    )))
}

/// Checks `G(n) = ⌊n/m⌋ − G(⌊n/m⌋)` for every `n ≤ max_n`, with `G` taken
/// from enumeration.
pub fn oddly_recursion_check(m: u64, max_n: u64) -> Result<Verdict> {
    check_modulus(m)?;
    check_cap("N", max_n, MAX_ODDLY_ORACLE_N)?;
    let mut counts = Vec::with_capacity(max_n as usize + 1);
    counts.push(0u64);
    for i in 1..=max_n {
        let odd = divisibility_exponent(i, m)? % 2 == 1;
        counts.push(counts[i as usize - 1] + odd as u64);
    }
    let counterexample = (1..=max_n).find(|&n| {
        let q = n / m;
        counts[n as usize] + counts[q as usize] != q
    });
    Ok(Verdict {
        checked: max_n,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_oddly_divisible_oracle(2, 10).unwrap(), 4);
        assert_eq!(count_oddly_divisible_fast(2, 10).unwrap(), 4);
        assert_eq!(count_oddly_divisible_by_levels(2, 10).unwrap(), 4);
        assert_eq!(count_oddly_divisible_oracle(3, 100).unwrap(), 24);
        assert_eq!(count_oddly_divisible_fast(3, 100).unwrap(), 24);
        for m in 2..20 {
            assert_eq!(count_oddly_divisible_fast(m, 0).unwrap(), 0);
            assert_eq!(count_oddly_divisible_oracle(m, m - 1).unwrap(), 0);
            assert_eq!(count_oddly_divisible_fast(m, m - 1).unwrap(), 0);
        }
    }

    #[test]
    fn large_n_forms_agree() {
        let n = MAX_N;
        let fast = count_oddly_divisible_fast(5, n).unwrap();
        assert_eq!(fast, count_oddly_divisible_by_levels(5, n).unwrap());
        let density = fast as f64 / n as f64;
        assert!((density - 1.0 / 6.0).abs() < 1e-6, "{density}");
        let fast = count_oddly_divisible_fast(u64::MAX / 2, n).unwrap();
        assert_eq!(fast, 0);
        assert_eq!(
            count_oddly_divisible_by_levels(999_999, n).unwrap(),
            1_000_000
        );
        assert_eq!(count_oddly_divisible_fast(999_999, n).unwrap(), 1_000_000);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            count_oddly_divisible_fast(1, 10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            count_oddly_divisible_oracle(0, 10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            count_oddly_divisible_fast(2, MAX_N + 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            count_oddly_divisible_oracle(2, MAX_ODDLY_ORACLE_N + 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(predicted_density_oddly(1).is_err());
    }

    #[test]
    fn oracle_equivalence_small() {
        for m in [2, 3, 4, 5, 7, 10] {
            let mut running = 0;
            for n in 1..=10_000u64 {
                if divisibility_exponent(n, m).unwrap() % 2 == 1 {
                    running += 1;
                }
                assert_eq!(
                    count_oddly_divisible_fast(m, n).unwrap(),
                    running,
                    "m={m} n={n}"
                );
            }
            assert_eq!(count_oddly_divisible_oracle(m, 10_000).unwrap(), running);
        }
    }

    #[test]
    fn recursion_identity() {
        for m in [2, 3, 5, 10] {
            let v = oddly_recursion_check(m, 10_000).unwrap();
            assert!(v.holds());
            assert_eq!(v.checked, 10_000);
        }
    }

    #[test]
    fn predictions() {
        assert_eq!(
            predicted_density_oddly(2).unwrap().exact_factor,
            Rational::ratio(1, 3)
        );
        let five = predicted_density_oddly(5).unwrap();
        assert_eq!(five.exact_factor, Rational::ratio(1, 6));
        assert_eq!(five.pi_squared_power, 0);
        assert_eq!(five.float_value, 1.0 / 6.0);
        assert_eq!(
            predicted_density_oddly(1_000_000).unwrap().exact_factor,
            Rational::ratio(1, 1_000_001)
        );
    }
}
