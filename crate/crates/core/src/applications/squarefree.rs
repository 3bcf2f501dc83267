use crate::applications::{DensityPrediction, Verdict};
use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;
use crate::scan::{first_multiple, scan_checkpoints, ScanConfig};
use crate::sieve::{factorize, is_prime, sieve_segment, SieveTable};

/// Largest `N` for sieve-backed square-free counting.
pub const MAX_SQUAREFREE_N: u64 = 1_000_000_000;

/// Largest `X` for the exhaustive Brown identity check.
pub const MAX_BROWN_X: u64 = 1_000_000;

fn check_squarefree_modulus(t: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::invalid("modulus t must be positive"));
    }
    if !factorize(t)?.is_squarefree() {
        return Err(Error::invalid(format!("t = {t} is not square-free")));
    }
    Ok(())
}

fn squarefree_multiples_in(table: &SieveTable, t: u64, lo: u64, hi: u64) -> u64 {
    (first_multiple(lo, t)..=hi)
        .step_by(t as usize)
        .filter(|&n| table.is_squarefree(n))
        .count() as u64
}

/// Number of square-free `r ≤ n` with `t | r`.
pub fn count_squarefree_multiples(t: u64, n: u64, config: &ScanConfig) -> Result<u64> {
    if n == 0 {
        check_squarefree_modulus(t)?;
        return Ok(0);
    }
    Ok(squarefree_multiple_counts(t, &[n], config)?[0])
}

/// [`count_squarefree_multiples`] at each checkpoint, from a single pass.
pub fn squarefree_multiple_counts(
    t: u64,
    checkpoints: &[u64],
    config: &ScanConfig,
) -> Result<Vec<u64>> {
    check_squarefree_modulus(t)?;
    if let Some(&last) = checkpoints.last() {
        check_cap("N", last, MAX_SQUAREFREE_N)?;
    }
    scan_checkpoints(checkpoints, config, |table, lo, hi| {
        squarefree_multiples_in(table, t, lo, hi)
    })
}

/// Checks `F(⌊x/p⌋) = G(⌊x/p⌋) + G(x)` for every `x ≤ x_max`, where `F`
/// counts square-free multiples of `t` and `G` square-free multiples of `p·t`.
pub fn brown_identity_check(t: u64, p: u64, x_max: u64) -> Result<Verdict> {
    check_squarefree_modulus(t)?;
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if t.is_multiple_of(p) {
        return Err(Error::invalid(format!("p = {p} divides t = {t}")));
    }
    if x_max == 0 {
        return Err(Error::invalid("bound X must be positive"));
    }
    check_cap("X", x_max, MAX_BROWN_X)?;

    let table = sieve_segment(1, x_max)?;
    let pt = p * t;
    let mut f = vec![0u64; x_max as usize + 1];
    let mut g = vec![0u64; x_max as usize + 1];
    for x in 1..=x_max {
        let i = x as usize;
        let sf = table.is_squarefree(x);
        f[i] = f[i - 1] + (sf && x % t == 0) as u64;
        g[i] = g[i - 1] + (sf && x % pt == 0) as u64;
    }
    let counterexample = (1..=x_max).find(|&x| {
        let q = (x / p) as usize;
        f[q] != g[q] + g[x as usize]
    });
    Ok(Verdict {
        checked: x_max,
        counterexample,
    })
}

/// `(6/π²)·∏ 1/(p + 1)` over distinct primes.
pub fn predicted_density_squarefree(primes: &[u64]) -> Result<DensityPrediction> {
    let mut factor = Rational::from(6);
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if primes[..i].contains(&p) {
            return Err(Error::invalid(format!("prime {p} repeated")));
        }
        factor = factor / Rational::from(p + 1);
    }
    Ok(DensityPrediction::over_pi_squared(factor))
}
