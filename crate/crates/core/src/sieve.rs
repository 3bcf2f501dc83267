//! Segmented sieves for Euler's totient and the square-free predicate, plus
//! trial-division factorization.
//!
//! A segment `[lo, hi]` is sieved with the primes up to `√hi`: each value
//! starts as its own cofactor, every sieving prime is divided out (updating
//! `φ` and noting repeated factors), and whatever cofactor is left above 1
//! is a single prime larger than `√hi`.

use std::fmt;

use crate::error::{check_cap, Error, Result};

/// Default number of integers per segment.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Largest integer the sieve will cover.
pub const MAX_SIEVE_N: u64 = 1_000_000_000;

/// Largest integer accepted by [`factorize`].
pub const MAX_FACTOR_N: u64 = 1_000_000_000_000;

/// `φ(n)` and square-free flags for every `n` in `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct SieveTable {
    lo: u64,
    hi: u64,
    phi: Vec<u64>,
    squarefree: Vec<u64>,
}

impl fmt::Debug for SieveTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveTable")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish_non_exhaustive()
    }
}

impl SieveTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    /// Panics when `n` is outside the segment.
    pub fn phi(&self, n: u64) -> u64 {
        assert!(self.contains(n), "{n} outside [{}, {}]", self.lo, self.hi);
        self.phi[(n - self.lo) as usize]
    }

    /// Panics when `n` is outside the segment.
    pub fn is_squarefree(&self, n: u64) -> bool {
        assert!(self.contains(n), "{n} outside [{}, {}]", self.lo, self.hi);
        let i = (n - self.lo) as usize;
        self.squarefree[i / 64] >> (i % 64) & 1 == 1
    }

    /// `φ(lo), φ(lo + 1), …, φ(hi)`.
    pub fn phi_values(&self) -> &[u64] {
        &self.phi
    }

    /// Number of square-free `n` in the segment.
    pub fn squarefree_count(&self) -> u64 {
        self.squarefree.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Sieving primes for every segment up to a fixed limit.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    segment_size: usize,
    primes: Vec<u64>,
}

impl Sieve {
    /// Prepares to sieve any segment inside `[1, limit]`.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_segment_size(limit, DEFAULT_SEGMENT_SIZE)
    }

    pub fn with_segment_size(limit: u64, segment_size: usize) -> Result<Self> {
        check_cap("sieve limit", limit, MAX_SIEVE_N)?;
        if segment_size == 0 {
            return Err(Error::invalid("segment size must be positive"));
        }
        Ok(Sieve {
            limit,
            segment_size,
            primes: primes_up_to(isqrt(limit)),
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_size(&self) -> usize {
        self.segment_size
    }

    /// Sieves `[lo, hi]`; `1 ≤ lo ≤ hi ≤ limit` and at most one segment long.
    pub fn segment(&self, lo: u64, hi: u64) -> Result<SieveTable> {
        if lo == 0 {
            return Err(Error::invalid("segment must start at 1 or above"));
        }
        if lo > hi {
            return Err(Error::invalid(format!("empty segment [{lo}, {hi}]")));
        }
        check_cap("segment end", hi, self.limit)?;
        let len = hi - lo + 1;
        if len > self.segment_size as u64 {
            return Err(Error::Resource(format!(
                "segment [{lo}, {hi}] holds {len} integers, more than the segment size {}",
                self.segment_size
            )));
        }
        let len = len as usize;

        let mut phi: Vec<u64> = (lo..=hi).collect();
        let mut cofactor = phi.clone();
        let mut squarefree = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *squarefree.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }

        for &p in &self.primes {
            if p * p > hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut i = (first - lo) as usize;
            while i < len {
                phi[i] -= phi[i] / p;
                let mut rest = cofactor[i] / p;
                if rest.is_multiple_of(p) {
                    squarefree[i / 64] &= !(1u64 << (i % 64));
                    while rest.is_multiple_of(p) {
                        rest /= p;
                    }
                }
                cofactor[i] = rest;
                i += p as usize;
            }
        }
        for (value, rest) in phi.iter_mut().zip(&cofactor) {
            if *rest > 1 {
                *value -= *value / rest;
            }
        }

        Ok(SieveTable {
            lo,
            hi,
            phi,
            squarefree,
        })
    }

    /// The segment grid `[1, S], [S + 1, 2S], …` clipped to `[1, hi]`.
    pub fn grid(&self, hi: u64) -> impl Iterator<Item = (u64, u64)> {
        let size = self.segment_size as u64;
        (0..hi.div_ceil(size)).map(move |k| (k * size + 1, ((k + 1) * size).min(hi)))
    }
}

/// Sieves `[lo, hi]` with the default segment size.
pub fn sieve_segment(lo: u64, hi: u64) -> Result<SieveTable> {
    Sieve::new(hi)?.segment(lo, hi)
}

/// `⌊√n⌋`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// All primes `≤ limit`, by the plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if composite[n] {
            continue;
        }
        primes.push(n as u64);
        let mut k = n * n;
        while k <= limit {
            composite[k] = true;
            k += n;
        }
    }
    primes
}

/// Prime factorization as `(prime, exponent)` pairs, primes increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    /// The distinct primes.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// `∏ p^(e−1)·(p − 1)`.
    pub fn phi(&self) -> u64 {
        self.0
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }
}

/// Trial-division factorization of `1 ≤ n ≤ 10^12`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    check_cap("n", n, MAX_FACTOR_N)?;
    let mut factors = Vec::new();
    let mut rest = n;
    let mut divide_out = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    divide_out(2, &mut rest);
    let mut p = 3;
    while p * p <= rest {
        divide_out(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization(factors))
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).is_ok_and(|f| f.factors() == [(n, 1)])
}

/// Largest `t` with `m^t | n`.
pub fn divisibility_exponent(n: u64, m: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::invalid("divisibility exponent of 0 is unbounded"));
    }
    if m < 2 {
        return Err(Error::invalid(format!(
            "modulus m = {m} must be at least 2"
        )));
    }
    let mut t = 0;
    let mut rest = n;
    while rest.is_multiple_of(m) {
        rest /= m;
        t += 1;
    }
    Ok(t)
}
