//! Engine for linear division-based recursions
//!
//! ```text
//! G(N) = α·F(⌊N/m⌋) + β·G(⌊N/m⌋),    F(0) = G(0) = 0
//! ```
//!
//! With `F(N)/N → D` and `|β| < m`, `G(N)/N → D·α/(m − β)`. The engine
//! evaluates `G` exactly, produces the finite telescoped expansion of
//! `G(N)/N` after `j` substitutions, the full finite series, the predicted
//! limit, and the geometric bound on the series tail.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{check_cap, Error, Result};
use crate::rational::Rational;

/// Largest `N` the engine accepts.
pub const MAX_N: u64 = 1_000_000_000_000;

/// A map `N → Rational` with `F(0) = 0`.
pub trait CountingFunction: Sync {
    fn eval(&self, n: u64) -> Rational;

    fn description(&self) -> String;
}

impl<T: CountingFunction + ?Sized> CountingFunction for &T {
    fn eval(&self, n: u64) -> Rational {
        (**self).eval(n)
    }

    fn description(&self) -> String {
        (**self).description()
    }
}

impl<T: CountingFunction + ?Sized> CountingFunction for Box<T> {
    fn eval(&self, n: u64) -> Rational {
        (**self).eval(n)
    }

    fn description(&self) -> String {
        (**self).description()
    }
}

/// `F(n) = n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl CountingFunction for Identity {
    fn eval(&self, n: u64) -> Rational {
        Rational::from(n)
    }

    fn description(&self) -> String {
        "F(n) = n".into()
    }
}

/// A counting function built from a closure.
pub struct FnCounting<F> {
    label: String,
    f: F,
}

impl<F: Fn(u64) -> Rational + Sync> FnCounting<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnCounting {
            label: label.into(),
            f,
        }
    }
}

impl<F: Fn(u64) -> Rational + Sync> CountingFunction for FnCounting<F> {
    fn eval(&self, n: u64) -> Rational {
        (self.f)(n)
    }

    fn description(&self) -> String {
        self.label.clone()
    }
}

/// Counting function backed by a precomputed table `values[n] = F(n)`.
#[derive(Debug, Clone)]
pub struct TabulatedCounting {
    label: String,
    values: Vec<Rational>,
}

impl TabulatedCounting {
    /// `values[0]` must be zero.
    pub fn new(label: impl Into<String>, values: Vec<Rational>) -> Result<Self> {
        match values.first() {
            Some(v) if v.is_zero() => Ok(TabulatedCounting {
                label: label.into(),
                values,
            }),
            Some(_) => Err(Error::invalid("tabulated counting function has F(0) != 0")),
            None => Err(Error::invalid("empty table")),
        }
    }

    /// Largest argument covered by the table.
    pub fn max_n(&self) -> u64 {
        (self.values.len() - 1) as u64
    }
}

impl CountingFunction for TabulatedCounting {
    /// Panics past [`TabulatedCounting::max_n`].
    fn eval(&self, n: u64) -> Rational {
        self.values[n as usize].clone()
    }

    fn description(&self) -> String {
        self.label.clone()
    }
}

/// The data `(m, α, β, D, F)` of one recursion.
#[derive(Clone)]
pub struct RecurrenceSpec<F> {
    m: u64,
    alpha: Rational,
    beta: Rational,
    limit: Rational,
    f: F,
}

impl<F: fmt::Debug> fmt::Debug for RecurrenceSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecurrenceSpec")
            .field("m", &self.m)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("limit", &self.limit)
            .field("f", &self.f)
            .finish()
    }
}

/// One summand of the telescoped expansion of `G(N)/N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub index: u32,
    /// `α·β^(i−1)/m^i` for an F-term, `β^j/m^j` for the remainder.
    pub coefficient: Rational,
    /// `F(⌊N/m^i⌋)/(N/m^i)`, or `G(⌊N/m^j⌋)/(N/m^j)` for the remainder.
    pub ratio: Rational,
    pub remainder: bool,
}

impl ExpansionTerm {
    pub fn value(&self) -> Rational {
        &self.coefficient * &self.ratio
    }
}

impl<F: CountingFunction> RecurrenceSpec<F> {
    /// Requires `m ≥ 2`, `|β| < m` and `F(0) = 0`.
    pub fn new(m: u64, alpha: Rational, beta: Rational, limit: Rational, f: F) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!(
                "modulus m = {m} must be at least 2"
            )));
        }
        if beta.abs() >= Rational::from(m) {
            return Err(Error::invalid(format!(
                "|beta| = {} must be below m = {m}",
                beta.abs()
            )));
        }
        if !f.eval(0).is_zero() {
            return Err(Error::invalid(format!(
                "counting function {:?} has F(0) != 0",
                f.description()
            )));
        }
        Ok(RecurrenceSpec {
            m,
            alpha,
            beta,
            limit,
            f,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// The hypothesised limit `D` of `F(N)/N`.
    pub fn limit(&self) -> &Rational {
        &self.limit
    }

    pub fn counting_function(&self) -> &F {
        &self.f
    }

    /// `G(N)`, walking the chain `N, ⌊N/m⌋, …, 0` from the bottom up.
    pub fn evaluate_g(&self, n: u64) -> Result<Rational> {
        check_cap("N", n, MAX_N)?;
        let mut chain = Vec::new();
        let mut k = n;
        while k > 0 {
            chain.push(k);
            k /= self.m;
        }
        let mut g = Rational::zero();
        for &k in chain.iter().rev() {
            g = &self.alpha * self.f.eval(k / self.m) + &self.beta * g;
        }
        Ok(g)
    }

    /// The expansion of `G(N)/N` after `j` substitutions: `j` F-terms
    /// followed by one remainder G-term. The values sum to `G(N)/N`.
    pub fn expand(&self, n: u64, j: u32) -> Result<Vec<ExpansionTerm>> {
        if n == 0 {
            return Err(Error::invalid("expansion needs N >= 1"));
        }
        if j == 0 {
            return Err(Error::invalid("expansion depth j must be at least 1"));
        }
        check_cap("N", n, MAX_N)?;

        let n_big = Rational::from(n);
        let m = Rational::from(self.m);
        let mut terms = Vec::with_capacity(j as usize + 1);
        let mut quotient = n;
        // m^i and β^(i-1) carried along the loop
        let mut m_pow = Rational::one();
        let mut beta_pow = Rational::one();
        for i in 1..=j {
            quotient /= self.m;
            m_pow *= &m;
            let scaled = &n_big / &m_pow;
            terms.push(ExpansionTerm {
                index: i,
                coefficient: &self.alpha * &beta_pow / &m_pow,
                ratio: self.f.eval(quotient) / &scaled,
                remainder: false,
            });
            beta_pow *= &self.beta;
        }
        let scaled = &n_big / &m_pow;
        terms.push(ExpansionTerm {
            index: j,
            coefficient: &beta_pow / &m_pow,
            ratio: self.evaluate_g(quotient)? / &scaled,
            remainder: true,
        });
        Ok(terms)
    }

    /// `Σ_{i≥1} α·β^(i−1)/m^i · F(⌊N/m^i⌋)/(N/m^i)`, truncated after the
    /// first index with `⌊N/m^i⌋ = 0` (`⌊log_m N⌋ + 1` terms).
    pub fn series_form(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(Error::invalid("series form needs N >= 1"));
        }
        check_cap("N", n, MAX_N)?;
        let n_big = Rational::from(n);
        let m = Rational::from(self.m);
        let mut sum = Rational::zero();
        let mut m_pow = Rational::one();
        let mut beta_pow = Rational::one();
        let mut quotient = n;
        while quotient > 0 {
            quotient /= self.m;
            m_pow *= &m;
            let coefficient = &self.alpha * &beta_pow / &m_pow;
            let ratio = self.f.eval(quotient) / (&n_big / &m_pow);
            sum += coefficient * ratio;
            beta_pow *= &self.beta;
        }
        Ok(sum)
    }

    /// `D·α/(m − β)`.
    pub fn predicted_limit(&self) -> Rational {
        &self.limit * &self.alpha / (Rational::from(self.m) - &self.beta)
    }

    /// `B·Σ_{i>k} |α·β^(i−1)/m^i| = B·|α|·|β|^k / (m^k·(m − |β|))`, an upper
    /// bound on the series contribution past index `k` when every ratio
    /// deviates from `D` by at most `B`.
    pub fn tail_bound(&self, k: u32, bound: &Rational) -> Result<Rational> {
        if bound.is_negative() {
            return Err(Error::invalid("deviation bound B must be nonnegative"));
        }
        let m = Rational::from(self.m);
        let beta_abs = self.beta.abs();
        Ok(bound * self.alpha.abs() * beta_abs.pow(k) / (m.pow(k) * (&m - &beta_abs)))
    }
}

/// `⌊log_m n⌋` for `n ≥ 1`.
pub fn floor_log(n: u64, m: u64) -> u32 {
    assert!(n >= 1 && m >= 2);
    let mut k = 0;
    let mut q = n;
    while q >= m {
        q /= m;
        k += 1;
    }
    k
}

/// `m^i` as a big integer.
pub fn big_pow(m: u64, i: u32) -> BigInt {
    num_traits::pow(BigInt::from(m), i as usize)
}
