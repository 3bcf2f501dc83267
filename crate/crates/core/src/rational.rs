//! Exact arbitrary-precision rationals.
//!
//! [`Rational`] wraps [`num_rational::BigRational`], which keeps every value
//! in lowest terms with a positive denominator after each operation.
//! [`RationalSum`] is a cheaper accumulator for long sums of small fractions
//! that only reduces on demand.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact fraction in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `numer / denom`; fails when `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::invalid("rational with zero denominator"));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// `numer / denom` for machine integers. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("reciprocal of zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest integer, ties rounded away from zero.
    pub fn round(&self) -> BigInt {
        self.0.round().to_integer()
    }

    /// Nearest `f64` (correctly rounded); infinite values saturate.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational::from_integer(BigInt::from(n))
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0.$assign(rhs.0);
            }
        }
        impl<'a> $assign_trait<&'a Rational> for Rational {
            fn $assign(&mut self, rhs: &'a Rational) {
                self.0.$assign(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

// Division by zero panics, matching the integer types; use `recip` for a checked path.
impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}
impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 / &rhs.0)
    }
}
impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(&self.0 / rhs.0)
    }
}
impl<'b> Div<&'b Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &'b Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Parses `a/b`, plain integers, and decimal literals with an optional
/// exponent (`1e7`, `2.5`, `-3.25e-2`). Decimal literals convert exactly.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse {s:?} as a rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }

        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
        let shift = exponent - frac_part.len() as i32;
        let ten = Rational::from(10u32);
        if shift >= 0 {
            value *= ten.pow(shift as u32);
        } else {
            value = value / ten.pow(shift.unsigned_abs());
        }
        Ok(if negative { -value } else { value })
    }
}

/// Running sum of fractions `a/b` with small denominators.
///
/// Keeps `numer / denom` with `denom` the lcm of every denominator seen so
/// far; each addition costs one big-by-small gcd and multiply rather than a
/// full big-integer gcd. Call [`RationalSum::value`] to reduce.
#[derive(Clone, Debug)]
pub struct RationalSum {
    numer: BigInt,
    denom: BigUint,
}

impl Default for RationalSum {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalSum {
    pub fn new() -> Self {
        RationalSum {
            numer: BigInt::zero(),
            denom: BigUint::one(),
        }
    }

    /// Adds `numer / denom`. Panics on a zero denominator.
    pub fn add_ratio(&mut self, numer: i64, denom: u64) {
        assert!(denom != 0, "zero denominator");
        let rem = (&self.denom % denom)
            .to_u64()
            .expect("remainder below a u64");
        let g = rem.gcd(&denom);
        let scale = denom / g;
        if scale != 1 {
            self.denom *= scale;
            self.numer *= scale;
        }
        let factor = &self.denom / denom;
        self.numer += BigInt::from_biguint(Sign::Plus, factor) * numer;
    }

    pub fn add_sum(&mut self, other: &RationalSum) {
        let g = self.denom.gcd(&other.denom);
        let lcm = &self.denom / &g * &other.denom;
        let left = BigInt::from_biguint(Sign::Plus, &lcm / &self.denom);
        let right = BigInt::from_biguint(Sign::Plus, &lcm / &other.denom);
        self.numer = &self.numer * left + &other.numer * right;
        self.denom = lcm;
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn value(&self) -> Rational {
        Rational(BigRational::new(
            self.numer.clone(),
            BigInt::from_biguint(Sign::Plus, self.denom.clone()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_after_arithmetic() {
        let a = Rational::ratio(2, 4);
        assert_eq!(a.numer(), &BigInt::from(1));
        assert_eq!(a.denom(), &BigInt::from(2));
        let b = Rational::ratio(3, -9);
        assert_eq!(b.numer(), &BigInt::from(-1));
        assert_eq!(b.denom(), &BigInt::from(3));
        let c = &a + &b;
        assert_eq!(c, Rational::ratio(1, 6));
        assert_eq!((c.clone() - c).denom(), &BigInt::from(1));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rational::new(1, 0).is_err());
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::ratio(1, 2));
        assert_eq!(
            "1e7".parse::<Rational>().unwrap(),
            Rational::from(10_000_000u64)
        );
        assert_eq!("2.5".parse::<Rational>().unwrap(), Rational::ratio(5, 2));
        assert_eq!(
            "-3.25e-2".parse::<Rational>().unwrap(),
            Rational::ratio(-13, 400)
        );
        assert_eq!(".5".parse::<Rational>().unwrap(), Rational::ratio(1, 2));
        assert_eq!("-1".parse::<Rational>().unwrap(), Rational::from(-1));
        for bad in ["", "e5", "1/0", "abc", "1.2.3", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_and_round() {
        assert_eq!(Rational::ratio(4, 10).to_string(), "2/5");
        assert_eq!(Rational::from(7).to_string(), "7");
        assert_eq!(Rational::ratio(5, 2).round(), BigInt::from(3));
        assert_eq!(Rational::ratio(-5, 2).floor(), BigInt::from(-3));
        assert_eq!(Rational::ratio(1, 3).to_f64(), 1.0 / 3.0);
    }

    #[test]
    fn rational_sum_matches_direct_sum() {
        let mut acc = RationalSum::new();
        let mut direct = Rational::zero();
        for n in 1..=200i64 {
            let d = (n % 17 + 1) as u64;
            acc.add_ratio(n - 100, d);
            direct += Rational::ratio(n - 100, d as i64);
        }
        assert_eq!(acc.value(), direct);

        let mut other = RationalSum::new();
        other.add_ratio(1, 1_000_003);
        acc.add_sum(&other);
        assert_eq!(acc.value(), direct + Rational::ratio(1, 1_000_003));
    }
}
