//! Exact rational numbers over arbitrary-precision integers.
//!
//! [`Rational`] is always kept in canonical form: positive denominator,
//! numerator and denominator coprime, zero stored as `0/1`. The text form
//! is `"p/q"` with the sign carried on `p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Canonical `p/q`. Fails on `q = 0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        Self::from_bigints(BigInt::from(p), BigInt::from(q))
    }

    pub fn from_bigints(p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(p, q)))
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// `self^e` for any integer exponent; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let magnitude = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::Usage(format!("exponent {e} out of range")))?;
        let positive = Rational(num_traits::pow(self.0.clone(), magnitude as usize));
        if e >= 0 {
            Ok(positive)
        } else {
            positive.recip()
        }
    }

    /// Lossy conversion, only for reporting.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering in scientific notation with `digits` significant
    /// digits, rounded half-to-even. Zero renders as `"0"`.
    pub fn to_sci_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let num = self.numer().abs();
        let den = self.denom().clone();
        let ten = BigInt::from(10u32);

        // Estimate the decimal exponent of num/den, then correct it.
        let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
        let value_ge_pow10 = |e: i64| -> bool {
            if e >= 0 {
                num >= &den * num_traits::pow(ten.clone(), e as usize)
            } else {
                &num * num_traits::pow(ten.clone(), (-e) as usize) >= den
            }
        };
        while !value_ge_pow10(exp) {
            exp -= 1;
        }
        while value_ge_pow10(exp + 1) {
            exp += 1;
        }

        // scaled = num/den * 10^(digits-1-exp), an integer with `digits` digits after rounding.
        let shift = digits as i64 - 1 - exp;
        let (n, d) = if shift >= 0 {
            (&num * num_traits::pow(ten.clone(), shift as usize), den)
        } else {
            (num.clone(), &den * num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let (mut q, r) = n.div_rem(&d);
        let twice = &r * 2;
        if twice > d || (twice == d && q.is_odd()) {
            q += 1;
        }
        let mut text = q.to_string();
        if text.len() > digits {
            // Rounding carried into a new digit (e.g. 9.99.. -> 10.0..).
            exp += 1;
            text.truncate(digits);
        }
        let (head, tail) = text.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

/// `base^(-k)`: the chain-sum weight `1/n^k`, exact for any integer `k`.
pub fn int_pow(base: i64, k: i64) -> Result<Rational> {
    if base <= 0 {
        return Err(Error::NonPositiveBase(base));
    }
    Rational::from_integer(base).pow(-k)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient with an arbitrary integer upper index,
/// `C(a, m) = a (a-1) ... (a-m+1) / m!`.
pub fn binomial(a: i64, m: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= BigInt::from(a) - BigInt::from(i);
    }
    acc / factorial(m)
}

/// The lambda-falling factorial `x (x - lambda) ... (x - (n-1) lambda)`; `1` when `n = 0`.
pub fn falling_factorial(x: &Rational, lambda: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut step = Rational::zero();
    for _ in 0..n {
        acc *= &(x - &step);
        step += lambda;
    }
    acc
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            if t.is_empty() {
                return Err(bad());
            }
            BigInt::from_str(t).map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                Rational::from_bigints(parse_int(p)?, q)
            }
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $Assign:ident, $assign:ident) => {
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $Trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $Trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $Trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $Assign<&'a Rational> for Rational {
            fn $assign(&mut self, rhs: &'a Rational) {
                self.0.$assign(&rhs.0);
            }
        }
        impl $Assign<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0.$assign(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

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

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}
