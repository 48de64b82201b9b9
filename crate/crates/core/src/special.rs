//! Named series and combinatorial tables: degenerate exponentials, the
//! inner series `1 - e^{-t}` and `log(1 + t)`, Stirling numbers of both
//! kinds, multiple polylogarithms and the modified polyexponential.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, int_pow, Rational};
use crate::series::TruncatedSeries;

/// Multi-index `(k_1, ..., k_r)` selecting a polylogarithm or Bernoulli family.
///
/// Public constructors reject the empty vector. The empty index is reachable
/// only inside the crate, where it stands for the order-0 family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IndexVector(Vec<i64>);

impl IndexVector {
    pub fn new(ks: Vec<i64>) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidIndex("index vector must be non-empty".into()));
        }
        Ok(IndexVector(ks))
    }

    /// `(1, ..., 1)` with `r` entries.
    pub fn ones(r: usize) -> Result<Self> {
        Self::new(vec![1; r])
    }

    #[cfg(test)]
    pub(crate) fn empty() -> Self {
        IndexVector(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn ks(&self) -> &[i64] {
        &self.0
    }

    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&k| k == 1)
    }

    /// Copy with the last index replaced.
    pub(crate) fn with_last(&self, k: i64) -> Self {
        let mut v = self.0.clone();
        *v.last_mut().expect("non-empty index vector") = k;
        IndexVector(v)
    }

    /// Drop the last index; may produce the empty (order-0) index.
    pub(crate) fn without_last(&self) -> Self {
        IndexVector(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }
}

impl TryFrom<Vec<i64>> for IndexVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        IndexVector::new(v)
    }
}

impl From<IndexVector> for Vec<i64> {
    fn from(v: IndexVector) -> Self {
        v.0
    }
}

impl FromStr for IndexVector {
    type Err = Error;

    /// Comma-separated integers, e.g. `"1,-2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let ks = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidIndex(format!("bad index list {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IndexVector::new(ks)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn inv_factorial(n: usize) -> Rational {
    Rational::from_bigints(BigInt::one(), factorial(n as u64)).expect("n! > 0")
}

/// `e_lambda^x(t)`: coefficient `n` is `(x)_{n,lambda} / n!`. At `lambda = 0` this is `e^{xt}`.
pub fn degenerate_exp(x: &Rational, lambda: &Rational, order: usize) -> TruncatedSeries {
    let mut out = Vec::with_capacity(order + 1);
    let mut ff = Rational::one();
    let mut step = Rational::zero();
    for n in 0..=order {
        out.push(&ff * inv_factorial(n));
        ff *= &(x - &step);
        step += lambda;
    }
    TruncatedSeries::from_coeffs(out)
}

/// The classical exponential `e^{xt}`, built directly from `x^n / n!`.
pub fn exp_series(x: &Rational, order: usize) -> TruncatedSeries {
    let mut out = Vec::with_capacity(order + 1);
    let mut p = Rational::one();
    for n in 0..=order {
        out.push(&p * inv_factorial(n));
        p *= x;
    }
    TruncatedSeries::from_coeffs(out)
}

/// `1 - e^{-t}`.
pub fn one_minus_exp_neg(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::zero()
        } else if n % 2 == 1 {
            inv_factorial(n)
        } else {
            -inv_factorial(n)
        }
    })
}

/// `log(1 + t)`.
pub fn log1p_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::zero()
        } else {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            Rational::new(sign, n as i64).expect("n >= 1")
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StirlingKind {
    FirstUnsigned,
    FirstSigned,
    Second,
}

impl FromStr for StirlingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-unsigned" | "first_unsigned" => Ok(StirlingKind::FirstUnsigned),
            "first-signed" | "first_signed" => Ok(StirlingKind::FirstSigned),
            "second" => Ok(StirlingKind::Second),
            other => Err(Error::Usage(format!("unknown Stirling kind {other:?}"))),
        }
    }
}

/// Triangle `T[n][k]` for `0 <= k <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    kind: StirlingKind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind, max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let at = |k: usize| prev.get(k).cloned().unwrap_or_else(BigInt::zero);
            let row = (0..=n)
                .map(|k| {
                    let below = if k == 0 { BigInt::zero() } else { at(k - 1) };
                    match kind {
                        StirlingKind::Second => BigInt::from(k) * at(k) + below,
                        StirlingKind::FirstUnsigned => BigInt::from(n - 1) * at(k) + below,
                        // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
                        StirlingKind::FirstSigned => below - BigInt::from(n - 1) * at(k),
                    }
                })
                .collect();
            rows.push(row);
        }
        StirlingTable { kind, rows }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `T[n][k]`, zero for `k > n`. Panics if `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        self.rows[n].get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

/// Coefficients of `Li_{k_1,...,k_r}(x)`: the chain sums over `0 < n_1 < ... < n_r = n`
/// of `prod n_i^{-k_i}`, by prefix sums in `O(r N)`.
///
/// The empty index gives the constant series `1`.
pub fn multi_polylog(ks: &IndexVector, order: usize) -> TruncatedSeries {
    if ks.depth() == 0 {
        return TruncatedSeries::one(order);
    }
    // level[m] = A_j(m) for the current depth j; index 0 unused.
    let weight = |m: usize, k: i64| int_pow(m as i64, k).expect("m >= 1");
    let mut level: Vec<Rational> = (0..=order)
        .map(|m| if m == 0 { Rational::zero() } else { weight(m, ks.ks()[0]) })
        .collect();
    for &k in &ks.ks()[1..] {
        let mut next = vec![Rational::zero(); order + 1];
        let mut prefix = Rational::zero();
        for m in 1..=order {
            if !prefix.is_zero() {
                next[m] = &prefix * weight(m, k);
            }
            prefix += &level[m];
        }
        level = next;
    }
    TruncatedSeries::from_coeffs(level)
}

/// `Ei_k(x) = sum_{n>=1} x^n / ((n-1)! n^k)`.
pub fn polyexp_ei(k: i64, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::zero()
        } else {
            inv_factorial(n - 1) * int_pow(n as i64, k).expect("n >= 1")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn iv(v: &[i64]) -> IndexVector {
        IndexVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degenerate_exp_examples() {
        let s = degenerate_exp(&Rational::one(), &r(1, 2), 2);
        assert_eq!(s.coeffs(), &[r(1, 1), r(1, 1), r(1, 4)]);
        let z = degenerate_exp(&Rational::zero(), &r(3, 7), 5);
        assert_eq!(z, TruncatedSeries::one(5));
        let e = degenerate_exp(&Rational::one(), &Rational::zero(), 3);
        assert_eq!(e.coeffs(), &[r(1, 1), r(1, 1), r(1, 2), r(1, 6)]);
        assert_eq!(exp_series(&Rational::one(), 3), e);
    }

    #[test]
    fn inner_series() {
        let u = one_minus_exp_neg(4);
        assert_eq!(u.coeffs(), &[r(0, 1), r(1, 1), r(-1, 2), r(1, 6), r(-1, 24)]);
        let l = log1p_series(3);
        assert_eq!(l.coeffs(), &[r(0, 1), r(1, 1), r(-1, 2), r(1, 3)]);
        // exp(log(1+t)) = 1 + t
        let e = exp_series(&Rational::one(), 5);
        assert_eq!(e.compose(&log1p_series(5)).unwrap(), TruncatedSeries::from_fn(5, |n| {
            if n < 2 { Rational::one() } else { Rational::zero() }
        }));
    }

    #[test]
    fn stirling_examples() {
        let s2 = StirlingTable::new(StirlingKind::Second, 10);
        assert_eq!(s2.get(4, 2), BigInt::from(7));
        for n in 0..=10 {
            assert_eq!(s2.get(n, n), BigInt::one());
        }
        assert_eq!(s2.get(3, 5), BigInt::zero());
        let s1 = StirlingTable::new(StirlingKind::FirstUnsigned, 6);
        assert_eq!(s1.get(4, 2), BigInt::from(11));
        assert_eq!(s1.get(3, 1), BigInt::from(2));
        let signed = StirlingTable::new(StirlingKind::FirstSigned, 6);
        for n in 0..=6 {
            assert_eq!(signed.get(n, 0), if n == 0 { BigInt::one() } else { BigInt::zero() });
            for k in 0..=n {
                let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
                assert_eq!(signed.get(n, k), BigInt::from(sign) * s1.get(n, k));
            }
        }
    }

    #[test]
    fn stirling_second_matches_generating_function() {
        let order = 16;
        let s2 = StirlingTable::new(StirlingKind::Second, order);
        let em1 = exp_series(&Rational::one(), order).sub(&TruncatedSeries::one(order));
        for k in 0..=8usize {
            let gf = em1.pow(k).scale(&inv_factorial(k));
            for n in 0..=order {
                assert_eq!(gf.coeff(n), &(Rational::from(s2.get(n, k)) * inv_factorial(n)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn polylog_examples() {
        let li = multi_polylog(&iv(&[3]), 6);
        for n in 1..=6 {
            assert_eq!(li.coeff(n), &int_pow(n as i64, 3).unwrap());
        }
        assert_eq!(li.coeff(0), &Rational::zero());
        assert_eq!(multi_polylog(&iv(&[1, 1]), 5).coeff(3), &r(1, 2));
        let n = 9;
        assert_eq!(multi_polylog(&iv(&[0, 0]), n).coeff(n), &Rational::from(n as i64 - 1));
        let deep = multi_polylog(&iv(&[2, -1, 3, 0]), 10);
        for n in 0..4 {
            assert!(deep.coeff(n).is_zero());
        }
        assert!(!deep.coeff(4).is_zero());
        assert_eq!(multi_polylog(&IndexVector::empty(), 4), TruncatedSeries::one(4));
    }

    #[test]
    fn polyexp_examples() {
        let ei1 = polyexp_ei(1, 6);
        let em1 = exp_series(&Rational::one(), 6).sub(&TruncatedSeries::one(6));
        assert_eq!(ei1, em1);
        assert_eq!(polyexp_ei(2, 4).coeff(2), &r(1, 4));
        let ei0 = polyexp_ei(0, 5);
        assert_eq!(ei0.coeff(4), &r(1, 6));
        assert_eq!(ei0.coeff(0), &Rational::zero());
    }

    #[test]
    fn degenerate_exp_is_binomial_type() {
        let lambda = r(2, 5);
        let (x, y) = (r(1, 3), r(-4, 7));
        let lhs = degenerate_exp(&x, &lambda, 12).mul(&degenerate_exp(&y, &lambda, 12));
        assert_eq!(lhs, degenerate_exp(&(&x + &y), &lambda, 12));
    }

    #[test]
    fn index_vector_parsing() {
        assert_eq!("1,-2, 3".parse::<IndexVector>().unwrap(), iv(&[1, -2, 3]));
        assert!("".parse::<IndexVector>().is_err());
        assert!("1,,2".parse::<IndexVector>().is_err());
        assert!(IndexVector::new(vec![]).is_err());
        assert_eq!(iv(&[2, 1]).to_string(), "(2,1)");
        assert!(serde_json::from_str::<IndexVector>("[]").is_err());
    }
}
