//! Bernoulli-type families by coefficient extraction from their
//! exponential generating functions.
//!
//! Every family goes through the same pipeline: build the numerator series,
//! divide out the valuation, multiply by the inverted denominator and the
//! (degenerate) exponential, then convert coefficients to values by `n!`.
//! The `n!` scaling happens in exactly one place, [`SequenceResult::from_egf`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, falling_factorial, int_pow, Rational};
use crate::series::TruncatedSeries;
use crate::special::{
    degenerate_exp, exp_series, log1p_series, multi_polylog, one_minus_exp_neg, polyexp_ei,
    IndexVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `r! Li_{ks}(1 - e^{-t}) / (e_lambda(t) - 1)^r * e_lambda^x(t)`
    DegenMultiPoly,
    /// The `lambda = 0` case of [`Family::DegenMultiPoly`].
    MultiPoly,
    /// `Li_k(1 - e^{-t}) / (e^t - 1) * e^{xt}`
    Poly,
    /// `Ei_k(log(1 + t)) / (e^t - 1) * e^{xt}`
    Type2Poly,
    /// `(t / (e_lambda(t) - 1))^r * e_lambda^x(t)`
    Carlitz,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::DegenMultiPoly => "degen-multi-poly",
            Family::MultiPoly => "multi-poly",
            Family::Poly => "poly",
            Family::Type2Poly => "type2-poly",
            Family::Carlitz => "carlitz",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Family::DegenMultiPoly,
            Family::MultiPoly,
            Family::Poly,
            Family::Type2Poly,
            Family::Carlitz,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| Error::Usage(format!("unknown family {s:?}")))
    }
}

/// One computation: index vector, `lambda`, `x` and truncation order `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyQuery {
    pub ks: IndexVector,
    pub lambda: Rational,
    pub x: Rational,
    pub order: usize,
}

impl FamilyQuery {
    pub fn new(ks: IndexVector, lambda: Rational, x: Rational, order: usize) -> Self {
        FamilyQuery { ks, lambda, x, order }
    }
}

/// `values[n]` is the `n`-th number (or polynomial value at `x`) of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceResult {
    pub family: Family,
    pub ks: IndexVector,
    pub lambda: Rational,
    pub x: Rational,
    pub order: usize,
    pub values: Vec<Rational>,
}

impl SequenceResult {
    fn from_egf(family: Family, query: &FamilyQuery, egf: &TruncatedSeries) -> Self {
        debug_assert_eq!(egf.order(), query.order);
        let values = egf
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from(factorial(n as u64)))
            .collect();
        SequenceResult {
            family,
            ks: query.ks.clone(),
            lambda: query.lambda.clone(),
            x: query.x.clone(),
            order: query.order,
            values,
        }
    }

    pub fn query(&self) -> FamilyQuery {
        FamilyQuery::new(self.ks.clone(), self.lambda.clone(), self.x.clone(), self.order)
    }

    /// Two-column `n,value` table with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }
}

/// `((e_lambda(t) - 1) / t)^r` inverted, at the given order.
fn degenerate_bernoulli_kernel(lambda: &Rational, r: usize, order: usize) -> TruncatedSeries {
    let e = degenerate_exp(&Rational::one(), lambda, order + 1);
    let quotient = e
        .sub(&TruncatedSeries::one(order + 1))
        .div_tpow(1)
        .expect("e_lambda(t) - 1 has zero constant term");
    quotient
        .pow(r)
        .invert()
        .expect("(e_lambda(t) - 1)/t has constant term 1")
}

/// Generating function of the degenerate multi-poly-Bernoulli family at order `order`.
///
/// Accepts the empty index, whose family is `e_lambda^x(t)`.
pub(crate) fn degen_multi_poly_egf(
    ks: &IndexVector,
    lambda: &Rational,
    x: &Rational,
    order: usize,
) -> Result<TruncatedSeries> {
    let r = ks.depth();
    let li = multi_polylog(ks, order + r);
    let numerator = li.compose(&one_minus_exp_neg(order + r))?.div_tpow(r)?;
    let numerator = numerator.scale(&Rational::from(factorial(r as u64)));
    Ok(numerator
        .mul(&degenerate_bernoulli_kernel(lambda, r, order))
        .mul(&degenerate_exp(x, lambda, order)))
}

pub fn degen_multi_poly_bernoulli(query: &FamilyQuery) -> Result<SequenceResult> {
    let egf = degen_multi_poly_egf(&query.ks, &query.lambda, &query.x, query.order)?;
    Ok(SequenceResult::from_egf(Family::DegenMultiPoly, query, &egf))
}

/// Higher-order degenerate Bernoulli polynomials `beta_{n,lambda}^{(r)}(x)`.
pub fn carlitz_degenerate(
    r: usize,
    lambda: &Rational,
    x: &Rational,
    order: usize,
) -> Result<SequenceResult> {
    let query = FamilyQuery::new(IndexVector::ones(r)?, lambda.clone(), x.clone(), order);
    let egf = degenerate_bernoulli_kernel(lambda, r, order).mul(&degenerate_exp(x, lambda, order));
    Ok(SequenceResult::from_egf(Family::Carlitz, &query, &egf))
}

pub fn multi_poly_bernoulli(ks: &IndexVector, x: &Rational, order: usize) -> Result<SequenceResult> {
    let query = FamilyQuery::new(ks.clone(), Rational::zero(), x.clone(), order);
    let egf = degen_multi_poly_egf(ks, &Rational::zero(), x, order)?;
    Ok(SequenceResult::from_egf(Family::MultiPoly, &query, &egf))
}

pub fn poly_bernoulli(k: i64, x: &Rational, order: usize) -> Result<SequenceResult> {
    let ks = IndexVector::new(vec![k])?;
    let query = FamilyQuery::new(ks.clone(), Rational::zero(), x.clone(), order);
    let egf = degen_multi_poly_egf(&ks, &Rational::zero(), x, order)?;
    Ok(SequenceResult::from_egf(Family::Poly, &query, &egf))
}

/// Type-2 poly-Bernoulli polynomials, built on the classical exponential.
pub fn type2_poly_bernoulli(k: i64, x: &Rational, order: usize) -> Result<SequenceResult> {
    let ks = IndexVector::new(vec![k])?;
    let query = FamilyQuery::new(ks, Rational::zero(), x.clone(), order);
    let numerator = polyexp_ei(k, order + 1)
        .compose(&log1p_series(order + 1))?
        .div_tpow(1)?;
    let denominator = exp_series(&Rational::one(), order + 1)
        .sub(&TruncatedSeries::one(order + 1))
        .div_tpow(1)?
        .invert()?;
    let egf = numerator.mul(&denominator).mul(&exp_series(x, order));
    Ok(SequenceResult::from_egf(Family::Type2Poly, &query, &egf))
}

/// `beta_{0,lambda}^{(ks)} = r! / (1^{k_1} 2^{k_2} ... r^{k_r})`.
pub fn leading_value(ks: &IndexVector) -> Rational {
    ks.ks()
        .iter()
        .enumerate()
        .fold(Rational::from(factorial(ks.depth() as u64)), |acc, (i, &k)| {
            acc * int_pow(i as i64 + 1, k).expect("i + 1 >= 1")
        })
}

/// One term `coeff * (x)_{degree,lambda}` of a falling-factorial expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FallingFactorialTerm {
    pub coeff: Rational,
    pub degree: usize,
}

/// Expansion of `beta_{n,lambda}^{(ks)}(x)` in the basis `(x)_{m,lambda}`:
/// the terms `C(n,l) beta_{l,lambda}^{(ks)} (x)_{n-l,lambda}` for `l = 0..=n`.
pub fn falling_factorial_expansion(
    ks: &IndexVector,
    lambda: &Rational,
    n: usize,
) -> Result<Vec<FallingFactorialTerm>> {
    let numbers =
        degen_multi_poly_bernoulli(&FamilyQuery::new(ks.clone(), lambda.clone(), Rational::zero(), n))?;
    Ok((0..=n)
        .map(|l| FallingFactorialTerm {
            coeff: Rational::from(binomial(n as i64, l as u64)) * &numbers.values[l],
            degree: n - l,
        })
        .collect())
}

/// Evaluate a falling-factorial expansion at `x`.
pub fn evaluate_expansion(terms: &[FallingFactorialTerm], x: &Rational, lambda: &Rational) -> Rational {
    terms
        .iter()
        .map(|t| &t.coeff * falling_factorial(x, lambda, t.degree))
        .sum()
}

pub(crate) fn binom_rat(n: usize, k: usize) -> Rational {
    Rational::from(binomial(n as i64, k as u64))
}
