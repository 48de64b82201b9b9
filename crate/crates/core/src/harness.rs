//! Machine checks of the identities satisfied by the degenerate
//! multi-poly-Bernoulli family.
//!
//! Finitary identities are compared with exact rational equality. The two
//! explicit formulas carrying an infinite `m`-sum are exact only when the last
//! index `k_r <= 0` (the binomial factor then terminates); for `k_r >= 1` they
//! are reported as partial-sum diagnostics with residuals per truncation `M`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bernoulli::{
    binom_rat, carlitz_degenerate, degen_multi_poly_bernoulli, degen_multi_poly_egf,
    evaluate_expansion, falling_factorial_expansion, FamilyQuery,
};
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, falling_factorial, int_pow, Rational};
use crate::series::TruncatedSeries;
use crate::special::{
    degenerate_exp, log1p_series, multi_polylog, IndexVector, StirlingKind, StirlingTable,
};

/// Significant digits used when rendering residuals.
pub const RESIDUAL_DIGITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// Falling-factorial expansion of the polynomials in terms of the numbers,
    /// plus the all-ones reduction to the higher-order degenerate Bernoulli polynomials.
    Prop1,
    /// `Li_{1,...,1}(x) = (-1)^r/r! log(1-x)^r = sum |S1(l,r)| x^l/l!`.
    LiOnes,
    /// Derivative and integral recurrences of multiple polylogarithms.
    Deriv,
    /// Chain-sum and Stirling expansion of the generating function.
    Eq18,
    /// Explicit formula with the `m`-sum from the binomial series.
    Thm2,
    /// Difference `beta(x+1) - beta(x)` formula.
    Thm4,
    /// `beta_n(x+y) = sum C(n,l) beta_l(x) (y)_{n-l,lambda}`.
    Addition,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::Prop1,
        Identity::LiOnes,
        Identity::Deriv,
        Identity::Eq18,
        Identity::Thm2,
        Identity::Thm4,
        Identity::Addition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Prop1 => "prop1",
            Identity::LiOnes => "li-ones",
            Identity::Deriv => "deriv",
            Identity::Eq18 => "eq18",
            Identity::Thm2 => "thm2",
            Identity::Thm4 => "thm4",
            Identity::Addition => "addition",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Diagnostic,
}

/// Parameters echoed into a report. Unused ones are omitted from JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ks: Option<IndexVector>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<Rational>,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    /// Which sub-identity this row belongs to, e.g. `"eq16"`.
    pub check: String,
    pub n: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

impl Row {
    fn new(check: &str, n: usize, lhs: Rational, rhs: Rational) -> Self {
        let equal = lhs == rhs;
        Row { check: check.to_string(), n, lhs, rhs, equal }
    }
}

/// `|lhs - rhs|` at order `n` after summing `m = 0..=M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub residual: Rational,
    pub residual_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub params: Params,
    pub status: Status,
    pub rows: Vec<Row>,
    pub residuals: Vec<Residual>,
}

impl VerificationReport {
    fn exact(identity: Identity, params: Params, rows: Vec<Row>) -> Self {
        let status = if rows.iter().all(|r| r.equal) { Status::Pass } else { Status::Fail };
        VerificationReport { identity, params, status, rows, residuals: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn egf_values(s: &TruncatedSeries) -> Vec<Rational> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Rational::from(factorial(n as u64)))
        .collect()
}

fn family_values(ks: &IndexVector, lambda: &Rational, x: &Rational, order: usize) -> Result<Vec<Rational>> {
    Ok(egf_values(&degen_multi_poly_egf(ks, lambda, x, order)?))
}

/// Exact check of the falling-factorial expansion and, for an all-ones
/// index, of the reduction to `carlitz_degenerate`.
pub fn verify_prop1(ks: &IndexVector, lambda: &Rational, x: &Rational, order: usize) -> Result<VerificationReport> {
    let polys = degen_multi_poly_bernoulli(&FamilyQuery::new(ks.clone(), lambda.clone(), x.clone(), order))?;
    let mut rows = Vec::new();
    for n in 0..=order {
        let terms = falling_factorial_expansion(ks, lambda, n)?;
        rows.push(Row::new("eq16", n, polys.values[n].clone(), evaluate_expansion(&terms, x, lambda)));
    }
    if ks.is_all_ones() {
        let carlitz = carlitz_degenerate(ks.depth(), lambda, x, order)?;
        for n in 0..=order {
            rows.push(Row::new("eq17", n, polys.values[n].clone(), carlitz.values[n].clone()));
        }
    }
    let params = Params {
        ks: Some(ks.clone()),
        lambda: Some(lambda.clone()),
        x: Some(x.clone()),
        order,
        ..Params::default()
    };
    Ok(VerificationReport::exact(Identity::Prop1, params, rows))
}

/// Three-way check of `Li_{1,...,1}` (r ones): chain-sum recurrence, power of
/// `log(1-x)`, and unsigned Stirling numbers of the first kind.
pub fn verify_li_ones(r: usize, order: usize) -> Result<VerificationReport> {
    let ks = IndexVector::ones(r)?;
    let dp = multi_polylog(&ks, order);
    let neg_x = TruncatedSeries::monomial(1, order).neg();
    let log_one_minus = log1p_series(order).compose(&neg_x)?;
    let sign = if r.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let scale = sign * Rational::from_bigints(1.into(), factorial(r as u64))?;
    let log_power = log_one_minus.pow(r).scale(&scale);
    let s1 = StirlingTable::new(StirlingKind::FirstUnsigned, order);

    let mut rows = Vec::new();
    for n in 0..=order {
        rows.push(Row::new("chain-vs-log", n, dp.coeff(n).clone(), log_power.coeff(n).clone()));
    }
    for n in 0..=order {
        let stirling = Rational::from_bigints(s1.get(n, r), factorial(n as u64))?;
        rows.push(Row::new("chain-vs-stirling", n, dp.coeff(n).clone(), stirling));
    }
    let params = Params { r: Some(r), order, ..Params::default() };
    Ok(VerificationReport::exact(Identity::LiOnes, params, rows))
}

/// `x Li'_{ks} = Li_{k_1,...,k_r - 1}` for any index; when `r >= 2` and
/// `k_r = 1`, also `(1-x) Li'_{ks} = Li_{k_1,...,k_{r-1}}` and its integrated form.
pub fn verify_deriv_recurrences(ks: &IndexVector, order: usize) -> Result<VerificationReport> {
    if order == 0 {
        return Err(Error::Usage("derivative checks need order >= 1".into()));
    }
    let r = ks.depth();
    let k_last = ks.last().ok_or_else(|| Error::Usage("empty index vector".into()))?;
    let li = multi_polylog(ks, order);
    let d = li.derive();

    let mut rows = Vec::new();
    let lhs10 = d.mul_tpow(1);
    let rhs10 = multi_polylog(&ks.with_last(k_last - 1), order - 1);
    for n in 0..order {
        rows.push(Row::new("eq10", n, lhs10.coeff(n).clone(), rhs10.coeff(n).clone()));
    }

    if r >= 2 && k_last == 1 {
        let prefix = ks.without_last();
        let one_minus_x = TruncatedSeries::one(order - 1).sub(&TruncatedSeries::monomial(1, order - 1));
        let lhs11 = one_minus_x.mul(&d);
        let rhs11 = multi_polylog(&prefix, order - 1);
        for n in 0..order {
            rows.push(Row::new("eq11", n, lhs11.coeff(n).clone(), rhs11.coeff(n).clone()));
        }
        let integrated = rhs11.mul(&one_minus_x.invert()?).integrate();
        for n in 0..=order {
            rows.push(Row::new("eq12", n, li.coeff(n).clone(), integrated.coeff(n).clone()));
        }
    }
    let params = Params { ks: Some(ks.clone()), order, ..Params::default() };
    Ok(VerificationReport::exact(Identity::Deriv, params, rows))
}

/// `(1 - e^{-t})^m = m! sum_{l>=m} (-1)^{l-m} S2(l,m) t^l / l!`, from the table.
fn one_minus_exp_neg_power(m: usize, s2: &StirlingTable, order: usize) -> TruncatedSeries {
    let mf = Rational::from(factorial(m as u64));
    TruncatedSeries::from_fn(order, |l| {
        if l < m {
            return Rational::zero();
        }
        let sign = if (l - m).is_multiple_of(2) { 1 } else { -1 };
        Rational::from_bigints(s2.get(l, m) * sign, factorial(l as u64)).expect("l! > 0") * &mf
    })
}

/// Sum of `prod n_i^{-k_i}` over every chain `0 < n_1 < ... < n_d = end`, by
/// direct enumeration. An empty index has the single empty chain ending at 0.
fn chain_weight_by_enumeration(ks: &[i64], end: usize) -> Rational {
    fn go(ks: &[i64], upper: usize) -> Rational {
        // ks[..] are assigned to values strictly below `upper`, last one largest.
        match ks.split_last() {
            None => Rational::one(),
            Some((&k, rest)) => (rest.len() + 1..upper)
                .map(|v| int_pow(v as i64, k).expect("v >= 1") * go(rest, v))
                .sum(),
        }
    }
    match ks.split_last() {
        None => {
            if end == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        Some((&k, rest)) => {
            if end == 0 {
                return Rational::zero();
            }
            int_pow(end as i64, k).expect("end >= 1") * go(rest, end)
        }
    }
}

/// Exact per-order comparison of the generating-function pipeline with the
/// chain-sum form in which the innermost sum is shifted by `n_{r-1}` and
/// every power of `1 - e^{-t}` is expanded through Stirling numbers of the
/// second kind.
pub fn verify_eq18(ks: &IndexVector, lambda: &Rational, x: &Rational, order: usize) -> Result<VerificationReport> {
    let r = ks.depth();
    if r < 2 {
        return Err(Error::Usage("eq18 needs an index vector of length >= 2".into()));
    }
    let big = order + r;
    let k_last = ks.last().expect("r >= 2");
    let prefix = &ks.ks()[..r - 1];
    let s2 = StirlingTable::new(StirlingKind::Second, big);

    // numerator = sum_j W(j) u^j sum_{p>=1} u^p / (p + j)^{k_r}, u = 1 - e^{-t}.
    let mut numerator = TruncatedSeries::zero(big);
    for j in (r - 1)..big {
        let w = chain_weight_by_enumeration(prefix, j);
        if w.is_zero() {
            continue;
        }
        let mut inner = TruncatedSeries::zero(big);
        for p in 1..=(big - j) {
            let coeff = int_pow((p + j) as i64, k_last)?;
            inner = inner.add(&one_minus_exp_neg_power(p, &s2, big).scale(&coeff));
        }
        let term = one_minus_exp_neg_power(j, &s2, big).mul(&inner).scale(&w);
        numerator = numerator.add(&term);
    }

    let e_minus_one = degenerate_exp(&Rational::one(), lambda, big).sub(&TruncatedSeries::one(big));
    let denominator = e_minus_one.pow(r).div_tpow(r)?.invert()?;
    let rhs_egf = numerator
        .div_tpow(r)?
        .scale(&Rational::from(factorial(r as u64)))
        .mul(&denominator)
        .mul(&degenerate_exp(x, lambda, order));
    let rhs = egf_values(&rhs_egf);
    let lhs = degen_multi_poly_bernoulli(&FamilyQuery::new(ks.clone(), lambda.clone(), x.clone(), order))?;

    let rows = (0..=order)
        .map(|n| Row::new("eq18", n, lhs.values[n].clone(), rhs[n].clone()))
        .collect();
    let params = Params {
        ks: Some(ks.clone()),
        lambda: Some(lambda.clone()),
        x: Some(x.clone()),
        order,
        ..Params::default()
    };
    Ok(VerificationReport::exact(Identity::Eq18, params, rows))
}

/// Terms of the binomial expansion of `(p + j)^{-k}` in powers of `j`:
/// `(m, c_m, e_m)` with `(p + j)^{-k} = sum_m c_m p^{-e_m} j^m`.
///
/// For `k <= 0` the sum is finite, `m = 0..=-k`, with `c_m = C(-k, m)`.
/// For `k >= 1` the series is infinite; terms `m = 0..=truncate` are returned
/// with `c_m = (-1)^m C(k+m-1, m)`.
fn binomial_series_terms(k: i64, truncate: usize) -> Vec<(usize, Rational, i64)> {
    if k <= 0 {
        let top = (-k) as u64;
        (0..=top as usize)
            .map(|m| (m, Rational::from(binomial(-k, m as u64)), k + m as i64))
            .collect()
    } else {
        (0..=truncate)
            .map(|m| {
                let c = Rational::from(binomial(k + m as i64 - 1, m as u64));
                let c = if m % 2 == 0 { c } else { -c };
                (m, c, k + m as i64)
            })
            .collect()
    }
}

/// The infinite-sum identities are exact only when the binomial series terminates.
fn is_finite_branch(ks: &IndexVector) -> bool {
    ks.last().is_some_and(|k| k <= 0)
}

fn check_theorem_preconditions(ks: &IndexVector, name: &str) -> Result<()> {
    if ks.depth() < 2 {
        return Err(Error::Usage(format!("{name} needs an index vector of length >= 2")));
    }
    Ok(())
}

/// Lower-depth family `(k_1, ..., k_{r-2}, k_{r-1} - m)` evaluated at `x`.
fn shifted_family(ks: &IndexVector, m: usize, lambda: &Rational, x: &Rational, order: usize) -> Result<Vec<Rational>> {
    let prefix = ks.without_last();
    let k_prev = prefix.last().expect("depth >= 2");
    family_values(&prefix.with_last(k_prev - m as i64), lambda, x, order)
}

struct PartialSums {
    rows: Vec<Row>,
    residuals: Vec<Residual>,
    status: Status,
}

/// Accumulate `term(m)` over the binomial-series terms and compare with `lhs`.
fn partial_sum_check(
    check: &str,
    first_n: usize,
    lhs: &[Rational],
    finite: bool,
    terms: Vec<Vec<Rational>>,
) -> PartialSums {
    let len = lhs.len();
    let mut partial = vec![Rational::zero(); len];
    let mut residuals = Vec::new();
    for (m, term) in terms.iter().enumerate() {
        for i in 0..len {
            partial[i] += &term[i];
        }
        if !finite {
            for i in 0..len {
                let residual = (&lhs[i] - &partial[i]).abs();
                residuals.push(Residual {
                    n: first_n + i,
                    m,
                    residual_decimal: residual.to_sci_decimal(RESIDUAL_DIGITS),
                    residual,
                });
            }
        }
    }
    // Residuals in ascending (n, M).
    residuals.sort_by_key(|r| (r.n, r.m));
    let rows: Vec<Row> = (0..len)
        .map(|i| Row::new(check, first_n + i, lhs[i].clone(), partial[i].clone()))
        .collect();
    let status = if !finite {
        Status::Diagnostic
    } else if rows.iter().all(|r| r.equal) {
        Status::Pass
    } else {
        Status::Fail
    };
    PartialSums { rows, residuals, status }
}

/// Explicit formula for `beta_{n,lambda}^{(ks)}(x)` through the Carlitz
/// numbers, Stirling numbers of the second kind, and the lower-depth family
/// with last index `k_{r-1} - m`.
///
/// Exact when `k_r <= 0`. Otherwise the `m`-sum is truncated at
/// `truncate` and the report carries the residual of every partial sum.
pub fn verify_thm2(
    ks: &IndexVector,
    lambda: &Rational,
    x: &Rational,
    order: usize,
    truncate: usize,
) -> Result<VerificationReport> {
    check_theorem_preconditions(ks, "thm2")?;
    let r = ks.depth();
    let k_last = ks.last().expect("depth >= 2");
    let lhs = degen_multi_poly_bernoulli(&FamilyQuery::new(ks.clone(), lambda.clone(), x.clone(), order))?.values;
    let carlitz = carlitz_degenerate(1, lambda, &Rational::zero(), order)?.values;
    let s2 = StirlingTable::new(StirlingKind::Second, order + 1);
    let finite = is_finite_branch(ks);
    let r_rat = Rational::from(r as i64);

    let mut terms = Vec::new();
    for (m, c_m, exponent) in binomial_series_terms(k_last, truncate) {
        // a_l = sum_{p=1}^{l+1} p! (-1)^{l-p-1} S2(l+1,p) / (l+1) * p^{-exponent}
        let a: Vec<Rational> = (0..=order)
            .map(|l| {
                let s: Rational = (1..=l + 1)
                    .map(|p| {
                        let sign: i64 = if (l + 1 - p) % 2 == 0 { 1 } else { -1 };
                        Rational::from(factorial(p as u64) * s2.get(l + 1, p) * sign)
                            * int_pow(p as i64, exponent).expect("p >= 1")
                    })
                    .sum();
                s * Rational::new(1, l as i64 + 1).expect("l + 1 >= 1")
            })
            .collect();
        let lower = shifted_family(ks, m, lambda, x, order)?;
        let inner: Vec<Rational> = (0..=order)
            .map(|k| (0..=k).map(|l| binom_rat(k, l) * &a[l] * &lower[k - l]).sum())
            .collect();
        let scale = &r_rat * &c_m;
        let term: Vec<Rational> = (0..=order)
            .map(|n| {
                let s: Rational = (0..=n).map(|k| binom_rat(n, k) * &carlitz[n - k] * &inner[k]).sum();
                s * &scale
            })
            .collect();
        terms.push(term);
    }

    let sums = partial_sum_check("thm2", 0, &lhs, finite, terms);
    let params = Params {
        ks: Some(ks.clone()),
        lambda: Some(lambda.clone()),
        x: Some(x.clone()),
        order,
        truncate: Some(truncate),
        ..Params::default()
    };
    Ok(VerificationReport {
        identity: Identity::Thm2,
        params,
        status: sums.status,
        rows: sums.rows,
        residuals: sums.residuals,
    })
}

/// Difference formula for `(beta_n(x+1) - beta_n(x)) / r`, `n = 1..=order`.
/// Exact when `k_r <= 0`; a partial-sum diagnostic otherwise.
pub fn verify_thm4(
    ks: &IndexVector,
    lambda: &Rational,
    x: &Rational,
    order: usize,
    truncate: usize,
) -> Result<VerificationReport> {
    check_theorem_preconditions(ks, "thm4")?;
    if order == 0 {
        return Err(Error::Usage("thm4 holds for n >= 1; order must be >= 1".into()));
    }
    let r = ks.depth();
    let k_last = ks.last().expect("depth >= 2");
    let query = |at: Rational| FamilyQuery::new(ks.clone(), lambda.clone(), at, order);
    let shifted = degen_multi_poly_bernoulli(&query(x + Rational::one()))?.values;
    let base = degen_multi_poly_bernoulli(&query(x.clone()))?.values;
    let inv_r = Rational::new(1, r as i64)?;
    let lhs: Vec<Rational> = (1..=order).map(|n| (&shifted[n] - &base[n]) * &inv_r).collect();
    let s2 = StirlingTable::new(StirlingKind::Second, order);
    let finite = is_finite_branch(ks);

    let mut terms = Vec::new();
    for (m, c_m, exponent) in binomial_series_terms(k_last, truncate) {
        // b_l = sum_{p=1}^{l} p^{-exponent} p! (-1)^{l-p} S2(l,p)
        let b: Vec<Rational> = (0..=order)
            .map(|l| {
                (1..=l)
                    .map(|p| {
                        let sign: i64 = if (l - p) % 2 == 0 { 1 } else { -1 };
                        Rational::from(factorial(p as u64) * s2.get(l, p) * sign)
                            * int_pow(p as i64, exponent).expect("p >= 1")
                    })
                    .sum()
            })
            .collect();
        let lower = shifted_family(ks, m, lambda, x, order)?;
        let term: Vec<Rational> = (1..=order)
            .map(|n| {
                let s: Rational = (1..=n).map(|l| binom_rat(n, l) * &b[l] * &lower[n - l]).sum();
                s * &c_m
            })
            .collect();
        terms.push(term);
    }

    let sums = partial_sum_check("thm4", 1, &lhs, finite, terms);
    let params = Params {
        ks: Some(ks.clone()),
        lambda: Some(lambda.clone()),
        x: Some(x.clone()),
        order,
        truncate: Some(truncate),
        ..Params::default()
    };
    Ok(VerificationReport {
        identity: Identity::Thm4,
        params,
        status: sums.status,
        rows: sums.rows,
        residuals: sums.residuals,
    })
}

/// `beta_n(x+y) = sum_l C(n,l) beta_l(x) (y)_{n-l,lambda}`.
pub fn verify_addition(
    ks: &IndexVector,
    lambda: &Rational,
    x: &Rational,
    y: &Rational,
    order: usize,
) -> Result<VerificationReport> {
    let at = |v: Rational| degen_multi_poly_bernoulli(&FamilyQuery::new(ks.clone(), lambda.clone(), v, order));
    let sum = at(x + y)?.values;
    let base = at(x.clone())?.values;
    let rows = (0..=order)
        .map(|n| {
            let rhs: Rational = (0..=n)
                .map(|l| binom_rat(n, l) * &base[l] * falling_factorial(y, lambda, n - l))
                .sum();
            Row::new("addition", n, sum[n].clone(), rhs)
        })
        .collect();
    let params = Params {
        ks: Some(ks.clone()),
        lambda: Some(lambda.clone()),
        x: Some(x.clone()),
        y: Some(y.clone()),
        order,
        ..Params::default()
    };
    Ok(VerificationReport::exact(Identity::Addition, params, rows))
}

/// A fully specified verification, as issued by the CLI or a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRequest {
    pub identity: Identity,
    pub ks: Option<IndexVector>,
    pub r: Option<usize>,
    pub lambda: Rational,
    pub x: Rational,
    pub y: Rational,
    pub order: usize,
    pub truncate: usize,
}

impl VerifyRequest {
    pub fn new(identity: Identity, order: usize) -> Self {
        VerifyRequest {
            identity,
            ks: None,
            r: None,
            lambda: Rational::zero(),
            x: Rational::zero(),
            y: Rational::zero(),
            order,
            truncate: 32,
        }
    }

    fn require_ks(&self) -> Result<&IndexVector> {
        self.ks
            .as_ref()
            .ok_or_else(|| Error::Usage(format!("identity {} needs --ks", self.identity)))
    }

    pub fn run(&self) -> Result<VerificationReport> {
        match self.identity {
            Identity::Prop1 => verify_prop1(self.require_ks()?, &self.lambda, &self.x, self.order),
            Identity::LiOnes => {
                let r = self
                    .r
                    .ok_or_else(|| Error::Usage("identity li-ones needs --r".into()))?;
                if r == 0 {
                    return Err(Error::Usage("--r must be >= 1".into()));
                }
                verify_li_ones(r, self.order)
            }
            Identity::Deriv => verify_deriv_recurrences(self.require_ks()?, self.order),
            Identity::Eq18 => verify_eq18(self.require_ks()?, &self.lambda, &self.x, self.order),
            Identity::Thm2 => verify_thm2(self.require_ks()?, &self.lambda, &self.x, self.order, self.truncate),
            Identity::Thm4 => verify_thm4(self.require_ks()?, &self.lambda, &self.x, self.order, self.truncate),
            Identity::Addition => {
                verify_addition(self.require_ks()?, &self.lambda, &self.x, &self.y, self.order)
            }
        }
    }
}

/// The fixed parameter matrix run by `verify --all`. `truncate` sets the
/// `m`-truncation of the diagnostic cases.
pub fn default_sweep(truncate: usize) -> Vec<VerifyRequest> {
    let rat = |p: i64, q: i64| Rational::new(p, q).expect("nonzero denominator");
    let ks = |v: &[i64]| Some(IndexVector::new(v.to_vec()).expect("non-empty"));
    let mut out = Vec::new();
    for r in 1..=5 {
        out.push(VerifyRequest { r: Some(r), ..VerifyRequest::new(Identity::LiOnes, 16) });
    }
    for v in [&[2][..], &[3, 2], &[2, 1], &[1, -1, 1], &[0, 2, 1]] {
        out.push(VerifyRequest { ks: ks(v), ..VerifyRequest::new(Identity::Deriv, 16) });
    }
    out.push(VerifyRequest { ks: ks(&[2, 1]), lambda: rat(1, 3), x: rat(2, 3), ..VerifyRequest::new(Identity::Prop1, 10) });
    out.push(VerifyRequest { ks: ks(&[1, 1, 1]), lambda: rat(1, 5), ..VerifyRequest::new(Identity::Prop1, 12) });
    out.push(VerifyRequest { ks: ks(&[1, 1]), lambda: rat(1, 2), ..VerifyRequest::new(Identity::Eq18, 8) });
    out.push(VerifyRequest { ks: ks(&[2, 1]), lambda: rat(1, 3), x: rat(1, 2), ..VerifyRequest::new(Identity::Eq18, 8) });
    out.push(VerifyRequest { ks: ks(&[1, -2]), lambda: rat(1, 3), truncate, ..VerifyRequest::new(Identity::Thm2, 6) });
    out.push(VerifyRequest { ks: ks(&[2, 1]), lambda: rat(1, 3), truncate, ..VerifyRequest::new(Identity::Thm2, 6) });
    out.push(VerifyRequest { ks: ks(&[1, -1]), lambda: rat(1, 4), truncate, ..VerifyRequest::new(Identity::Thm4, 6) });
    out.push(VerifyRequest { ks: ks(&[1, 1]), lambda: rat(1, 2), truncate, ..VerifyRequest::new(Identity::Thm4, 6) });
    out.push(VerifyRequest {
        ks: ks(&[2, 1]),
        lambda: rat(1, 3),
        x: rat(1, 2),
        y: rat(1, 3),
        ..VerifyRequest::new(Identity::Addition, 10)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::leading_value;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn iv(v: &[i64]) -> IndexVector {
        IndexVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn prop1_examples() {
        let rep = verify_prop1(&iv(&[2, 1]), &r(1, 3), &r(2, 3), 10).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.rows.iter().all(|r| r.check == "eq16"));

        let rep = verify_prop1(&iv(&[1, 1, 1]), &r(1, 5), &Rational::zero(), 12).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.rows.iter().filter(|r| r.check == "eq17").count(), 13);

        let rep = verify_prop1(&iv(&[-2, 3]), &r(7, 2), &Rational::zero(), 6).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn li_ones_examples() {
        assert!(verify_li_ones(1, 10).unwrap().passed());
        let rep = verify_li_ones(2, 5).unwrap();
        assert!(rep.passed());
        let row = rep.rows.iter().find(|r| r.check == "chain-vs-log" && r.n == 3).unwrap();
        assert_eq!(row.lhs, r(1, 2));
        assert!(verify_li_ones(4, 20).unwrap().passed());
    }

    #[test]
    fn deriv_examples() {
        let rep = verify_deriv_recurrences(&iv(&[2]), 12).unwrap();
        assert!(rep.passed());
        assert!(rep.rows.iter().all(|r| r.check == "eq10"));
        let rep = verify_deriv_recurrences(&iv(&[2, 1]), 12).unwrap();
        assert!(rep.passed());
        assert!(rep.rows.iter().any(|r| r.check == "eq11"));
        assert!(rep.rows.iter().any(|r| r.check == "eq12"));
        assert!(verify_deriv_recurrences(&iv(&[3, 2]), 12).unwrap().passed());
        assert!(matches!(verify_deriv_recurrences(&iv(&[3, 2]), 0), Err(Error::Usage(_))));
    }

    #[test]
    fn chain_enumeration_oracle_matches_dp() {
        for ks in [vec![2], vec![1, -1], vec![0, 2, 1]] {
            let li = multi_polylog(&iv(&ks), 9);
            for n in 0..=9 {
                assert_eq!(&chain_weight_by_enumeration(&ks, n), li.coeff(n));
            }
        }
        assert_eq!(chain_weight_by_enumeration(&[], 0), Rational::one());
        assert_eq!(chain_weight_by_enumeration(&[], 3), Rational::zero());
    }

    #[test]
    fn eq18_examples() {
        let rep = verify_eq18(&iv(&[1, 1]), &r(1, 2), &Rational::zero(), 8).unwrap();
        assert!(rep.passed());
        let rep = verify_eq18(&iv(&[2, 1]), &r(1, 3), &r(1, 2), 8).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.rows[0].lhs, leading_value(&iv(&[2, 1])));
        assert_eq!(rep.rows[0].rhs, leading_value(&iv(&[2, 1])));
        assert!(matches!(verify_eq18(&iv(&[2]), &r(1, 3), &r(1, 2), 4), Err(Error::Usage(_))));
    }

    #[test]
    fn binomial_series_forms_agree() {
        // (p + j)^{-k} for k <= 0 is a polynomial; check the finite terms numerically.
        for k in [0i64, -1, -2, -3] {
            for (p, j) in [(1i64, 0i64), (2, 3), (5, 1)] {
                let lhs = int_pow(p + j, k).unwrap();
                let rhs: Rational = binomial_series_terms(k, 99)
                    .into_iter()
                    .map(|(m, c, e)| c * int_pow(p, e).unwrap() * Rational::from(j).pow(m as i64).unwrap())
                    .sum();
                assert_eq!(lhs, rhs);
                // Generalized-binomial form (-1)^m C(k+m-1, m) agrees on the finite range.
                for (m, c, _) in binomial_series_terms(k, 0) {
                    let g = Rational::from(binomial(k + m as i64 - 1, m as u64));
                    let g = if m % 2 == 0 { g } else { -g };
                    assert_eq!(c, g);
                }
            }
        }
        // ... and the generalized form vanishes past -k.
        assert_eq!(binomial(-2 + 3 - 1, 3), 0.into());
    }

    #[test]
    fn thm2_finite_branch_is_exact() {
        let rep = verify_thm2(&iv(&[1, -2]), &r(1, 3), &Rational::zero(), 6, 32).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.residuals.is_empty());
        let rep = verify_thm2(&iv(&[2, 3, 0]), &r(2, 5), &r(1, 2), 5, 0).unwrap();
        assert_eq!(rep.status, Status::Pass);
    }

    #[test]
    fn thm2_diagnostic_branch() {
        let rep = verify_thm2(&iv(&[1, 1]), &r(1, 2), &Rational::zero(), 4, 5).unwrap();
        assert_eq!(rep.status, Status::Diagnostic);
        assert_eq!(rep.residuals.len(), 5 * 6);
        // n = 0: LHS is 2!/(1*2) = 1 and the partial sums alternate 2, 0, 2, 0, ...
        assert_eq!(rep.rows[0].lhs, Rational::one());
        let zero_row: Vec<_> = rep.residuals.iter().filter(|r| r.n == 0).collect();
        for res in zero_row {
            assert_eq!(res.residual, Rational::one());
        }
        assert!(matches!(verify_thm2(&iv(&[1]), &r(1, 2), &Rational::zero(), 4, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn thm4_examples() {
        let rep = verify_thm4(&iv(&[1, -1]), &r(1, 4), &Rational::zero(), 6, 10).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.rows.first().unwrap().n, 1);
        let rep = verify_thm4(&iv(&[1, 1]), &r(1, 2), &Rational::zero(), 6, 8).unwrap();
        assert_eq!(rep.status, Status::Diagnostic);
        assert!(matches!(verify_thm4(&iv(&[1, 1]), &r(1, 2), &Rational::zero(), 0, 8), Err(Error::Usage(_))));
        assert!(matches!(verify_thm4(&iv(&[3]), &r(1, 2), &Rational::zero(), 3, 8), Err(Error::Usage(_))));
    }

    #[test]
    fn addition_examples() {
        let ks = iv(&[2, 1]);
        assert!(verify_addition(&ks, &r(1, 3), &r(1, 2), &r(1, 3), 10).unwrap().passed());
        assert!(verify_addition(&ks, &r(1, 3), &r(1, 2), &Rational::zero(), 6).unwrap().passed());
        // x = 0 is the falling-factorial expansion again.
        let add = verify_addition(&ks, &r(1, 3), &Rational::zero(), &r(2, 3), 6).unwrap();
        let prop = verify_prop1(&ks, &r(1, 3), &r(2, 3), 6).unwrap();
        let lhs_a: Vec<_> = add.rows.iter().map(|r| r.lhs.clone()).collect();
        let lhs_p: Vec<_> = prop.rows.iter().map(|r| r.lhs.clone()).collect();
        assert_eq!(lhs_a, lhs_p);
        assert!(prop.passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = verify_thm2(&iv(&[2, 1]), &r(1, 3), &Rational::zero(), 3, 6).unwrap().to_json();
        let b = verify_thm2(&iv(&[2, 1]), &r(1, 3), &Rational::zero(), 3, 6).unwrap().to_json();
        assert_eq!(a, b);
        let parsed: VerificationReport = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed.to_json(), a);
    }
}
