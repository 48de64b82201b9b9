//! Dense truncated formal power series in one variable over [`Rational`].
//!
//! A series of order `N` stores exactly `N + 1` coefficients `c_0..c_N`.
//! Binary operations truncate to the smaller operand order; nothing is
//! ever silently extended.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<Rational>,
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = String;
    fn try_from(r: SeriesRepr) -> std::result::Result<Self, String> {
        if r.coeffs.len() != r.order + 1 {
            return Err(format!(
                "series of order {} needs {} coefficients, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            ));
        }
        Ok(TruncatedSeries { coeffs: r.coeffs })
    }
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr { order: s.order(), coeffs: s.coeffs }
    }
}

impl TruncatedSeries {
    /// Panics on an empty coefficient vector.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        TruncatedSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::zero())
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `t^k` truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `t^n`; panics past the truncation order.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    /// Index of the first nonzero coefficient, `None` if every stored coefficient is zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| {
            let mut acc = Rational::zero();
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
    }

    /// Multiplicative inverse via `b_0 = 1/a_0`, `b_n = -(1/a_0) sum_{i=1}^{n} a_i b_{n-i}`.
    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].recip().map_err(|_| Error::NonUnitSeries)?;
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[n - i];
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `outer(inner(t))` by Horner's rule. `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Divide by `t^r`. Every coefficient below `t^r` must be zero; the result has order `N - r`.
    pub fn div_tpow(&self, r: usize) -> Result<Self> {
        if let Some(index) = self.coeffs.iter().take(r).position(|c| !c.is_zero()) {
            return Err(Error::ValuationTooSmall { index, required: r });
        }
        if r > self.order() {
            return Err(Error::Usage(format!(
                "cannot divide a series of order {} by t^{r}",
                self.order()
            )));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[r..].to_vec() })
    }

    /// Multiply by `t^r`, keeping the order (top `r` coefficients fall off).
    pub fn mul_tpow(&self, r: usize) -> Self {
        let n = self.order();
        Self::from_fn(n, |i| if i >= r { self.coeffs[i - r].clone() } else { Rational::zero() })
    }

    /// Formal derivative; the order drops by one (a constant stays a zero constant).
    pub fn derive(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |n| {
            &self.coeffs[n + 1] * Rational::from_integer(n as i64 + 1)
        })
    }

    /// Formal antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.order() + 1, |n| {
            if n == 0 {
                Rational::zero()
            } else {
                &self.coeffs[n - 1] * Rational::new(1, n as i64).expect("n >= 1")
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::factorial;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn ints(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().map(|&c| Rational::from(c)).collect())
    }

    fn exp_series(sign: i64, n: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(n, |k| {
            let s = if sign < 0 && k % 2 == 1 { -1 } else { 1 };
            Rational::from_bigints(s.into(), factorial(k as u64)).unwrap()
        })
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ints(&[1, 1, 0]).mul(&ints(&[1, -1, 0])), ints(&[1, 0, -1]));
        let a = ints(&[3, -2, 5]);
        assert_eq!(a.mul(&TruncatedSeries::one(2)), a);
        assert_eq!(exp_series(1, 6).mul(&exp_series(-1, 6)), TruncatedSeries::one(6));
    }

    #[test]
    fn mismatched_orders_truncate() {
        let p = ints(&[1, 2, 3, 4]).mul(&ints(&[1, 1]));
        assert_eq!(p.order(), 1);
        assert_eq!(p, ints(&[1, 3]));
        assert_eq!(ints(&[1, 2, 3]).add(&ints(&[1])).order(), 0);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ints(&[1, -1, 0, 0]).invert().unwrap(), ints(&[1, 1, 1, 1]));
        assert_eq!(TruncatedSeries::one(3).invert().unwrap(), TruncatedSeries::one(3));
        assert_eq!(ints(&[0, 1]).invert(), Err(Error::NonUnitSeries));
        // (e^t - 1)/t at order 2, inverse is B_n/n!
        let e = exp_series(1, 3).sub(&TruncatedSeries::one(3)).div_tpow(1).unwrap();
        let inv = e.invert().unwrap();
        assert_eq!(inv.coeffs(), &[r(1, 1), r(-1, 2), r(1, 12)]);
    }

    #[test]
    fn compose_examples() {
        // -log(1-x) composed with 1 - e^{-t} is t.
        let neg_log = TruncatedSeries::from_fn(3, |n| {
            if n == 0 { Rational::zero() } else { r(1, n as i64) }
        });
        let inner = TruncatedSeries::one(3).sub(&exp_series(-1, 3));
        assert_eq!(neg_log.compose(&inner).unwrap(), ints(&[0, 1, 0, 0]));

        assert_eq!(ints(&[0, 0, 1, 0]).compose(&ints(&[0, 1, 1, 0])).unwrap(), ints(&[0, 0, 1, 2]));

        let outer = ints(&[4, -1, 7, 2]);
        assert_eq!(outer.compose(&TruncatedSeries::monomial(1, 3)).unwrap(), outer);
        assert_eq!(outer.compose(&ints(&[1, 1, 0, 0])), Err(Error::CompositionConstantTerm));
    }

    #[test]
    fn div_tpow_examples() {
        assert_eq!(ints(&[0, 0, 1, 1]).div_tpow(2).unwrap(), ints(&[1, 1]));
        let a = ints(&[2, 3]);
        assert_eq!(a.div_tpow(0).unwrap(), a);
        let u = TruncatedSeries::one(4).sub(&exp_series(-1, 4));
        assert_eq!(u.div_tpow(1).unwrap().coeffs(), &[r(1, 1), r(-1, 2), r(1, 6), r(-1, 24)]);
        assert_eq!(
            ints(&[0, 5, 1]).div_tpow(2),
            Err(Error::ValuationTooSmall { index: 1, required: 2 })
        );
    }

    #[test]
    fn derive_examples() {
        assert_eq!(ints(&[1, 1, 1]).derive(), ints(&[1, 2]));
        assert_eq!(ints(&[5]).derive(), ints(&[0]));
        assert_eq!(ints(&[5, 0, 0]).derive(), ints(&[0, 0]));
        assert_eq!(exp_series(1, 4).derive(), exp_series(1, 3));
        assert_eq!(exp_series(1, 4).derive().integrate(), exp_series(1, 4).sub(&TruncatedSeries::one(4)));
    }

    #[test]
    fn serde_shape() {
        let s = ints(&[1, 0, -3]).scale(&r(1, 2));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["1/2","0/1","-3/2"]}"#);
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }

    const N: usize = 7;

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), N + 1).prop_map(|v| {
            TruncatedSeries::from_coeffs(v.into_iter().map(|(p, q)| r(p, q)).collect())
        })
    }

    fn arb_unit() -> impl Strategy<Value = TruncatedSeries> {
        (arb_series(), prop_oneof![-5i64..-1, 1i64..5]).prop_map(|(mut s, c)| {
            s.coeffs[0] = Rational::from(c);
            s
        })
    }

    fn arb_nonunit() -> impl Strategy<Value = TruncatedSeries> {
        arb_series().prop_map(|mut s| {
            s.coeffs[0] = Rational::zero();
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn inverse_is_exact(a in arb_unit()) {
            prop_assert_eq!(a.mul(&a.invert().unwrap()), TruncatedSeries::one(N));
        }

        #[test]
        fn composition_associates(f in arb_series(), g in arb_nonunit(), h in arb_nonunit()) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn product_rule(a in arb_series(), b in arb_series()) {
            let lhs = a.mul(&b).derive();
            let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shift_then_unshift(a in arb_series(), k in 0usize..4) {
            // Multiplying by t^k at a higher order then dividing recovers a.
            let padded = TruncatedSeries::from_fn(N + k, |i| if i <= N { a.coeffs[i].clone() } else { Rational::zero() });
            let shifted = padded.mul(&TruncatedSeries::monomial(k, N + k));
            prop_assert_eq!(shifted.div_tpow(k).unwrap(), a);
        }
    }
}
