//! Truncated formal power series in one variable `t` over [`ExactScalar`].

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::SeriesVar;
use crate::scalar::ExactScalar;

/// Default truncation order in `t`.
pub const DEFAULT_ORDER: usize = 60;

/// `Σ_{i ≤ order} coeffs[i]·t^i`, with `t` meaning `q` or `q^{1/2}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<ExactScalar>,
    var: SeriesVar,
}

impl TruncatedSeries {
    pub fn zero(order: usize, var: SeriesVar) -> Self {
        TruncatedSeries { order, coeffs: vec![ExactScalar::zero(); order + 1], var }
    }

    pub fn constant(c: ExactScalar, order: usize, var: SeriesVar) -> Self {
        let mut s = Self::zero(order, var);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize, var: SeriesVar) -> Self {
        Self::constant(ExactScalar::one(), order, var)
    }

    /// `c·t^v` (zero when `v > order`).
    pub fn monomial(c: ExactScalar, v: usize, order: usize, var: SeriesVar) -> Self {
        let mut s = Self::zero(order, var);
        if v <= order {
            s.coeffs[v] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<ExactScalar>, var: SeriesVar) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        TruncatedSeries { order: coeffs.len() - 1, coeffs, var }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn var(&self) -> SeriesVar {
        self.var
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &ExactScalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactScalar::is_zero)
    }

    /// Index of the first nonzero coefficient (`None` for the zero series).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `Some((c, v))` when the series is exactly `c·t^v` to its order.
    pub fn as_monomial(&self) -> Option<(ExactScalar, usize)> {
        let v = self.valuation()?;
        self.coeffs[v + 1..]
            .iter()
            .all(ExactScalar::is_zero)
            .then(|| (self.coeffs[v].clone(), v))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries { order, coeffs: self.coeffs[..=order].to_vec(), var: self.var }
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if self.var != other.var {
            return Err(Error::Series(format!(
                "base mismatch: t = {} vs t = {}",
                self.var, other.var
            )));
        }
        Ok(self.order.min(other.order))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        let coeffs = (0..=m).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(TruncatedSeries { order: m, coeffs, var: self.var })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect(), var: self.var }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        TruncatedSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect(), var: self.var }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        let mut out = vec![ExactScalar::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Ok(TruncatedSeries { order: m, coeffs: out, var: self.var })
    }

    /// Multiplies by `(1 − c·t^d)` in place, `O(order)`.
    pub fn mul_one_minus(&mut self, c: &ExactScalar, d: usize) {
        if d > self.order || c.is_zero() {
            return;
        }
        for i in (d..=self.order).rev() {
            if !self.coeffs[i - d].is_zero() {
                let delta = c * &self.coeffs[i - d];
                self.coeffs[i] -= &delta;
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("zero constant term is not invertible".into()));
        }
        let inv0 = c0.inv()?;
        let mut g = vec![ExactScalar::zero(); self.order + 1];
        g[0] = inv0.clone();
        for n in 1..=self.order {
            let mut acc = ExactScalar::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !g[n - k].is_zero() {
                    acc += &(&self.coeffs[k] * &g[n - k]);
                }
            }
            g[n] = -(&acc * &inv0);
        }
        Ok(TruncatedSeries { order: self.order, coeffs: g, var: self.var })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.order, self.var);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// First index where two series differ, up to the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let m = self.order.min(other.order);
        (0..=m).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})t^{i}"))
            .collect();
        write!(f, "{} + O(t^{})", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, self.order + 1)
    }
}

/// `∏_{j≥0} (1 − c·t^{v + e·j})` to `order`; `v ≥ 1` is required.
pub fn poch_infinite_series(
    c: &ExactScalar,
    v: usize,
    step: usize,
    order: usize,
    var: SeriesVar,
) -> Result<TruncatedSeries> {
    if c.is_zero() {
        return Ok(TruncatedSeries::one(order, var));
    }
    if v == 0 {
        return Err(Error::Series(
            "infinite product with a zero-valuation argument (use the interval backend)".into(),
        ));
    }
    if step == 0 {
        return Err(Error::Series("infinite product with base of valuation 0".into()));
    }
    let mut s = TruncatedSeries::one(order, var);
    let mut d = v;
    while d <= order {
        s.mul_one_minus(c, d);
        d += step;
    }
    Ok(s)
}

/// `Σ_n term(n)` to `order`, using only the `n` whose valuation bound is
/// `≤ order`. The bound must be convex in `n` (affine or quadratic): the
/// scan stops at the first `n ≥ 1` past `order` where it is nondecreasing.
/// `None` from `bound` means the term vanishes identically.
pub fn sum_terms_by_valuation(
    mut term: impl FnMut(i64) -> Result<TruncatedSeries>,
    mut bound: impl FnMut(i64) -> Result<Option<i64>>,
    order: usize,
    var: SeriesVar,
    n_start: i64,
    n_cap: i64,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero(order, var);
    let mut prev: Option<Option<i64>> = None;
    for n in n_start..=n_cap {
        let b = bound(n)?;
        let past = match b {
            None => true,
            Some(v) => v > order as i64,
        };
        if past {
            let nondecreasing = match (prev, b) {
                (None, _) | (_, None) => n > n_start,
                (Some(None), Some(_)) => false,
                (Some(Some(p)), Some(v)) => v >= p,
            };
            if nondecreasing {
                return Ok(acc);
            }
        } else {
            let t = term(n)?;
            if let Some(val) = t.valuation() {
                if (val as i64) < b.unwrap_or(i64::MAX) {
                    return Err(Error::Series(format!(
                        "valuation bound {} violated by term {n} (actual {val})",
                        b.unwrap_or(i64::MAX)
                    )));
                }
            }
            acc = acc.add(&t)?;
        }
        prev = Some(b);
    }
    Err(Error::Series(format!("valuation bound did not pass order {order} by n = {n_cap}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const T: SeriesVar = SeriesVar::Q;

    fn ints(xs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(xs.iter().map(|&x| ExactScalar::from_int(x)).collect(), T)
    }

    #[test]
    fn small_products() {
        assert_eq!(ints(&[1, 1, 0]).mul(&ints(&[1, -1, 0])).unwrap(), ints(&[1, 0, -1]));
        assert_eq!(ints(&[1, 1, 1, 0]).mul(&ints(&[1, 1, 0, 0])).unwrap(), ints(&[1, 2, 2, 1]));
        let f = ints(&[3, 1, 4]);
        assert_eq!(f.add(&TruncatedSeries::zero(2, T)).unwrap(), f);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ints(&[1, -1, 0, 0, 0]).inverse().unwrap(), ints(&[1, 1, 1, 1, 1]));
        let c = TruncatedSeries::constant(ExactScalar::ratio(2, 3), 3, T);
        assert_eq!(c.inverse().unwrap(), TruncatedSeries::constant(ExactScalar::ratio(3, 2), 3, T));
        assert!(ints(&[0, 1]).inverse().is_err());
    }

    #[test]
    fn base_mismatch_is_an_error() {
        let a = ints(&[1, 1]);
        let b = TruncatedSeries::one(1, SeriesVar::HalfQ);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn euler_product_and_partitions() {
        let e = poch_infinite_series(&ExactScalar::one(), 1, 1, 5, T).unwrap();
        assert_eq!(e, ints(&[1, -1, -1, 0, 0, 1]));
        assert_eq!(e.inverse().unwrap(), ints(&[1, 1, 2, 3, 5, 7]));
        assert_eq!(poch_infinite_series(&ExactScalar::one(), 6, 1, 5, T).unwrap(), ints(&[1, 0, 0, 0, 0, 0]));
        assert!(poch_infinite_series(&ExactScalar::one(), 0, 1, 5, T).is_err());
    }

    #[test]
    fn valuation_sums() {
        let sq = sum_terms_by_valuation(
            |n| Ok(TruncatedSeries::monomial(ExactScalar::one(), (n * n) as usize, 5, T)),
            |n| Ok(Some(n * n)),
            5,
            T,
            0,
            100,
        )
        .unwrap();
        assert_eq!(sq, ints(&[1, 1, 0, 0, 1, 0]));
        let single = sum_terms_by_valuation(
            |_| Ok(TruncatedSeries::one(5, T)),
            |n| Ok(if n == 0 { Some(0) } else { None }),
            5,
            T,
            0,
            100,
        )
        .unwrap();
        assert_eq!(single, TruncatedSeries::one(5, T));
        let stuck = sum_terms_by_valuation(|_| Ok(TruncatedSeries::zero(5, T)), |_| Ok(Some(0)), 5, T, 0, 50);
        assert!(stuck.is_err());
    }

    #[test]
    fn rr_k0_oracle() {
        // Σ q^{2n²−n}/(q;q)_{2n} against 1/(q;q²)_∞ to q^6
        let m = 6;
        let lhs = sum_terms_by_valuation(
            |n| {
                let mut den = TruncatedSeries::one(m, T);
                for i in 1..=(2 * n) as usize {
                    den.mul_one_minus(&ExactScalar::one(), i);
                }
                let num = TruncatedSeries::monomial(ExactScalar::one(), (2 * n * n - n) as usize, m, T);
                num.mul(&den.inverse()?)
            },
            |n| Ok(Some(2 * n * n - n)),
            m,
            T,
            0,
            100,
        )
        .unwrap();
        let rhs = poch_infinite_series(&ExactScalar::one(), 1, 2, m, T).unwrap().inverse().unwrap();
        let want = ints(&[1, 1, 1, 2, 2, 3, 4]);
        assert_eq!(lhs, want);
        assert_eq!(rhs, want);
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-6i64..7, 1i64..5), order + 1).prop_map(|cs| {
            TruncatedSeries::from_coeffs(cs.into_iter().map(|(n, d)| ExactScalar::ratio(n, d)).collect(), T)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn inverse_is_involution(a in arb_series(6)) {
            prop_assume!(!a.coeff(0).is_zero());
            let inv = a.inverse().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), TruncatedSeries::one(6, T));
            prop_assert_eq!(inv.inverse().unwrap(), a);
        }

        #[test]
        fn product_times_inverse(n in -5i64..6, d in 1i64..5, v in 1usize..4, e in 1usize..4) {
            let p = poch_infinite_series(&ExactScalar::ratio(n, d), v, e, 12, T).unwrap();
            prop_assert_eq!(p.mul(&p.inverse().unwrap()).unwrap(), TruncatedSeries::one(12, T));
        }

        #[test]
        fn truncation_commutes(n in -5i64..6, d in 1i64..5, v in 1usize..4, e in 1usize..4, m2 in 0usize..12) {
            let big = poch_infinite_series(&ExactScalar::ratio(n, d), v, e, 12, T).unwrap();
            let small = poch_infinite_series(&ExactScalar::ratio(n, d), v, e, m2, T).unwrap();
            prop_assert_eq!(big.truncate(m2), small);
        }
    }
}
