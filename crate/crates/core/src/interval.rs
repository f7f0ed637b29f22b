//! Real midpoint–radius balls with exact rational endpoints.
//!
//! Centers are rounded to a dyadic grid after each operation and the
//! rounding error is folded into the radius, which keeps long products
//! small without giving up rigor.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_decimal, ExactScalar};

/// Grid exponent: centers live on multiples of `2^-PREC_BITS`.
pub const PREC_BITS: u32 = 320;

#[derive(Clone, PartialEq, Eq)]
pub struct IntervalValue {
    center: BigRational,
    radius: BigRational,
    /// False when the radius relies on the ratio-window tail heuristic.
    rigorous: bool,
}

impl IntervalValue {
    pub fn exact(v: BigRational) -> Self {
        IntervalValue { center: v, radius: BigRational::zero(), rigorous: true }
    }

    pub fn from_scalar(v: &ExactScalar) -> Result<Self> {
        v.as_real()
            .map(|r| Self::exact(r.clone()))
            .ok_or_else(|| Error::Interval(format!("complex value {v} in interval evaluation")))
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn with_radius(center: BigRational, radius: BigRational) -> Self {
        assert!(!radius.is_negative(), "negative radius");
        IntervalValue { center, radius, rigorous: true }
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn width(&self) -> BigRational {
        &self.radius * BigRational::from_integer(2.into())
    }

    pub fn is_rigorous(&self) -> bool {
        self.rigorous
    }

    pub fn mark_heuristic(mut self) -> Self {
        self.rigorous = false;
        self
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (&self.center - x).abs() <= self.radius
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        (&self.center - &other.center).abs() <= &self.radius + &other.radius
    }

    /// Distance between the two balls (0 when they overlap).
    pub fn gap(&self, other: &Self) -> BigRational {
        let d = (&self.center - &other.center).abs() - &self.radius - &other.radius;
        if d.is_negative() {
            BigRational::zero()
        } else {
            d
        }
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag(&self) -> BigRational {
        self.center.abs() + &self.radius
    }

    /// Lower bound on `|x|` over the ball (0 if the ball contains 0).
    pub fn mig(&self) -> BigRational {
        let m = self.center.abs() - &self.radius;
        if m.is_negative() {
            BigRational::zero()
        } else {
            m
        }
    }

    fn tidy(mut self) -> Self {
        let scale = BigRational::from_integer(BigInt::one() << PREC_BITS);
        if !self.center.denom().is_one() && self.center.denom().bits() > u64::from(PREC_BITS) {
            let scaled = &self.center * &scale;
            let rounded = scaled.round();
            let c = rounded / &scale;
            self.radius += (&self.center - &c).abs();
            self.center = c;
        }
        if self.radius.denom().bits() > u64::from(PREC_BITS) {
            self.radius = (&self.radius * &scale).ceil() / &scale;
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        IntervalValue {
            center: &self.center + &o.center,
            radius: &self.radius + &o.radius,
            rigorous: self.rigorous && o.rigorous,
        }
        .tidy()
    }

    pub fn neg(&self) -> Self {
        IntervalValue { center: -self.center.clone(), radius: self.radius.clone(), rigorous: self.rigorous }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let radius = self.center.abs() * &o.radius + o.center.abs() * &self.radius + &self.radius * &o.radius;
        IntervalValue {
            center: &self.center * &o.center,
            radius,
            rigorous: self.rigorous && o.rigorous,
        }
        .tidy()
    }

    pub fn inv(&self) -> Result<Self> {
        let c = self.center.abs();
        if c <= self.radius {
            return Err(Error::Interval(format!("division by a ball containing zero ({self:?})")));
        }
        let radius = &self.radius / (&c * (&c - &self.radius));
        Ok(IntervalValue { center: self.center.recip(), radius, rigorous: self.rigorous }.tidy())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Widens the radius by `extra` (used for tails).
    pub fn widen(mut self, extra: &BigRational) -> Self {
        self.radius += extra;
        self.tidy()
    }
}

impl fmt::Debug for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", rational_to_decimal(&self.center, 30), sci(&self.radius))
    }
}

/// Short scientific rendering of a nonnegative rational, e.g. `3.2e-41`.
pub fn sci(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let ten = BigRational::from_integer(10.into());
    let mut x = r.abs();
    let mut e = 0i32;
    while x >= ten {
        x /= &ten;
        e += 1;
    }
    while x < BigRational::one() {
        x *= &ten;
        e -= 1;
    }
    format!("{}e{e}", rational_to_decimal(&x, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basic_ops_enclose() {
        let a = IntervalValue::with_radius(r(1, 3), r(1, 100));
        let b = IntervalValue::with_radius(r(-2, 7), r(1, 1000));
        let p = a.mul(&b);
        assert!(p.contains(&(r(1, 3) * r(-2, 7))));
        assert!(p.contains(&(r(34, 100) * r(-2, 7))));
        let q = a.div(&b).unwrap();
        assert!(q.contains(&(r(1, 3) / r(-2, 7))));
        assert!(IntervalValue::with_radius(r(1, 10), r(1, 5)).inv().is_err());
    }

    #[test]
    fn rounding_keeps_values_inside() {
        let third = IntervalValue::exact(r(1, 3));
        let mut acc = IntervalValue::one();
        for _ in 0..200 {
            acc = acc.mul(&third);
        }
        let exact = num_traits::pow(r(1, 3), 200);
        assert!(acc.contains(&exact));
        assert!(acc.center().denom().bits() <= u64::from(PREC_BITS) + 1);
    }

    #[test]
    fn overlap_and_gap() {
        let a = IntervalValue::with_radius(r(0, 1), r(1, 2));
        let b = IntervalValue::with_radius(r(1, 1), r(1, 2));
        let c = IntervalValue::with_radius(r(2, 1), r(1, 4));
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
        assert_eq!(a.gap(&c), r(5, 4));
    }

    proptest! {
        #[test]
        fn products_enclose_exact(n1 in -50i64..50, d1 in 1i64..50, n2 in -50i64..50, d2 in 1i64..50, k in 1i64..40) {
            let x = r(n1, d1);
            let y = r(n2, d2);
            let rad = r(1, k * 1000);
            let bx = IntervalValue::with_radius(x.clone(), rad.clone());
            let by = IntervalValue::with_radius(y.clone(), rad.clone());
            prop_assert!(bx.mul(&by).contains(&(&x * &y)));
            prop_assert!(bx.add(&by).contains(&(&x + &y)));
            if by.mig() > BigRational::zero() {
                prop_assert!(bx.div(&by).unwrap().contains(&(&x / &y)));
            }
        }
    }
}
