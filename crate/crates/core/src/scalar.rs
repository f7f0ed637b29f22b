//! Gaussian rationals: the coefficient field for every exact evaluation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `re + im·i` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ExactScalar { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ExactScalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics on `den == 0` (a programming error, not a data error).
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator in ExactScalar::ratio");
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The real part when the imaginary part is zero.
    pub fn as_real(&self) -> Option<&BigRational> {
        self.im.is_zero().then_some(&self.re)
    }

    pub fn conj(&self) -> Self {
        ExactScalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Integer value if this is a real integer.
    pub fn to_i64(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Self::real(self.re.recip()));
        }
        let d = self.norm_sqr();
        Ok(ExactScalar { re: &self.re / &d, im: -(&self.im / &d) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() && rhs.im.is_zero() {
            return Ok(Self::real(&self.re / &rhs.re));
        }
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert (error at zero).
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Exact square root of a nonnegative rational perfect square.
    pub fn sqrt_exact(&self) -> Option<Self> {
        let r = self.as_real()?;
        if r.is_negative() {
            return None;
        }
        let n = r.numer().sqrt();
        let d = r.denom().sqrt();
        (&n * &n == *r.numer() && &d * &d == *r.denom())
            .then(|| Self::real(BigRational::new(n, d)))
    }

    /// Exact `e`-th root for `|e| ∈ {1, 2}`.
    pub fn root_exact(&self, e: i32) -> Option<Self> {
        match e {
            1 => Some(self.clone()),
            -1 => self.inv().ok(),
            2 => self.sqrt_exact(),
            -2 => self.inv().ok()?.sqrt_exact(),
            _ => None,
        }
    }

    /// Decimal approximation with `digits` fractional digits (for display only).
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = rational_to_decimal(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = rational_to_decimal(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{re}{sign}{im}i")
    }
}

/// Rounds `r` to `digits` decimals (half away from zero) and formats it.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let int = &rounded / &scale;
    let frac = &rounded % &scale;
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

// ---------------------------------------------------------------------------
// Operator impls
// ---------------------------------------------------------------------------

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactScalar::real(&self.re * &rhs.re);
        }
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        if self.im.is_zero() && rhs.im.is_zero() {
            self.re *= &rhs.re;
        } else {
            *self = &*self * rhs;
        }
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::real(r)
    }
}

// ---------------------------------------------------------------------------
// Text form: "3/4", "-2", "1/2+3/4i", "-i"
// ---------------------------------------------------------------------------

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rat(&self.re));
        }
        let im_abs = self.im.abs();
        let im = if im_abs.is_one() { String::new() } else { fmt_rat(&im_abs) };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{im}i", fmt_rat(&self.re))
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { pos: 0, msg: format!("not an exact scalar: `{s}`") };
        let t = s.trim();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rat(t).map(ExactScalar::real).ok_or_else(bad);
        };
        // split "re±im" at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im.trim() {
            "" | "+" => Some(BigRational::one()),
            "-" => Some(-BigRational::one()),
            other => parse_rat(other.strip_prefix('+').unwrap_or(other)),
        };
        match (parse_rat(re), im) {
            (Some(re), Some(im)) => Ok(ExactScalar::new(re, im)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn field_ops_are_exact() {
        let a = q(1, 3);
        let b = q(2, 7);
        assert_eq!(&a + &b, q(13, 21));
        assert_eq!(&a * &b, q(2, 21));
        assert_eq!(a.checked_div(&b).unwrap(), q(7, 6));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(q(1, 2).checked_div(&ExactScalar::zero()), Err(Error::DivisionByZero));
        assert!(ExactScalar::zero().inv().is_err());
        assert!(ExactScalar::zero().pow(-1).is_err());
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = ExactScalar::i();
        assert_eq!(&i * &i, ExactScalar::from_int(-1));
        let z = ExactScalar::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        assert_eq!(&z * &z.inv().unwrap(), ExactScalar::one());
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "-3", "5/7", "i", "-i", "2/3i", "1/2+3/4i", "-1-i", "7-2/5i"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string().parse::<ExactScalar>().unwrap(), v, "{s}");
        }
        assert_eq!("1/2+3/4i".parse::<ExactScalar>().unwrap().to_string(), "1/2+3/4i");
    }

    #[test]
    fn pow_and_roots() {
        assert_eq!(q(2, 3).pow(3).unwrap(), q(8, 27));
        assert_eq!(q(2, 3).pow(-2).unwrap(), q(9, 4));
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn decimals() {
        assert_eq!(rational_to_decimal(q(1, 3).re(), 4), "0.3333");
        assert_eq!(rational_to_decimal(q(-2, 3).re(), 2), "-0.67");
    }
}
