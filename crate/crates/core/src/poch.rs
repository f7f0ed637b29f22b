//! Finite and negative-index q-Pochhammer symbols.

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// `(x; base)_n = ∏_{j<n} (1 − x·base^j)`.
pub fn poch_finite(x: &ExactScalar, base: &ExactScalar, n: usize) -> ExactScalar {
    let one = ExactScalar::one();
    let mut acc = ExactScalar::one();
    let mut term = x.clone();
    for j in 0..n {
        acc *= &(&one - &term);
        if acc.is_zero() {
            return acc;
        }
        if j + 1 < n {
            term *= base;
        }
    }
    acc
}

/// `(x; base)_{-n} = (−1)^n base^{n(n+1)/2} / (x^n (base/x; base)_n)` for `n ≥ 1`.
pub fn poch_negative(x: &ExactScalar, base: &ExactScalar, n: usize) -> Result<ExactScalar> {
    if x.is_zero() {
        return Err(Error::pole(format!("x^{n} with x = 0"), None));
    }
    let inner = poch_finite(&base.checked_div(x)?, base, n);
    if inner.is_zero() {
        return Err(Error::pole(format!("({base}/({x});{base})_{n}"), Some(-(n as i64))));
    }
    let n_i = n as i64;
    let sign = if n % 2 == 0 { ExactScalar::one() } else { ExactScalar::from_int(-1) };
    let num = &sign * &base.pow(n_i * (n_i + 1) / 2)?;
    num.checked_div(&(&x.pow(n_i)? * &inner))
}

/// Signed-length dispatch: `n ≥ 0` is the ordinary product.
pub fn poch(x: &ExactScalar, base: &ExactScalar, n: i64) -> Result<ExactScalar> {
    if n >= 0 {
        Ok(poch_finite(x, base, n as usize))
    } else {
        poch_negative(x, base, n.unsigned_abs() as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn finite_examples() {
        assert_eq!(poch_finite(&q(2, 1), &q(3, 1), 2), q(5, 1));
        assert_eq!(poch_finite(&q(7, 3), &q(-5, 2), 0), ExactScalar::one());
        assert!(poch_finite(&ExactScalar::one(), &q(3, 7), 4).is_zero());
    }

    #[test]
    fn negative_examples() {
        assert_eq!(poch_negative(&q(3, 1), &q(2, 1), 1).unwrap(), q(-2, 1));
        assert!(poch_negative(&ExactScalar::zero(), &q(2, 1), 1).is_err());
        // base/x = 1 makes the reciprocal product vanish
        assert!(matches!(poch_negative(&q(2, 1), &q(2, 1), 2), Err(Error::Pole { .. })));
    }

    fn small() -> impl Strategy<Value = ExactScalar> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| q(n, d))
    }

    fn nonzero() -> impl Strategy<Value = ExactScalar> {
        small().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #[test]
        fn splits_at_any_index(x in small(), b in small(), n in 0usize..6, m in 0usize..6) {
            let whole = poch_finite(&x, &b, n + m);
            let shifted = &x * &b.pow(n as i64).unwrap();
            prop_assert_eq!(whole, poch_finite(&x, &b, n) * poch_finite(&shifted, &b, m));
        }

        #[test]
        fn negative_index_is_reciprocal(x in nonzero(), b in nonzero(), n in 1usize..5) {
            let shifted = &x * &b.pow(-(n as i64)).unwrap();
            let fwd = poch_finite(&shifted, &b, n);
            prop_assume!(!fwd.is_zero());
            let neg = poch_negative(&x, &b, n).unwrap();
            prop_assert_eq!(fwd * neg, ExactScalar::one());
        }

        #[test]
        fn elementary_shift(a in nonzero(), s in nonzero(), n in 0usize..6, r in 0usize..6) {
            prop_assume!(r <= n);
            let qq = &s * &s;
            let (ni, ri) = (n as i64, r as i64);
            let lhs = poch_finite(&a, &qq, n - r);
            let den = poch_finite(&qq.pow(1 - ni).unwrap().checked_div(&a).unwrap(), &qq, r)
                * (-(&a * &qq.pow(ni).unwrap())).pow(ri).unwrap();
            prop_assume!(!den.is_zero());
            let rhs = (qq.pow(ri * (ri + 1) / 2).unwrap() * poch_finite(&a, &qq, n))
                .checked_div(&den).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugate_pair_collapse(c in small(), s in nonzero(), n in 0usize..6) {
            let qq = &s * &s;
            let ic = &ExactScalar::i() * &c;
            let lhs = poch_finite(&ic, &qq, n) * poch_finite(&(-&ic), &qq, n);
            let rhs = poch_finite(&(-(&c * &c)), &(&qq * &qq), n);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
