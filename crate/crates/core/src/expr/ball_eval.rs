//! Ball evaluation: exact wherever the subtree is finite, enclosures for
//! infinite products and non-terminating series.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hyper::{eval_product_interval, TailPolicy};
use crate::interval::IntervalValue;

use super::{to_int, Env, Expr};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BallCtx {
    pub tail: TailPolicy,
}

fn real(e: &Expr, env: &Env<'_>) -> Result<BigRational> {
    let v = e.eval(env)?;
    v.as_real().cloned().ok_or_else(|| Error::Interval(format!("complex value of `{e}`")))
}

impl Expr {
    pub fn eval_ball(&self, env: &Env<'_>, ctx: &BallCtx) -> Result<IntervalValue> {
        if self.is_finite() {
            return IntervalValue::from_scalar(&self.eval(env)?);
        }
        match self {
            Expr::Add(xs) => {
                let mut acc = IntervalValue::zero();
                for x in xs {
                    acc = acc.add(&x.eval_ball(env, ctx)?);
                }
                Ok(acc)
            }
            Expr::Mul(xs) => {
                let mut acc = IntervalValue::one();
                for x in xs {
                    acc = acc.mul(&x.eval_ball(env, ctx)?);
                }
                Ok(acc)
            }
            Expr::Neg(x) => Ok(x.eval_ball(env, ctx)?.neg()),
            Expr::Div(a, b) => {
                let den = b.eval_ball(env, ctx)?;
                a.eval_ball(env, ctx)?.div(&den)
            }
            Expr::Pow(b, e) => {
                let e = to_int(&e.eval(env)?)?;
                b.eval_ball(env, ctx)?.pow(e)
            }
            Expr::PochInf { arg, base } => eval_product_interval(&real(arg, env)?, &real(base, env)?, &ctx.tail),
            Expr::Sum { var, lo, hi, body } => {
                let lo = to_int(&lo.eval(env)?)?;
                let hi = to_int(&hi.eval(env)?)?;
                let mut acc = IntervalValue::zero();
                for i in lo..=hi {
                    acc = acc.add(&body.eval_ball(&env.with(*var, i), ctx)?);
                }
                Ok(acc)
            }
            Expr::Parity { of, even, odd } => {
                if to_int(&of.eval(env)?)? % 2 == 0 {
                    even.eval_ball(env, ctx)
                } else {
                    odd.eval_ball(env, ctx)
                }
            }
            Expr::IfZero { of, zero, other } => {
                if of.eval(env)?.is_zero() {
                    zero.eval_ball(env, ctx)
                } else {
                    other.eval_ball(env, ctx)
                }
            }
            Expr::Series(spec) => spec.eval_interval(env, ctx),
            // remaining variants are always finite
            _ => IntervalValue::from_scalar(&self.eval(env)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Values;
    use crate::scalar::ExactScalar;

    #[test]
    fn quotient_of_products() {
        let mut v = Values::new();
        v.insert("q".into(), ExactScalar::ratio(1, 3));
        let e = Expr::parse("[q; q]_inf/[q^2; q]_inf").unwrap();
        let b = e.eval_ball(&Env::new(&v), &BallCtx::default()).unwrap();
        assert!(b.contains(&BigRational::new(2.into(), 3.into())));
        assert!(b.is_rigorous());
    }

    #[test]
    fn finite_trees_stay_exact() {
        let mut v = Values::new();
        v.insert("q".into(), ExactScalar::ratio(1, 3));
        let e = Expr::parse("[q; q]_3 + 1/q").unwrap();
        let b = e.eval_ball(&Env::new(&v), &BallCtx::default()).unwrap();
        assert_eq!(b.radius(), &BigRational::from_integer(0.into()));
    }
}
