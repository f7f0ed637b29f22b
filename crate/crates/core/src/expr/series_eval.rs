//! Power-series evaluation in `t = q` or `t = q^{1/2}`.
//!
//! `q` (and `s = √q` in half-step mode) become monomials in `t`; every other
//! symbol is a numeric constant taken from the environment.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series::TruncatedSeries;

use super::{to_int, Env, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesVar {
    /// `t = q`
    Q,
    /// `t = q^{1/2}`
    HalfQ,
}

impl fmt::Display for SeriesVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVar::Q => "q",
            SeriesVar::HalfQ => "q^(1/2)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesCtx {
    pub var: SeriesVar,
    pub order: usize,
    /// Hard cap on summation indices for valuation-bounded sums.
    pub n_cap: i64,
}

impl SeriesCtx {
    pub fn new(var: SeriesVar, order: usize) -> Self {
        SeriesCtx { var, order, n_cap: 10_000 }
    }

    fn zero(&self) -> TruncatedSeries {
        TruncatedSeries::zero(self.order, self.var)
    }

    fn constant(&self, c: ExactScalar) -> TruncatedSeries {
        TruncatedSeries::constant(c, self.order, self.var)
    }

    fn t_pow(&self, c: ExactScalar, v: i64) -> Result<TruncatedSeries> {
        if v < 0 {
            return Err(Error::Series(format!("negative power t^{v} (Laurent terms are not supported)")));
        }
        Ok(TruncatedSeries::monomial(c, v as usize, self.order, self.var))
    }

    /// Multiplies `acc` by `1 − x` for a series `x`.
    fn times_one_minus(&self, acc: &mut TruncatedSeries, x: &TruncatedSeries) -> Result<()> {
        match x.as_monomial() {
            Some((c, 0)) => *acc = acc.scale(&(&ExactScalar::one() - &c)),
            Some((c, v)) => acc.mul_one_minus(&c, v),
            None if x.is_zero() => {}
            None => *acc = acc.mul(&self.constant(ExactScalar::one()).sub(x)?)?,
        }
        Ok(())
    }

    /// `(x; b)_len` with series arguments.
    pub(crate) fn poch_series(&self, x: &TruncatedSeries, b: &TruncatedSeries, len: i64) -> Result<TruncatedSeries> {
        let mut acc = self.constant(ExactScalar::one());
        if len >= 0 {
            let mut cur = x.clone();
            for _ in 0..len {
                self.times_one_minus(&mut acc, &cur)?;
                cur = cur.mul(b)?;
            }
            Ok(acc)
        } else {
            let binv = b.inverse()?;
            let mut cur = x.mul(&binv)?;
            for _ in 0..-len {
                self.times_one_minus(&mut acc, &cur)?;
                cur = cur.mul(&binv)?;
            }
            acc.inverse()
        }
    }

    /// Product of `(arg; base)_{scale·n}` over a parameter list.
    pub(crate) fn poch_product(&self, ps: &[crate::hyper::PochParam], env: &Env<'_>, n: i64) -> Result<TruncatedSeries> {
        let mut acc = self.constant(ExactScalar::one());
        for p in ps {
            let x = p.arg.eval_series(env, self)?;
            let b = p.base.eval_series(env, self)?;
            acc = acc.mul(&self.poch_series(&x, &b, n * i64::from(p.scale))?)?;
        }
        Ok(acc)
    }

    /// `(x; b)_∞`; `b` must have positive valuation.
    fn poch_inf_series(&self, x: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        match b.valuation() {
            Some(v) if v >= 1 => {}
            _ => return Err(Error::Series("infinite product with base of valuation 0".into())),
        }
        let mut acc = self.constant(ExactScalar::one());
        let mut cur = x.clone();
        while let Some(v) = cur.valuation() {
            if v > self.order {
                break;
            }
            self.times_one_minus(&mut acc, &cur)?;
            cur = cur.mul(b)?;
        }
        Ok(acc)
    }
}

impl Expr {
    pub fn eval_series(&self, env: &Env<'_>, ctx: &SeriesCtx) -> Result<TruncatedSeries> {
        match self {
            Expr::Num(v) => Ok(ctx.constant(v.clone())),
            Expr::Sym(s) => match (&**s, ctx.var) {
                ("q", SeriesVar::Q) => ctx.t_pow(ExactScalar::one(), 1),
                ("q", SeriesVar::HalfQ) => ctx.t_pow(ExactScalar::one(), 2),
                ("s", SeriesVar::HalfQ) => ctx.t_pow(ExactScalar::one(), 1),
                ("s", SeriesVar::Q) => Err(Error::RootUnavailable("q".into())),
                (name, _) => Ok(ctx.constant(env.lookup(name)?.clone())),
            },
            Expr::Idx(i) => Ok(ctx.constant(ExactScalar::from_int(env.index(*i)?))),
            Expr::Add(xs) => {
                let mut acc = ctx.zero();
                for x in xs {
                    acc = acc.add(&x.eval_series(env, ctx)?)?;
                }
                Ok(acc)
            }
            Expr::Mul(xs) => {
                let mut acc = ctx.constant(ExactScalar::one());
                for x in xs {
                    acc = acc.mul(&x.eval_series(env, ctx)?)?;
                }
                Ok(acc)
            }
            Expr::Neg(x) => Ok(x.eval_series(env, ctx)?.neg()),
            Expr::Div(a, b) => {
                let den = b.eval_series(env, ctx)?;
                if den.is_zero() {
                    return Err(Error::pole(b.to_string(), None));
                }
                let inv = den.inverse().map_err(|_| Error::Series(format!("division by `{b}` of positive valuation")))?;
                a.eval_series(env, ctx)?.mul(&inv)
            }
            Expr::Pow(b, e) => {
                let e = to_int(&e.eval(env)?)?;
                let base = b.eval_series(env, ctx)?;
                match base.as_monomial() {
                    Some((c, v)) => ctx.t_pow(c.pow(e)?, v as i64 * e),
                    None => base.pow(e),
                }
            }
            Expr::Poch { arg, base, len } => {
                let len = to_int(&len.eval(env)?)?;
                ctx.poch_series(&arg.eval_series(env, ctx)?, &base.eval_series(env, ctx)?, len)
            }
            Expr::PochInf { arg, base } => {
                ctx.poch_inf_series(&arg.eval_series(env, ctx)?, &base.eval_series(env, ctx)?)
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = to_int(&lo.eval(env)?)?;
                let hi = to_int(&hi.eval(env)?)?;
                let mut acc = ctx.zero();
                for i in lo..=hi {
                    acc = acc.add(&body.eval_series(&env.with(*var, i), ctx)?)?;
                }
                Ok(acc)
            }
            Expr::Parity { of, even, odd } => {
                if to_int(&of.eval(env)?)? % 2 == 0 {
                    even.eval_series(env, ctx)
                } else {
                    odd.eval_series(env, ctx)
                }
            }
            Expr::IfZero { of, zero, other } => {
                if of.eval(env)?.is_zero() {
                    zero.eval_series(env, ctx)
                } else {
                    other.eval_series(env, ctx)
                }
            }
            Expr::Floor(_) => Ok(ctx.constant(self.eval(env)?)),
            Expr::Series(spec) => spec.eval_series(env, ctx),
            Expr::Pair { seq, pair, index } => {
                let n = to_int(&index.eval(env)?)?;
                pair.eval_series_in(env.values, *seq, n, ctx)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Index;
    use crate::point::Values;

    fn ints(xs: &[i64], var: SeriesVar) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(xs.iter().map(|&x| ExactScalar::from_int(x)).collect(), var)
    }

    #[test]
    fn euler_function() {
        let v = Values::new();
        let ctx = SeriesCtx::new(SeriesVar::Q, 8);
        let e = Expr::parse("[q; q]_inf").unwrap();
        // 1 - q - q^2 + q^5 + q^7
        assert_eq!(e.eval_series(&Env::new(&v), &ctx).unwrap(), ints(&[1, -1, -1, 0, 0, 1, 0, 1, 0], SeriesVar::Q));
    }

    #[test]
    fn half_step_variable() {
        let v = Values::new();
        let ctx = SeriesCtx::new(SeriesVar::HalfQ, 4);
        let e = Expr::parse("s*(1 - q)").unwrap();
        assert_eq!(e.eval_series(&Env::new(&v), &ctx).unwrap(), ints(&[0, 1, 0, -1, 0], SeriesVar::HalfQ));
        let q_only = SeriesCtx::new(SeriesVar::Q, 4);
        assert!(e.eval_series(&Env::new(&v), &q_only).is_err());
    }

    #[test]
    fn finite_poch_with_constants() {
        let mut v = Values::new();
        v.insert("a".into(), ExactScalar::ratio(1, 2));
        let ctx = SeriesCtx::new(SeriesVar::Q, 3);
        let e = Expr::parse("[a*q; q]_n").unwrap();
        let env = Env::new(&v).with(Index::N, 2);
        // (1 - q/2)(1 - q^2/2)
        let want = TruncatedSeries::from_coeffs(
            vec![ExactScalar::one(), ExactScalar::ratio(-1, 2), ExactScalar::ratio(-1, 2), ExactScalar::ratio(1, 4)],
            SeriesVar::Q,
        );
        assert_eq!(e.eval_series(&env, &ctx).unwrap(), want);
    }
}
