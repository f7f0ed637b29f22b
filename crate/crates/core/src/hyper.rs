//! Basic hypergeometric sums from a uniform term specification.
//!
//! A [`SeriesSpec`] describes
//! `Σ_n ∏(aᵢ; bᵢ)_{λᵢn} / ∏(cⱼ; dⱼ)_{μⱼn} · x^n · mult(n)`
//! with per-parameter bases and length scales, so `φ`, `W` and mixed-base
//! sums all share one evaluator. Terms are built incrementally.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{to_int, BallCtx, Env, Expr, Index, MutationSite, ParseCtx, SeriesCtx};
use crate::interval::IntervalValue;
use crate::scalar::ExactScalar;
use crate::series::{sum_terms_by_valuation, TruncatedSeries};

#[derive(Clone, Debug)]
pub struct PochParam {
    pub arg: Expr,
    pub base: Expr,
    /// The factor is `(arg; base)_{scale·n}`.
    pub scale: u32,
}

#[derive(Clone, Debug)]
pub enum Termination {
    Infinite,
    At(Expr),
}

#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub label: String,
    pub numer: Vec<PochParam>,
    pub denom: Vec<PochParam>,
    pub argument: Expr,
    pub multiplier: Option<Expr>,
    pub lower: i64,
    pub termination: Termination,
    /// Lower bound on the `t`-valuation of term `n` (series backend only).
    pub valuation: Option<Expr>,
}

/// Tail policy for non-terminating sums and products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailPolicy {
    pub window: usize,
    pub ratio_cap: BigRational,
    pub n_start: usize,
    pub max_terms: usize,
    pub target_radius: BigRational,
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy {
            window: 4,
            ratio_cap: BigRational::new(3.into(), 4.into()),
            n_start: 8,
            max_terms: 4000,
            target_radius: BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(32)),
        }
    }
}

impl TailPolicy {
    /// Sets the ratio cap from text such as `3/4`; it must lie in `(0, 1)`.
    pub fn set_ratio_cap(&mut self, text: &str) -> Result<()> {
        let v: ExactScalar = text.trim().parse().map_err(|_| Error::Config(format!("bad ratio cap `{text}`")))?;
        match v.as_real() {
            Some(r) if r.is_positive() && r < &BigRational::one() => {
                self.ratio_cap = r.clone();
                Ok(())
            }
            _ => Err(Error::Config(format!("ratio cap `{text}` must lie strictly between 0 and 1"))),
        }
    }
}

/// Per-parameter incremental state.
struct ParamState {
    arg: ExactScalar,
    base: ExactScalar,
    pow: ExactScalar,
    scale: u32,
}

impl ParamState {
    fn new(p: &PochParam, env: &Env<'_>) -> Result<Self> {
        let arg = p.arg.eval(env)?;
        let base = p.base.eval(env)?;
        Ok(ParamState { arg, base, pow: ExactScalar::one(), scale: p.scale })
    }

    /// Next factor `1 − arg·base^i` and advance `i`.
    fn next_factor(&mut self) -> ExactScalar {
        let f = &ExactScalar::one() - &(&self.arg * &self.pow);
        self.pow *= &self.base;
        f
    }
}

impl SeriesSpec {
    pub fn is_terminating(&self) -> bool {
        matches!(self.termination, Termination::At(_))
    }

    pub fn visit_exprs(&self, f: &mut dyn FnMut(&Expr)) {
        for p in self.numer.iter().chain(&self.denom) {
            p.arg.visit(f);
            p.base.visit(f);
        }
        self.argument.visit(f);
        if let Some(m) = &self.multiplier {
            m.visit(f);
        }
        if let Termination::At(e) = &self.termination {
            e.visit(f);
        }
    }

    fn upper(&self, env: &Env<'_>) -> Result<Option<i64>> {
        match &self.termination {
            Termination::Infinite => Ok(None),
            Termination::At(e) => Ok(Some(to_int(&e.eval(env)?)?)),
        }
    }

    fn mult(&self, env: &Env<'_>, n: i64) -> Result<ExactScalar> {
        match &self.multiplier {
            Some(m) => m.eval(&env.with(Index::N, n)),
            None => Ok(ExactScalar::one()),
        }
    }

    fn pole(&self, p: &PochParam, n: i64) -> Error {
        Error::pole(format!("({}; {}) in {}", p.arg, p.base, self.label), Some(n))
    }

    /// Exact value of a terminating spec.
    pub fn eval_exact(&self, env: &Env<'_>) -> Result<ExactScalar> {
        match self.upper(env)? {
            Some(upper) => self.eval_finite(env, upper),
            None => Err(Error::NotExact(format!("non-terminating series {}", self.label))),
        }
    }

    /// `Σ_{n=lower}^{upper} term(n)`, terms built incrementally.
    pub fn eval_finite(&self, env: &Env<'_>, upper: i64) -> Result<ExactScalar> {
        let mut num: Vec<ParamState> = self.numer.iter().map(|p| ParamState::new(p, env)).collect::<Result<_>>()?;
        let mut den: Vec<ParamState> = self.denom.iter().map(|p| ParamState::new(p, env)).collect::<Result<_>>()?;
        let x = self.argument.eval(env)?;
        let mut prod = ExactScalar::one();
        let mut acc = ExactScalar::zero();
        let start = self.lower.max(0);
        let mut xpow = if x.is_zero() && start > 0 { ExactScalar::zero() } else { x.pow(start)? };
        for n in 0..=upper {
            if n >= start {
                // a vanishing factor does not excuse a pole in the multiplier
                let m = self.mult(env, n)?;
                if !prod.is_zero() && !xpow.is_zero() {
                    acc += &(&(&prod * &xpow) * &m);
                }
                xpow *= &x;
            }
            if n == upper {
                break;
            }
            for st in num.iter_mut() {
                for _ in 0..st.scale {
                    prod *= &st.next_factor();
                }
            }
            for (st, p) in den.iter_mut().zip(&self.denom) {
                for _ in 0..st.scale {
                    let f = st.next_factor();
                    if f.is_zero() {
                        return Err(self.pole(p, n + 1));
                    }
                    prod = prod.checked_div(&f)?;
                }
            }
        }
        Ok(acc)
    }

    /// `Σ_{n=−n_neg}^{n_pos} term(n)` with negative-index Pochhammers.
    pub fn eval_bilateral_partial(&self, env: &Env<'_>, n_neg: i64, n_pos: i64) -> Result<ExactScalar> {
        let mut acc = self.eval_finite(env, n_pos)?;
        if self.lower > 0 || n_neg <= 0 {
            return Ok(acc);
        }
        let x = self.argument.eval(env)?;
        let xinv = x.inv()?;
        let states = |ps: &[PochParam]| -> Result<Vec<(ExactScalar, ExactScalar, u32)>> {
            ps.iter()
                .map(|p| Ok((p.arg.eval(env)?, p.base.eval(env)?.inv()?, p.scale)))
                .collect()
        };
        // walking down: (x;b)_{-(i+1)} = (x;b)_{-i} / (1 − x b^{-(i+1)})
        let mut num = states(&self.numer)?;
        let mut den = states(&self.denom)?;
        let mut num_pow: Vec<ExactScalar> = num.iter().map(|s| s.1.clone()).collect();
        let mut den_pow: Vec<ExactScalar> = den.iter().map(|s| s.1.clone()).collect();
        let mut prod = ExactScalar::one();
        let mut xpow = ExactScalar::one();
        for m in 1..=n_neg {
            for (i, st) in num.iter_mut().enumerate() {
                for _ in 0..st.2 {
                    let f = &ExactScalar::one() - &(&st.0 * &num_pow[i]);
                    if f.is_zero() {
                        return Err(self.pole(&self.numer[i], -m));
                    }
                    prod = prod.checked_div(&f)?;
                    num_pow[i] *= &st.1;
                }
            }
            for (i, st) in den.iter_mut().enumerate() {
                for _ in 0..st.2 {
                    let f = &ExactScalar::one() - &(&st.0 * &den_pow[i]);
                    prod *= &f;
                    den_pow[i] *= &st.1;
                }
            }
            xpow *= &xinv;
            let mv = self.mult(env, -m)?;
            if !prod.is_zero() {
                acc += &(&(&prod * &xpow) * &mv);
            }
        }
        Ok(acc)
    }

    /// Truncated power series of the sum (series backend).
    pub fn eval_series(&self, env: &Env<'_>, ctx: &SeriesCtx) -> Result<TruncatedSeries> {
        let upper = self.upper(env)?;
        let Some(val) = &self.valuation else {
            return match upper {
                Some(u) => {
                    let mut acc = TruncatedSeries::zero(ctx.order, ctx.var);
                    for n in self.lower..=u {
                        acc = acc.add(&self.term_series(env, ctx, n)?)?;
                    }
                    Ok(acc)
                }
                None => Err(Error::Series(format!("{} has no valuation bound", self.label))),
            };
        };
        let cap = upper.map_or(ctx.n_cap, |u| u.min(ctx.n_cap));
        let bound = |n: i64| -> Result<Option<i64>> {
            if upper.is_some_and(|u| n > u) {
                return Ok(None);
            }
            Ok(Some(to_int(&val.eval(&env.with(Index::N, n))?)?))
        };
        let res = sum_terms_by_valuation(|n| self.term_series(env, ctx, n), bound, ctx.order, ctx.var, self.lower, cap + 1);
        match (res, upper) {
            // a terminating sum may end before its bound passes the order
            (Err(Error::Series(m)), Some(_)) if m.contains("did not pass") => {
                let mut acc = TruncatedSeries::zero(ctx.order, ctx.var);
                for n in self.lower..=cap {
                    acc = acc.add(&self.term_series(env, ctx, n)?)?;
                }
                Ok(acc)
            }
            (r, _) => r,
        }
    }

    fn term_series(&self, env: &Env<'_>, ctx: &SeriesCtx, n: i64) -> Result<TruncatedSeries> {
        let en = env.with(Index::N, n);
        let mut t = ctx.poch_product(&self.numer, &en, n)?;
        let den = ctx.poch_product(&self.denom, &en, n)?;
        t = t.mul(&den.inverse().map_err(|_| {
            Error::pole(format!("denominator of {} at t = 0", self.label), Some(n))
        })?)?;
        let x = self.argument.eval_series(&en, ctx)?;
        t = t.mul(&x.pow(n)?)?;
        if let Some(m) = &self.multiplier {
            t = t.mul(&m.eval_series(&en, ctx)?)?;
        }
        Ok(t)
    }

    /// Ball enclosure (interval backend).
    pub fn eval_interval(&self, env: &Env<'_>, ctx: &BallCtx) -> Result<IntervalValue> {
        if let Some(u) = self.upper(env)? {
            return IntervalValue::from_scalar(&self.eval_finite(env, u)?);
        }
        let policy = &ctx.tail;
        let real = |e: &Expr| -> Result<BigRational> {
            let v = e.eval(env)?;
            v.as_real().cloned().ok_or_else(|| Error::Interval(format!("complex parameter {e}")))
        };
        let load = |ps: &[PochParam]| -> Result<Vec<(BigRational, BigRational, BigRational, u32)>> {
            ps.iter()
                .map(|p| Ok((real(&p.arg)?, real(&p.base)?, BigRational::one(), p.scale)))
                .collect()
        };
        let mut num = load(&self.numer)?;
        let mut den = load(&self.denom)?;
        let x = IntervalValue::exact(real(&self.argument)?);
        let mut prod = IntervalValue::one();
        let mut xpow = IntervalValue::one();
        let mut sum = IntervalValue::zero();
        let mut mags: Vec<(BigRational, BigRational)> = Vec::new();
        let one_minus_rho = BigRational::one() - &policy.ratio_cap;
        for n in 0..policy.max_terms as i64 {
            if n >= self.lower {
                let mult = match &self.multiplier {
                    Some(m) => m.eval_ball(&env.with(Index::N, n), ctx)?,
                    None => IntervalValue::one(),
                };
                if prod.center().is_zero() && prod.radius().is_zero() {
                    return Ok(sum);
                }
                let t = prod.mul(&xpow).mul(&mult);
                sum = sum.add(&t);
                mags.push((t.mag(), t.mig()));
                let w = policy.window;
                if n as usize >= policy.n_start && mags.len() > w {
                    let tail = &mags[mags.len() - w - 1..];
                    let ok = tail
                        .windows(2)
                        .all(|p| p[1].0.is_zero() || (!p[0].1.is_zero() && p[1].0 <= &policy.ratio_cap * &p[0].1));
                    if ok {
                        let bound = &mags.last().unwrap().0 * &policy.ratio_cap / &one_minus_rho;
                        if bound <= policy.target_radius {
                            return Ok(sum.widen(&bound).mark_heuristic());
                        }
                    }
                }
            }
            xpow = xpow.mul(&x);
            let mut ratio = BigRational::one();
            for st in num.iter_mut() {
                for _ in 0..st.3 {
                    ratio *= BigRational::one() - &st.0 * &st.2;
                    st.2 *= &st.1;
                }
            }
            for (i, st) in den.iter_mut().enumerate() {
                for _ in 0..st.3 {
                    let f = BigRational::one() - &st.0 * &st.2;
                    if f.is_zero() {
                        return Err(self.pole(&self.denom[i], n + 1));
                    }
                    ratio /= f;
                    st.2 *= &st.1;
                }
            }
            prod = prod.mul(&IntervalValue::exact(ratio));
        }
        Err(Error::Interval(format!(
            "{}: ratio window ≤ {} not reached within {} terms",
            self.label, policy.ratio_cap, policy.max_terms
        )))
    }

    pub(crate) fn collect_sites(&self, out: &mut Vec<MutationSite>) {
        for p in self.numer.iter().chain(&self.denom) {
            let ordinal = out.len();
            out.push(MutationSite {
                ordinal,
                description: format!("parameter ({}; {}) of {} multiplied by q", p.arg, p.base, self.label),
            });
            p.arg.collect_sites(out);
            p.base.collect_sites(out);
        }
        self.argument.collect_sites(out);
        if let Some(m) = &self.multiplier {
            m.collect_sites(out);
        }
    }

    pub(crate) fn mutate(&self, target: usize, counter: &mut usize) -> SeriesSpec {
        let mut out = self.clone();
        let walk = |ps: &mut Vec<PochParam>, counter: &mut usize| {
            for p in ps.iter_mut() {
                let here = *counter == target;
                *counter += 1;
                p.arg = p.arg.mutate(target, counter);
                p.base = p.base.mutate(target, counter);
                if here {
                    p.arg = Expr::mul(p.arg.clone(), Expr::sym("q"));
                }
            }
        };
        let (mut numer, mut denom) = (out.numer.clone(), out.denom.clone());
        walk(&mut numer, counter);
        walk(&mut denom, counter);
        out.numer = numer;
        out.denom = denom;
        out.argument = self.argument.mutate(target, counter);
        out.multiplier = self.multiplier.as_ref().map(|m| m.mutate(target, counter));
        out
    }
}

/// `(arg; base)_∞` as a ball: partial product plus a rigorous tail.
///
/// With `T = |arg|·|base|^J / (1 − |base|) < 1`, the remaining factors
/// multiply to within `T/(1−T)` of 1.
pub fn eval_product_interval(arg: &BigRational, base: &BigRational, policy: &TailPolicy) -> Result<IntervalValue> {
    let b = base.abs();
    if b >= BigRational::one() {
        return Err(Error::Interval(format!("infinite product with |base| = {b} ≥ 1")));
    }
    if arg.is_zero() {
        return Ok(IntervalValue::one());
    }
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    let denom = &one - &b;
    let mut partial = IntervalValue::one();
    let mut c = arg.clone();
    for j in 0..=policy.max_terms {
        let t = c.abs() / &denom;
        if t < half {
            let r = &t / (&one - &t);
            if partial.mag() * &r <= policy.target_radius || j == policy.max_terms {
                let tail = IntervalValue::with_radius(one.clone(), r);
                return Ok(partial.mul(&tail));
            }
        }
        let f = &one - &c;
        if f.is_zero() {
            return Ok(IntervalValue::zero());
        }
        partial = partial.mul(&IntervalValue::exact(f));
        c *= base;
    }
    Err(Error::Interval("infinite product tail bound not reached".into()))
}

/// Product of several `(c; base)_∞` factors.
pub fn eval_products_interval(factors: &[(BigRational, BigRational)], policy: &TailPolicy) -> Result<IntervalValue> {
    let mut acc = IntervalValue::one();
    for (c, b) in factors {
        acc = acc.mul(&eval_product_interval(c, b, policy)?);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Builder used by the registries
// ---------------------------------------------------------------------------

/// Splits a comma list at depth zero.
fn split_top(list: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in list.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(list[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = list[start..].trim();
    if !last.is_empty() {
        out.push(last);
    }
    out
}

/// Fluent construction of a [`SeriesSpec`]; parse errors surface at
/// [`SeriesBuilder::build`].
pub struct SeriesBuilder<'c> {
    ctx: &'c ParseCtx,
    spec: SeriesSpec,
    base: String,
    err: Option<Error>,
}

impl<'c> SeriesBuilder<'c> {
    pub fn new(ctx: &'c ParseCtx, label: &str) -> Self {
        SeriesBuilder {
            ctx,
            spec: SeriesSpec {
                label: label.to_string(),
                numer: Vec::new(),
                denom: Vec::new(),
                argument: Expr::int(1),
                multiplier: None,
                lower: 0,
                termination: Termination::Infinite,
                valuation: None,
            },
            base: "q".to_string(),
            err: None,
        }
    }

    fn parse(&mut self, src: &str) -> Expr {
        match self.ctx.parse(src) {
            Ok(e) => e,
            Err(e) => {
                self.err.get_or_insert(Error::Parse {
                    pos: 0,
                    msg: format!("{}: `{src}`: {e}", self.spec.label),
                });
                Expr::int(0)
            }
        }
    }

    /// Default base for subsequent `num`/`den` lists.
    pub fn base(mut self, b: &str) -> Self {
        self.base = b.to_string();
        self
    }

    fn params(&mut self, list: &str, base: &str, scale: u32) -> Vec<PochParam> {
        let base_e = self.parse(base);
        split_top(list)
            .into_iter()
            .map(|a| PochParam { arg: self.parse(a), base: base_e.clone(), scale })
            .collect()
    }

    pub fn num(mut self, list: &str) -> Self {
        let b = self.base.clone();
        let ps = self.params(list, &b, 1);
        self.spec.numer.extend(ps);
        self
    }

    pub fn den(mut self, list: &str) -> Self {
        let b = self.base.clone();
        let ps = self.params(list, &b, 1);
        self.spec.denom.extend(ps);
        self
    }

    pub fn num_with(mut self, list: &str, base: &str, scale: u32) -> Self {
        let ps = self.params(list, base, scale);
        self.spec.numer.extend(ps);
        self
    }

    pub fn den_with(mut self, list: &str, base: &str, scale: u32) -> Self {
        let ps = self.params(list, base, scale);
        self.spec.denom.extend(ps);
        self
    }

    /// Adds the `(base; base)_n` denominator of a `φ` series.
    pub fn phi(self) -> Self {
        let b = self.base.clone();
        self.den(&b)
    }

    pub fn arg(mut self, x: &str) -> Self {
        self.spec.argument = self.parse(x);
        self
    }

    pub fn mult(mut self, m: &str) -> Self {
        self.spec.multiplier = Some(self.parse(m));
        self
    }

    pub fn upper(mut self, u: &str) -> Self {
        self.spec.termination = Termination::At(self.parse(u));
        self
    }

    pub fn lower(mut self, l: i64) -> Self {
        self.spec.lower = l;
        self
    }

    pub fn valuation(mut self, v: &str) -> Self {
        self.spec.valuation = Some(self.parse(v));
        self
    }

    pub fn build(self) -> Result<SeriesSpec> {
        match self.err {
            Some(e) => Err(e),
            None => Ok(self.spec),
        }
    }

    pub fn expr(self) -> Result<Expr> {
        self.build().map(Expr::series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SeriesVar;
    use crate::poch::poch;
    use crate::point::Values;
    use proptest::prelude::*;

    fn vals(v: &[(&str, ExactScalar)]) -> Values {
        v.iter().map(|(k, x)| (k.to_string(), x.clone())).collect()
    }

    fn brute(spec: &SeriesSpec, env: &Env<'_>, upper: i64) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for n in spec.lower..=upper {
            let mut t = spec.argument.eval(env).unwrap().pow(n).unwrap();
            for p in &spec.numer {
                t *= &poch(&p.arg.eval(env).unwrap(), &p.base.eval(env).unwrap(), n * p.scale as i64).unwrap();
            }
            for p in &spec.denom {
                let d = poch(&p.arg.eval(env).unwrap(), &p.base.eval(env).unwrap(), n * p.scale as i64).unwrap();
                t = t.checked_div(&d).unwrap();
            }
            if let Some(m) = &spec.multiplier {
                t *= &m.eval(&env.with(Index::N, n)).unwrap();
            }
            acc += &t;
        }
        acc
    }

    #[test]
    fn empty_sum_is_one() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "t").num("a, b").den("c").phi().arg("q").upper("N").build().unwrap();
        let v = vals(&[("a", ExactScalar::ratio(2, 3)), ("b", ExactScalar::ratio(5, 7)), ("c", ExactScalar::ratio(-1, 3)), ("q", ExactScalar::ratio(1, 4))]);
        let env = Env::new(&v).with(Index::BigN, 0);
        assert_eq!(s.eval_exact(&env).unwrap(), ExactScalar::one());
        let with_one = SeriesBuilder::new(&ctx, "t").num("1, b").den("c").phi().arg("q").upper("N").build().unwrap();
        let env5 = Env::new(&v).with(Index::BigN, 5);
        assert_eq!(with_one.eval_exact(&env5).unwrap(), ExactScalar::one());
    }

    #[test]
    fn incremental_matches_brute_force() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "mixed")
            .num("a, q*ra, -q*ra")
            .den("ra, -ra")
            .num_with("b", "q^2", 1)
            .den_with("c", "q", 2)
            .phi()
            .arg("-q")
            .mult("(1 - a*q^(2*n))")
            .upper("N")
            .build()
            .unwrap();
        let v = vals(&[
            ("a", ExactScalar::ratio(4, 9)),
            ("ra", ExactScalar::ratio(2, 3)),
            ("b", ExactScalar::ratio(-3, 5)),
            ("c", ExactScalar::ratio(7, 2)),
            ("q", ExactScalar::ratio(1, 3)),
        ]);
        for n in 0..7 {
            let env = Env::new(&v).with(Index::BigN, n);
            assert_eq!(s.eval_exact(&env).unwrap(), brute(&s, &env, n));
        }
    }

    #[test]
    fn pole_names_index() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "p").den("q^-2").arg("1").upper("N").build().unwrap();
        let v = vals(&[("q", ExactScalar::ratio(1, 2))]);
        let err = s.eval_exact(&Env::new(&v).with(Index::BigN, 4)).unwrap_err();
        assert_eq!(err, Error::Pole { factor: "(q^(-2); q) in p".into(), index: Some(3) });
    }

    #[test]
    fn geometric_interval() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "geo").arg("1/3").build().unwrap();
        let v = Values::new();
        let policy = TailPolicy { ratio_cap: BigRational::new(1.into(), 3.into()), ..Default::default() };
        let b = s.eval_interval(&Env::new(&v), &BallCtx { tail: policy }).unwrap();
        assert!(b.contains(&BigRational::new(3.into(), 2.into())));
        assert!(!b.is_rigorous());
        assert!(b.width() < BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(20)));
    }

    #[test]
    fn interval_respects_lower_bound() {
        // Σ_{n≥2} (1/3)^n = 1/6
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "geo").arg("1/3").lower(2).build().unwrap();
        let v = Values::new();
        let policy = TailPolicy { ratio_cap: BigRational::new(1.into(), 3.into()), ..Default::default() };
        let b = s.eval_interval(&Env::new(&v), &BallCtx { tail: policy }).unwrap();
        assert!(b.contains(&BigRational::new(1.into(), 6.into())), "{b:?}");
    }

    #[test]
    fn terminating_interval_is_exact() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "t").num("a, q^(-N)").den("c").phi().arg("q").upper("N").build().unwrap();
        let v = vals(&[("a", ExactScalar::ratio(2, 3)), ("c", ExactScalar::ratio(-5, 7)), ("q", ExactScalar::ratio(1, 4))]);
        let env = Env::new(&v).with(Index::BigN, 4);
        let b = s.eval_interval(&env, &BallCtx::default()).unwrap();
        assert!(b.radius().is_zero());
        assert_eq!(ExactScalar::real(b.center().clone()), s.eval_exact(&env).unwrap());
    }

    #[test]
    fn euler_product_interval() {
        let half = BigRational::new(1.into(), 2.into());
        let p = eval_product_interval(&half, &half, &TailPolicy::default()).unwrap();
        assert!(p.width() <= BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(20)));
        // (1/2;1/2)_∞ = 0.288788095086602421278899721929...
        let approx = BigRational::new(288788095086602421u64.into(), num_bigint::BigInt::from(10).pow(18));
        assert!((p.center() - approx).abs() < BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(17)));
        assert_eq!(eval_products_interval(&[], &TailPolicy::default()).unwrap(), IntervalValue::one());
        assert_eq!(eval_product_interval(&BigRational::zero(), &half, &TailPolicy::default()).unwrap(), IntervalValue::one());
        assert!(eval_product_interval(&half, &BigRational::one(), &TailPolicy::default()).is_err());
    }

    #[test]
    fn bilateral_zero_window() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "b").num("c").den("q^2/c").arg("q").build().unwrap();
        let v = vals(&[("c", ExactScalar::ratio(3, 1)), ("q", ExactScalar::ratio(1, 5))]);
        assert_eq!(s.eval_bilateral_partial(&Env::new(&v), 0, 0).unwrap(), ExactScalar::one());
        let neg = s.eval_bilateral_partial(&Env::new(&v), 3, 0).unwrap();
        let mut want = ExactScalar::one();
        let c = ExactScalar::from_int(3);
        let q = ExactScalar::ratio(1, 5);
        for m in 1..=3i64 {
            let t = poch(&c, &q, -m).unwrap().checked_div(&poch(&(&(&q * &q).checked_div(&c).unwrap()), &q, -m).unwrap()).unwrap()
                * q.pow(-m).unwrap();
            want += &t;
        }
        assert_eq!(neg, want);
    }

    #[test]
    fn series_mode_geometric() {
        let ctx = ParseCtx::new();
        let s = SeriesBuilder::new(&ctx, "g").arg("q").valuation("n").build().unwrap();
        let v = Values::new();
        let sc = SeriesCtx { var: SeriesVar::Q, order: 5, n_cap: 100 };
        let got = s.eval_series(&Env::new(&v), &sc).unwrap();
        assert_eq!(got, TruncatedSeries::one(5, SeriesVar::Q).sub(&TruncatedSeries::monomial(ExactScalar::one(), 1, 5, SeriesVar::Q)).unwrap().inverse().unwrap());
        let m0 = SeriesCtx { order: 0, ..sc };
        assert_eq!(s.eval_series(&Env::new(&v), &m0).unwrap(), TruncatedSeries::one(0, SeriesVar::Q));
    }

    fn small() -> impl Strategy<Value = ExactScalar> {
        (-7i64..8, 1i64..6)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ExactScalar::ratio(n, d))
    }

    proptest! {
        #[test]
        fn parameter_permutation_invariance(a in small(), b in small(), c in small(), d in small(), s in small(), n in 0i64..6) {
            let ctx = ParseCtx::new();
            let v = vals(&[("a", a), ("b", b), ("c", c), ("d", d), ("q", &s * &s)]);
            let env = Env::new(&v).with(Index::BigN, n);
            let one = SeriesBuilder::new(&ctx, "x").num("a, b, q^(-N)").den("c, d").phi().arg("q").upper("N").build().unwrap();
            let two = SeriesBuilder::new(&ctx, "x").num("q^(-N), b, a").den("d, c").phi().arg("q").upper("N").build().unwrap();
            prop_assert_eq!(one.eval_exact(&env).ok(), two.eval_exact(&env).ok());
        }

        #[test]
        fn very_well_poised_factor(ra in small(), s in small(), y in small(), n in 0i64..12) {
            let ctx = ParseCtx::new();
            let v = vals(&[("ra", ra.clone()), ("a", &ra * &ra), ("y", y), ("q", &s * &s)]);
            let env = Env::new(&v).with(Index::BigN, n);
            let pairs = SeriesBuilder::new(&ctx, "w").num("a, q*ra, -q*ra, y").den("ra, -ra, a*q/y").phi().arg("q").lower(0).upper("N").build().unwrap();
            let mult = SeriesBuilder::new(&ctx, "w").num("a, y").den("a*q/y").phi().arg("q").mult("(1 - a*q^(2*n))/(1 - a)").upper("N").build().unwrap();
            // only pole-free points are comparable (a = 1 is a pole of the multiplier)
            if let (Ok(x), Ok(y)) = (pairs.eval_exact(&env), mult.eval_exact(&env)) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
