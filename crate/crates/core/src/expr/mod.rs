//! Expression trees for identity sides and pair sequences.
//!
//! One tree is evaluated three ways: exactly ([`Expr::eval`]), as a
//! truncated power series (`series_eval`), and as a ball (`ball_eval`).

mod ball_eval;
mod parse;
mod series_eval;

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::hyper::SeriesSpec;
use crate::pairs::WPBaileyPair;
use crate::poch::poch;
use crate::point::Values;
use crate::scalar::ExactScalar;

pub use ball_eval::BallCtx;
pub use parse::ParseCtx;
pub use series_eval::{SeriesCtx, SeriesVar};

/// Integer index variables: the structural `N`, the summation `n`, and the
/// inner `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    BigN,
    N,
    J,
}

impl Index {
    pub fn name(self) -> &'static str {
        match self {
            Index::BigN => "N",
            Index::N => "n",
            Index::J => "j",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Which pair sequence a [`Expr::Pair`] node reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seq {
    Alpha,
    Beta,
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(ExactScalar),
    Sym(Arc<str>),
    Idx(Index),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer exponent only.
    Pow(Box<Expr>, Box<Expr>),
    /// `(arg; base)_len`, negative `len` allowed.
    Poch { arg: Box<Expr>, base: Box<Expr>, len: Box<Expr> },
    PochInf { arg: Box<Expr>, base: Box<Expr> },
    Sum { var: Index, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
    Parity { of: Box<Expr>, even: Box<Expr>, odd: Box<Expr> },
    IfZero { of: Box<Expr>, zero: Box<Expr>, other: Box<Expr> },
    Floor(Box<Expr>),
    Series(Arc<SeriesSpec>),
    Pair { seq: Seq, pair: Arc<WPBaileyPair>, index: Box<Expr> },
}

/// Evaluation environment: symbol values plus bound index variables.
#[derive(Clone, Copy)]
pub struct Env<'a> {
    pub values: &'a Values,
    idx: [Option<i64>; 3],
}

impl<'a> Env<'a> {
    pub fn new(values: &'a Values) -> Self {
        Env { values, idx: [None; 3] }
    }

    pub fn with(mut self, var: Index, v: i64) -> Self {
        self.idx[var.slot()] = Some(v);
        self
    }

    pub fn index(&self, var: Index) -> Result<i64> {
        self.idx[var.slot()].ok_or(Error::UnboundIndex(var.name()))
    }

    pub fn lookup(&self, name: &str) -> Result<&'a ExactScalar> {
        self.values.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        ParseCtx::default().parse(src)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(ExactScalar::from_int(n))
    }

    pub fn num(v: ExactScalar) -> Expr {
        Expr::Num(v)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(Arc::from(name))
    }

    pub fn pow(base: Expr, e: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(e))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(vec![a, b])
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Add(vec![a, Expr::Neg(Box::new(b))])
    }

    pub fn series(spec: SeriesSpec) -> Expr {
        Expr::Series(Arc::new(spec))
    }

    /// True when an exact evaluation is possible (no infinite objects).
    pub fn is_finite(&self) -> bool {
        let mut finite = true;
        self.visit(&mut |e| match e {
            Expr::PochInf { .. } => finite = false,
            Expr::Series(s) if !s.is_terminating() => finite = false,
            _ => {}
        });
        finite
    }

    /// Pre-order walk over the tree, including series parameters.
    pub fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Sym(_) | Expr::Idx(_) => {}
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.visit(f)),
            Expr::Neg(x) | Expr::Floor(x) => x.visit(f),
            Expr::Div(a, b) | Expr::Pow(a, b) | Expr::PochInf { arg: a, base: b } => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Poch { arg, base, len } => {
                arg.visit(f);
                base.visit(f);
                len.visit(f);
            }
            Expr::Sum { lo, hi, body, .. } => {
                lo.visit(f);
                hi.visit(f);
                body.visit(f);
            }
            Expr::Parity { of, even, odd } => {
                of.visit(f);
                even.visit(f);
                odd.visit(f);
            }
            Expr::IfZero { of, zero, other } => {
                of.visit(f);
                zero.visit(f);
                other.visit(f);
            }
            Expr::Series(s) => s.visit_exprs(f),
            Expr::Pair { index, .. } => index.visit(f),
        }
    }

    /// Free symbols (not index variables, not pair internals).
    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Sym(s) = e {
                out.insert(s.to_string());
            }
        });
        out
    }
}

/// Extracts an integer from an exact value.
pub(crate) fn to_int(v: &ExactScalar) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::NotInteger(v.to_string()))
}

// ---------------------------------------------------------------------------
// Exact evaluation
// ---------------------------------------------------------------------------

impl Expr {
    pub fn eval(&self, env: &Env<'_>) -> Result<ExactScalar> {
        match self {
            Expr::Num(v) => Ok(v.clone()),
            Expr::Sym(s) => env.lookup(s).cloned(),
            Expr::Idx(i) => Ok(ExactScalar::from_int(env.index(*i)?)),
            Expr::Add(xs) => {
                let mut acc = ExactScalar::zero();
                for x in xs {
                    acc += &x.eval(env)?;
                }
                Ok(acc)
            }
            Expr::Mul(xs) => {
                let mut acc = ExactScalar::one();
                for x in xs {
                    acc *= &x.eval(env)?;
                    if acc.is_zero() {
                        // still surface poles further along
                        for rest in xs {
                            rest.eval(env)?;
                        }
                        return Ok(acc);
                    }
                }
                Ok(acc)
            }
            Expr::Neg(x) => Ok(-x.eval(env)?),
            Expr::Div(a, b) => {
                let den = b.eval(env)?;
                if den.is_zero() {
                    return Err(Error::pole(b.to_string(), env.idx_hint()));
                }
                a.eval(env)?.checked_div(&den)
            }
            Expr::Pow(b, e) => {
                let e = to_int(&e.eval(env)?)?;
                let base = b.eval(env)?;
                if e < 0 && base.is_zero() {
                    return Err(Error::pole(b.to_string(), env.idx_hint()));
                }
                base.pow(e)
            }
            Expr::Poch { arg, base, len } => {
                let len = to_int(&len.eval(env)?)?;
                poch(&arg.eval(env)?, &base.eval(env)?, len).map_err(|e| match e {
                    Error::Pole { .. } | Error::DivisionByZero => {
                        Error::pole(self.to_string(), env.idx_hint())
                    }
                    other => other,
                })
            }
            Expr::PochInf { .. } => Err(Error::NotExact(self.to_string())),
            Expr::Sum { var, lo, hi, body } => {
                let lo = to_int(&lo.eval(env)?)?;
                let hi = to_int(&hi.eval(env)?)?;
                let mut acc = ExactScalar::zero();
                for i in lo..=hi {
                    acc += &body.eval(&env.with(*var, i))?;
                }
                Ok(acc)
            }
            Expr::Parity { of, even, odd } => {
                if to_int(&of.eval(env)?)? % 2 == 0 {
                    even.eval(env)
                } else {
                    odd.eval(env)
                }
            }
            Expr::IfZero { of, zero, other } => {
                if of.eval(env)?.is_zero() {
                    zero.eval(env)
                } else {
                    other.eval(env)
                }
            }
            Expr::Floor(x) => {
                let v = x.eval(env)?;
                let r = v.as_real().ok_or_else(|| Error::NotInteger(v.to_string()))?;
                Ok(ExactScalar::real(r.floor()))
            }
            Expr::Series(spec) => spec.eval_exact(env),
            Expr::Pair { seq, pair, index } => {
                let n = to_int(&index.eval(env)?)?;
                pair.eval_in(env.values, *seq, n)
            }
        }
    }
}

impl Env<'_> {
    fn idx_hint(&self) -> Option<i64> {
        self.idx[Index::N.slot()].or(self.idx[Index::J.slot()])
    }
}

// ---------------------------------------------------------------------------
// Mutation sites (single-factor exponent perturbations)
// ---------------------------------------------------------------------------

/// One perturbable spot: an integer power whose exponent is bumped by one,
/// or a Pochhammer argument multiplied by `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationSite {
    pub ordinal: usize,
    pub description: String,
}

impl Expr {
    pub fn mutation_sites(&self) -> Vec<MutationSite> {
        let mut out = Vec::new();
        self.collect_sites(&mut out);
        out
    }

    pub(crate) fn collect_sites(&self, out: &mut Vec<MutationSite>) {
        let mut push = |d: String| {
            let ordinal = out.len();
            out.push(MutationSite { ordinal, description: d });
        };
        match self {
            Expr::Pow(b, e) => {
                push(format!("exponent of {self} bumped by 1"));
                b.collect_sites(out);
                e.collect_sites(out);
            }
            Expr::Poch { arg, base, len } => {
                push(format!("argument of {self} multiplied by q"));
                arg.collect_sites(out);
                base.collect_sites(out);
                len.collect_sites(out);
            }
            Expr::PochInf { arg, base } => {
                push(format!("argument of {self} multiplied by q"));
                arg.collect_sites(out);
                base.collect_sites(out);
            }
            Expr::Series(s) => s.collect_sites(out),
            _ => self.for_each_child(&mut |c| c.collect_sites(out)),
        }
    }

    fn for_each_child(&self, f: &mut dyn FnMut(&Expr)) {
        match self {
            Expr::Num(_) | Expr::Sym(_) | Expr::Idx(_) | Expr::Series(_) => {}
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| f(x)),
            Expr::Neg(x) | Expr::Floor(x) => f(x),
            Expr::Div(a, b) | Expr::Pow(a, b) | Expr::PochInf { arg: a, base: b } => {
                f(a);
                f(b);
            }
            Expr::Poch { arg, base, len } => {
                f(arg);
                f(base);
                f(len);
            }
            Expr::Sum { lo, hi, body, .. } => {
                f(lo);
                f(hi);
                f(body);
            }
            Expr::Parity { of, even, odd } => {
                f(of);
                f(even);
                f(odd);
            }
            Expr::IfZero { of, zero, other } => {
                f(of);
                f(zero);
                f(other);
            }
            Expr::Pair { index, .. } => f(index),
        }
    }

    /// Copy of the tree with site `target` perturbed; `counter` tracks the
    /// ordinal across a multi-tree walk.
    pub fn mutate(&self, target: usize, counter: &mut usize) -> Expr {
        let hit = |counter: &mut usize| {
            let h = *counter == target;
            *counter += 1;
            h
        };
        let m = |e: &Expr, c: &mut usize| Box::new(e.mutate(target, c));
        match self {
            Expr::Pow(b, e) => {
                let here = hit(counter);
                let b2 = m(b, counter);
                let e2 = m(e, counter);
                if here {
                    Expr::Pow(b2, Box::new(Expr::Add(vec![*e2, Expr::int(1)])))
                } else {
                    Expr::Pow(b2, e2)
                }
            }
            Expr::Poch { arg, base, len } => {
                let here = hit(counter);
                let (a2, b2, l2) = (m(arg, counter), m(base, counter), m(len, counter));
                let a2 = if here { Box::new(Expr::mul(*a2, Expr::sym("q"))) } else { a2 };
                Expr::Poch { arg: a2, base: b2, len: l2 }
            }
            Expr::PochInf { arg, base } => {
                let here = hit(counter);
                let (a2, b2) = (m(arg, counter), m(base, counter));
                let a2 = if here { Box::new(Expr::mul(*a2, Expr::sym("q"))) } else { a2 };
                Expr::PochInf { arg: a2, base: b2 }
            }
            Expr::Series(s) => Expr::Series(Arc::new(s.mutate(target, counter))),
            Expr::Num(_) | Expr::Sym(_) | Expr::Idx(_) => self.clone(),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.mutate(target, counter)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| x.mutate(target, counter)).collect()),
            Expr::Neg(x) => Expr::Neg(m(x, counter)),
            Expr::Floor(x) => Expr::Floor(m(x, counter)),
            Expr::Div(a, b) => {
                let a2 = m(a, counter);
                Expr::Div(a2, m(b, counter))
            }
            Expr::Sum { var, lo, hi, body } => {
                let (lo2, hi2) = (m(lo, counter), m(hi, counter));
                Expr::Sum { var: *var, lo: lo2, hi: hi2, body: m(body, counter) }
            }
            Expr::Parity { of, even, odd } => {
                let (o2, e2) = (m(of, counter), m(even, counter));
                Expr::Parity { of: o2, even: e2, odd: m(odd, counter) }
            }
            Expr::IfZero { of, zero, other } => {
                let (o2, z2) = (m(of, counter), m(zero, counter));
                Expr::IfZero { of: o2, zero: z2, other: m(other, counter) }
            }
            Expr::Pair { seq, pair, index } => {
                Expr::Pair { seq: *seq, pair: pair.clone(), index: m(index, counter) }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Display (parseable for everything except series and pair nodes)
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(_) => 1,
        Expr::Mul(_) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(v) if !v.is_real() || v.re().is_negative() || !v.re().is_integer() => 2,
        _ => 5,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Idx(i) => f.write_str(i.name()),
            Expr::Add(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    match (i, x) {
                        (0, _) => write!(f, "{}", wrap(x, 1))?,
                        (_, Expr::Neg(inner)) => write!(f, " - {}", wrap(inner, 2))?,
                        _ => write!(f, " + {}", wrap(x, 2))?,
                    }
                }
                Ok(())
            }
            Expr::Mul(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| wrap(x, 3)).collect();
                f.write_str(&parts.join("*"))
            }
            Expr::Neg(x) => write!(f, "-{}", wrap(x, 4)),
            Expr::Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 3)),
            Expr::Pow(b, e) => write!(f, "{}^{}", wrap(b, 5), wrap(e, 5)),
            Expr::Poch { arg, base, len } => write!(f, "poch({arg}, {base}, {len})"),
            Expr::PochInf { arg, base } => write!(f, "pochinf({arg}, {base})"),
            Expr::Sum { var, lo, hi, body } => {
                write!(f, "sum({}, {lo}, {hi}, {body})", var.name())
            }
            Expr::Parity { of, even, odd } => write!(f, "parity({of}, {even}, {odd})"),
            Expr::IfZero { of, zero, other } => write!(f, "ifzero({of}, {zero}, {other})"),
            Expr::Floor(x) => write!(f, "floor({x})"),
            Expr::Series(s) => write!(f, "${}", s.label),
            Expr::Pair { seq, pair, index } => {
                let name = match seq {
                    Seq::Alpha => "alpha",
                    Seq::Beta => "beta",
                };
                write!(f, "{name}[{}]({index})", pair.id)
            }
        }
    }
}
