//! Monomials `c·∏ xᵢ^{eᵢ}` over root-level symbols.
//!
//! Used for chain parameters (ρ₁, ρ₂), for pair constraints written as
//! relations `m = 1`, and for the sampler bindings solved from them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::point::RootEnv;
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: BigRational,
    exps: BTreeMap<String, i32>,
}

impl Monomial {
    pub fn constant(c: BigRational) -> Self {
        assert!(!c.is_zero(), "monomial with zero coefficient");
        Monomial { coeff: c, exps: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn var(name: &str) -> Self {
        Self::one().times_var(name, 1)
    }

    /// Multiplies in `name^e`.
    pub fn times_var(mut self, name: &str, e: i32) -> Self {
        let slot = self.exps.entry(name.to_string()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(name);
        }
        self
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exps(&self) -> &BTreeMap<String, i32> {
        &self.exps
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.exps.get(name).copied().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.exps.keys().map(String::as_str)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial { coeff: &self.coeff * &other.coeff, exps: self.exps.clone() };
        for (k, e) in &other.exps {
            out = out.times_var(k, *e);
        }
        out
    }

    pub fn pow(&self, e: i32) -> Monomial {
        let coeff = if e >= 0 {
            num_traits::pow(self.coeff.clone(), e as usize)
        } else {
            num_traits::pow(self.coeff.recip(), e.unsigned_abs() as usize)
        };
        let exps = if e == 0 {
            BTreeMap::new()
        } else {
            self.exps.iter().map(|(k, x)| (k.clone(), x * e)).collect()
        };
        Monomial { coeff, exps }
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Evaluates at a point. A symbol whose root is unavailable may still be
    /// used with an even exponent through its square.
    pub fn eval(&self, env: &RootEnv) -> Result<ExactScalar> {
        let mut acc = ExactScalar::real(self.coeff.clone());
        for (name, &e) in &self.exps {
            let entry = env.get(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let f = match &entry.root {
                Some(r) => r.pow(e as i64)?,
                None if e % 2 == 0 => entry.square.pow((e / 2) as i64)?,
                None => return Err(Error::RootUnavailable(name.clone())),
            };
            acc *= &f;
        }
        Ok(acc)
    }

    /// Exact square root as a monomial, when the coefficient is a rational
    /// square and every exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.exps.values().any(|e| e % 2 != 0) {
            return None;
        }
        let c = ExactScalar::real(self.coeff.clone()).sqrt_exact()?;
        Some(Monomial {
            coeff: c.re().clone(),
            exps: self.exps.iter().map(|(k, e)| (k.clone(), e / 2)).collect(),
        })
    }

    /// Reads the relation `self = 1` as `var = …` when the exponent of
    /// `var` is ±1 or ±2 and the rest admits the matching exact root.
    pub fn solve_for(&self, var: &str) -> Option<Monomial> {
        let e = self.exponent(var);
        if e == 0 {
            return None;
        }
        let rest = self.clone().times_var(var, -e).inv();
        match e {
            1 => Some(rest),
            -1 => Some(rest.inv()),
            2 => rest.sqrt(),
            -2 => rest.inv().sqrt(),
            _ => None,
        }
    }

    /// Replaces `var^e` by `square^{e/2}`, where `square` is a monomial for
    /// `var²`. Fails on an odd exponent.
    pub fn substitute_square(&self, var: &str, square: &Monomial) -> Option<Monomial> {
        let e = self.exponent(var);
        if e == 0 {
            return Some(self.clone());
        }
        if e % 2 != 0 {
            return None;
        }
        Some(self.clone().times_var(var, -e).mul(&square.pow(e / 2)))
    }

    /// Renames symbols simultaneously.
    pub fn rename(&self, map: &[(&str, &str)]) -> Monomial {
        let mut out = Monomial::constant(self.coeff.clone());
        for (k, e) in &self.exps {
            let to = map.iter().find(|(from, _)| from == k).map_or(k.as_str(), |(_, to)| to);
            out = out.times_var(to, *e);
        }
        out
    }

    /// Parses a product/quotient of rationals and symbols with integer powers.
    pub fn parse(src: &str) -> Result<Monomial> {
        let expr = Expr::parse(src)?;
        Self::from_expr(&expr).ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("`{src}` is not a monomial in root symbols"),
        })
    }

    fn from_expr(e: &Expr) -> Option<Monomial> {
        match e {
            Expr::Num(c) => {
                let r = c.as_real()?;
                (!r.is_zero()).then(|| Monomial::constant(r.clone()))
            }
            Expr::Sym(s) => Some(Monomial::var(s)),
            Expr::Neg(x) => {
                let m = Self::from_expr(x)?;
                Some(m.mul(&Monomial::constant(-BigRational::one())))
            }
            Expr::Mul(xs) => xs
                .iter()
                .try_fold(Monomial::one(), |acc, x| Some(acc.mul(&Self::from_expr(x)?))),
            Expr::Div(a, b) => Some(Self::from_expr(a)?.mul(&Self::from_expr(b)?.inv())),
            Expr::Pow(b, e) => {
                let Expr::Num(n) = e.as_ref() else {
                    if let Expr::Neg(inner) = e.as_ref() {
                        if let Expr::Num(n) = inner.as_ref() {
                            let k = i32::try_from(n.to_i64()?).ok()?;
                            return Some(Self::from_expr(b)?.pow(-k));
                        }
                    }
                    return None;
                };
                let k = i32::try_from(n.to_i64()?).ok()?;
                Some(Self::from_expr(b)?.pow(k))
            }
            _ => None,
        }
    }

    pub fn to_expr(&self) -> Expr {
        let mut parts = vec![Expr::Num(ExactScalar::real(self.coeff.clone()))];
        for (k, &e) in &self.exps {
            let sym = Expr::sym(k);
            parts.push(if e == 1 { sym } else { Expr::pow(sym, Expr::int(e as i64)) });
        }
        Expr::Mul(parts)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let c = &self.coeff;
        if self.exps.is_empty() || !c.abs().is_one() {
            let abs = c.abs();
            if abs.is_integer() {
                parts.push(abs.numer().to_string());
            } else {
                parts.push(format!("{}/{}", abs.numer(), abs.denom()));
            }
        }
        for (k, e) in &self.exps {
            parts.push(match e {
                1 => k.clone(),
                e if *e < 0 => format!("{k}^({e})"),
                e => format!("{k}^{e}"),
            });
        }
        let sign = if c.is_negative() { "-" } else { "" };
        write!(f, "{sign}{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<BigInt> for Monomial {
    fn from(n: BigInt) -> Self {
        Monomial::constant(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let m = Monomial::parse("3/2*ry^2*rz^-1").unwrap();
        assert_eq!(m.exponent("ry"), 2);
        assert_eq!(m.exponent("rz"), -1);
        assert_eq!(Monomial::parse(&m.to_string()).unwrap(), m);
        assert!(Monomial::parse("ry + 1").is_err());
        assert!(Monomial::parse("ry^n").is_err());
    }

    #[test]
    fn solving_relations() {
        // a = k/q at root level: ra^2 s^2 rk^-2 = 1  ⇒  rk = ra·s
        let rel = Monomial::var("ra").pow(2).mul(&Monomial::var("s").pow(2)).times_var("rk", -2);
        let rk = rel.solve_for("rk").unwrap();
        assert_eq!(rk, Monomial::var("ra").times_var("s", 1));
        // 2·ra^2 = 1 has no rational root
        let bad = Monomial::constant(BigRational::from_integer(2.into())).times_var("ra", 2);
        assert!(bad.solve_for("ra").is_none());
    }

    #[test]
    fn square_substitution() {
        let rel = Monomial::var("rk").pow(2).times_var("s", -2);
        let k_new = Monomial::var("s").pow(2).times_var("ra", 4).times_var("rk", -2);
        let out = rel.substitute_square("rk", &k_new).unwrap();
        assert_eq!(out, Monomial::var("ra").pow(4).times_var("rk", -2));
        assert!(Monomial::var("rk").substitute_square("rk", &k_new).is_none());
    }
}
