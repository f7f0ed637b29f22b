//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | ident '(' args ')' | '(' expr ')' | '$' name
//!          | '[' expr (',' expr)* ';' expr ']' '_' (primary | 'inf')
//! ```
//!
//! `i` is the imaginary unit; `N`, `n`, `j` are index variables.
//! `[x, y; b]_m` is the product `(x; b)_m (y; b)_m`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Expr, Index, Seq};
use crate::error::{Error, Result};
use crate::pairs::WPBaileyPair;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Hole(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if c == '$' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i == start + 1 {
                return Err(Error::Parse { pos: start, msg: "empty placeholder".into() });
            }
            out.push((start, Tok::Hole(chars[start + 1..i].iter().collect())));
        } else if "+-*/^(),[];_".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Parsing context: named placeholders (`$name`) and the pair that
/// `alpha(·)` / `beta(·)` refer to.
#[derive(Clone, Default)]
pub struct ParseCtx {
    holes: HashMap<String, Expr>,
    pair: Option<Arc<WPBaileyPair>>,
}

impl ParseCtx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hole(mut self, name: &str, e: Expr) -> Self {
        self.holes.insert(name.to_string(), e);
        self
    }

    pub fn with_pair(mut self, pair: Arc<WPBaileyPair>) -> Self {
        self.pair = Some(pair);
        self
    }

    pub fn parse(&self, src: &str) -> Result<Expr> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0, ctx: self, len: src.len() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a ParseCtx,
    len: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let pos = self.toks.get(self.pos).map_or(self.len, |t| t.0);
        Error::Parse { pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match acc {
                    Expr::Mul(mut xs) => {
                        xs.push(rhs);
                        Expr::Mul(xs)
                    }
                    other => Expr::Mul(vec![other, rhs]),
                };
            } else if self.eat('/') {
                acc = Expr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.unary()?;
            return Ok(Expr::pow(base, e));
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn index_var(&self, e: &Expr) -> Result<Index> {
        match e {
            Expr::Idx(i) => Ok(*i),
            _ => Err(self.err("summation variable must be N, n or j")),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expr::Num(ExactScalar::real(BigRational::from_integer(n)))),
            Tok::Hole(name) => self
                .ctx
                .holes
                .get(&name)
                .cloned()
                .ok_or_else(|| self.err(&format!("unknown placeholder `${name}`"))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op('[') => self.poch_list(),
            Tok::Ident(id) => self.ident(id),
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected `{c}`")))
            }
        }
    }

    fn ident(&mut self, id: String) -> Result<Expr> {
        let is_call = self.peek() == Some(&Tok::Op('('));
        let arity = |p: &Self, args: &Vec<Expr>, n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(p.err(&format!("`{id}` takes {n} arguments")))
            }
        };
        if !is_call {
            return Ok(match id.as_str() {
                "i" => Expr::Num(ExactScalar::i()),
                "N" => Expr::Idx(Index::BigN),
                "n" => Expr::Idx(Index::N),
                "j" => Expr::Idx(Index::J),
                _ => Expr::sym(&id),
            });
        }
        let mut a = self.args()?;
        let b = |e: Expr| Box::new(e);
        match id.as_str() {
            "poch" => {
                arity(self, &a, 3)?;
                let (len, base, arg) = (a.pop().unwrap(), a.pop().unwrap(), a.pop().unwrap());
                Ok(Expr::Poch { arg: b(arg), base: b(base), len: b(len) })
            }
            "pochinf" => {
                arity(self, &a, 2)?;
                let (base, arg) = (a.pop().unwrap(), a.pop().unwrap());
                Ok(Expr::PochInf { arg: b(arg), base: b(base) })
            }
            "sum" => {
                arity(self, &a, 4)?;
                let (body, hi, lo, var) =
                    (a.pop().unwrap(), a.pop().unwrap(), a.pop().unwrap(), a.pop().unwrap());
                let var = self.index_var(&var)?;
                Ok(Expr::Sum { var, lo: b(lo), hi: b(hi), body: b(body) })
            }
            "parity" => {
                arity(self, &a, 3)?;
                let (odd, even, of) = (a.pop().unwrap(), a.pop().unwrap(), a.pop().unwrap());
                Ok(Expr::Parity { of: b(of), even: b(even), odd: b(odd) })
            }
            "ifzero" => {
                arity(self, &a, 3)?;
                let (other, zero, of) = (a.pop().unwrap(), a.pop().unwrap(), a.pop().unwrap());
                Ok(Expr::IfZero { of: b(of), zero: b(zero), other: b(other) })
            }
            "floor" => {
                arity(self, &a, 1)?;
                Ok(Expr::Floor(b(a.pop().unwrap())))
            }
            "alpha" | "beta" => {
                arity(self, &a, 1)?;
                let pair = self.ctx.pair.clone().ok_or_else(|| self.err("no pair in scope"))?;
                let seq = if id == "alpha" { Seq::Alpha } else { Seq::Beta };
                Ok(Expr::Pair { seq, pair, index: b(a.pop().unwrap()) })
            }
            _ => Err(self.err(&format!("unknown function `{id}`"))),
        }
    }

    fn poch_list(&mut self) -> Result<Expr> {
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        self.expect(';')?;
        let base = self.expr()?;
        self.expect(']')?;
        self.expect('_')?;
        let infinite = matches!(self.peek(), Some(Tok::Ident(s)) if s == "inf");
        let len = if infinite {
            self.pos += 1;
            None
        } else {
            Some(self.primary()?)
        };
        let mut factors: Vec<Expr> = args
            .into_iter()
            .map(|arg| match &len {
                Some(l) => Expr::Poch {
                    arg: Box::new(arg),
                    base: Box::new(base.clone()),
                    len: Box::new(l.clone()),
                },
                None => Expr::PochInf { arg: Box::new(arg), base: Box::new(base.clone()) },
            })
            .collect();
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }
}
