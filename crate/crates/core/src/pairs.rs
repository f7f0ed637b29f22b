//! WP-Bailey pairs: closed-form catalog entries, derived pairs, and the
//! defining-relation checks.
//!
//! A pair is evaluated at a [`RootEnv`] whose slots are `ra` (a), `rk` (k),
//! `s` (q) plus any extra symbols. Derived pairs evaluate their inner pair
//! at a transformed environment (for instance `k ↦ kρ₁ρ₂/(aq)`), and a
//! [`BoundPair`] memoizes every value it produces, so the `j`-sums in the
//! chain formulas cost one inner evaluation per index.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::expr::{Env, Expr, Index, ParseCtx, Seq, SeriesCtx};
use crate::monomial::Monomial;
use crate::point::{root_name, value_name, Binding, RootEnv, SymbolDecl, Values};
use crate::poch::poch;
use crate::scalar::ExactScalar;
use crate::series::TruncatedSeries;

/// A relation `relation = 1` between root symbols (`ra² = 1` for `a = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub text: String,
    pub relation: Monomial,
}

impl Constraint {
    pub fn new(text: &str, relation: &str) -> Self {
        Constraint {
            text: text.to_string(),
            relation: Monomial::parse(relation).expect("constraint relation is a monomial"),
        }
    }

    pub fn holds(&self, env: &RootEnv) -> Result<bool> {
        Ok(self.relation.eval(env)?.is_one())
    }
}

#[derive(Clone, Debug)]
pub enum PairDef {
    /// Closed forms in the index `n`.
    Closed { alpha: Expr, beta: Expr },
    /// `β_n = Σ_{j≤n} α_j` (the pairs with `a = k/q`).
    Simple { alpha: Expr },
    /// Andrews' first construction with parameters `ρ₁, ρ₂`.
    First { inner: Arc<WPBaileyPair>, rho1: Monomial, rho2: Monomial },
    /// Andrews' second construction.
    Second { inner: Arc<WPBaileyPair> },
    /// `a` and `k` interchanged.
    Dual { inner: Arc<WPBaileyPair> },
    /// `α` recomputed from `β` by the inversion lemma.
    Inverted { inner: Arc<WPBaileyPair> },
    /// One value shifted by `delta` (used to test the checkers).
    Perturbed { inner: Arc<WPBaileyPair>, seq: Seq, n: i64, delta: ExactScalar },
}

#[derive(Clone)]
pub struct WPBaileyPair {
    pub id: String,
    pub anchor: String,
    pub def: PairDef,
    pub constraints: Vec<Constraint>,
    /// Free symbols besides `a`, `k`, `q`.
    pub extras: Vec<SymbolDecl>,
    /// Construction path from the seed pair (empty for catalog pairs).
    pub path: Vec<String>,
}

impl fmt::Debug for WPBaileyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WPBaileyPair")
            .field("id", &self.id)
            .field("constraints", &self.constraints.iter().map(|c| &c.text).collect::<Vec<_>>())
            .field("path", &self.path)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationForm {
    /// `β_n = Σ (k/a)_{n−j}(k)_{n+j}/((q)_{n−j}(aq)_{n+j}) α_j`
    Direct,
    /// The same sum rewritten with `(q^{−n}, kq^n)_j` and `(qa/k)^j`.
    Rewritten,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail { n: i64, expected: ExactScalar, got: ExactScalar },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// Builds the slot environment behind an expression symbol table.
pub fn root_env_from_values(values: &Values) -> RootEnv {
    let mut env = RootEnv::new();
    for (key, v) in values {
        if let Some(name) = value_name(key) {
            if let Some(sq) = values.get(&name) {
                env.set(key, sq.clone(), Some(v.clone()));
                continue;
            }
        }
        let root = root_name(key);
        if !values.contains_key(&root) {
            env.set(&root, v.clone(), None);
        }
        // plain use of the symbol in monomials
        if env.get(key).is_none() {
            env.set(key, v * v, Some(v.clone()));
        }
    }
    env
}

impl WPBaileyPair {
    pub fn closed(id: &str, anchor: &str, alpha: &str, beta: &str) -> Self {
        let ctx = ParseCtx::new();
        WPBaileyPair {
            id: id.to_string(),
            anchor: anchor.to_string(),
            def: PairDef::Closed {
                alpha: ctx.parse(alpha).expect("alpha parses"),
                beta: ctx.parse(beta).expect("beta parses"),
            },
            constraints: Vec::new(),
            extras: Vec::new(),
            path: Vec::new(),
        }
    }

    /// A pair with `a = k/q` and the given `α_n`; `β_n = Σ_{j≤n} α_j`.
    pub fn simple(id: &str, alpha: &str, extras: &[SymbolDecl]) -> Result<Self> {
        Ok(WPBaileyPair {
            id: id.to_string(),
            anchor: "we might call such pairs".to_string(),
            def: PairDef::Simple { alpha: ParseCtx::new().parse(alpha)? },
            constraints: vec![Constraint::new("a = k/q", "ra^2*s^2*rk^-2")],
            extras: extras.to_vec(),
            path: Vec::new(),
        })
    }

    pub fn with_constraint(mut self, text: &str, relation: &str) -> Self {
        self.constraints.push(Constraint::new(text, relation));
        self
    }

    pub fn with_extra(mut self, d: SymbolDecl) -> Self {
        self.extras.push(d);
        self
    }

    pub fn inner(&self) -> Option<&Arc<WPBaileyPair>> {
        match &self.def {
            PairDef::Closed { .. } | PairDef::Simple { .. } => None,
            PairDef::First { inner, .. }
            | PairDef::Second { inner }
            | PairDef::Dual { inner }
            | PairDef::Inverted { inner }
            | PairDef::Perturbed { inner, .. } => Some(inner),
        }
    }

    /// Sampling declarations: `q`, `a`, `k` at root level, then extras.
    pub fn decls(&self) -> Vec<SymbolDecl> {
        let mut out = vec![SymbolDecl::rooted("q"), SymbolDecl::rooted("a"), SymbolDecl::rooted("k")];
        for e in &self.extras {
            if !out.iter().any(|d| d.name == e.name) {
                out.push(e.clone());
            }
        }
        out
    }

    /// Turns the constraints into sampler bindings, solving each relation
    /// for `rk`, then `ra`, then extras, then `s`.
    pub fn bindings(&self) -> Result<Vec<Binding>> {
        let mut order: Vec<String> = vec!["rk".into(), "ra".into()];
        order.extend(self.extras.iter().map(SymbolDecl::coord));
        order.push("s".into());
        let mut out: Vec<Binding> = Vec::new();
        for c in &self.constraints {
            let mut rel = c.relation.clone();
            for b in &out {
                let e = rel.exponent(&b.coord);
                if e != 0 {
                    rel = rel.clone().times_var(&b.coord, -e).mul(&b.value.pow(e));
                }
            }
            if rel.exps().is_empty() {
                if rel.coeff() == Monomial::one().coeff() {
                    continue;
                }
                return Err(Error::Constraint { pair: self.id.clone(), constraint: c.text.clone() });
            }
            let solved = order
                .iter()
                .filter(|v| !out.iter().any(|b| &b.coord == *v))
                .find_map(|v| rel.solve_for(v).map(|m| Binding { coord: v.clone(), value: m }));
            match solved {
                Some(b) => out.push(b),
                None => {
                    return Err(Error::Step(format!(
                        "constraint `{}` of `{}` cannot be solved for a root symbol",
                        c.text, self.id
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Value of `α_n` or `β_n` at an expression symbol table.
    pub fn eval_in(&self, values: &Values, seq: Seq, n: i64) -> Result<ExactScalar> {
        BoundPair::new(self, root_env_from_values(values))?.get(seq, n)
    }

    /// Series value of a closed or simple pair (series backend).
    pub fn eval_series_in(&self, values: &Values, seq: Seq, n: i64, ctx: &SeriesCtx) -> Result<TruncatedSeries> {
        let env = Env::new(values);
        match (&self.def, seq) {
            (PairDef::Closed { alpha, .. }, Seq::Alpha) | (PairDef::Simple { alpha }, Seq::Alpha) => {
                alpha.eval_series(&env.with(Index::N, n), ctx)
            }
            (PairDef::Closed { beta, .. }, Seq::Beta) => beta.eval_series(&env.with(Index::N, n), ctx),
            (PairDef::Simple { alpha }, Seq::Beta) => {
                let mut acc = TruncatedSeries::zero(ctx.order, ctx.var);
                for j in 0..=n {
                    acc = acc.add(&alpha.eval_series(&env.with(Index::N, j), ctx)?)?;
                }
                Ok(acc)
            }
            _ => Err(Error::Series(format!("derived pair `{}` has no series evaluation", self.id))),
        }
    }

    pub fn bind(&self, env: RootEnv) -> Result<BoundPair<'_>> {
        BoundPair::new(self, env)
    }
}

/// A pair fixed at one point, with memoized values.
pub struct BoundPair<'p> {
    pair: &'p WPBaileyPair,
    values: Values,
    a: ExactScalar,
    k: ExactScalar,
    q: ExactScalar,
    inner: Option<Box<BoundPair<'p>>>,
    /// `ρ₁, ρ₂, c` for the first construction.
    params: Vec<ExactScalar>,
    memo: Mutex<HashMap<(bool, i64), Result<ExactScalar>>>,
}

fn slot(env: &RootEnv, root: &str) -> Result<ExactScalar> {
    env.square(root).cloned()
}

fn root_of(env: &RootEnv, root: &str) -> Option<ExactScalar> {
    env.get(root).and_then(|e| e.root.clone())
}

impl<'p> BoundPair<'p> {
    pub fn new(pair: &'p WPBaileyPair, env: RootEnv) -> Result<Self> {
        for c in &pair.constraints {
            if !c.holds(&env)? {
                return Err(Error::Constraint { pair: pair.id.clone(), constraint: c.text.clone() });
            }
        }
        let (a, k, q) = (slot(&env, "ra")?, slot(&env, "rk")?, slot(&env, "s")?);
        if q.is_zero() {
            return Err(Error::pole("q", None));
        }
        let mut params = Vec::new();
        let inner_env = match &pair.def {
            PairDef::Closed { .. } | PairDef::Simple { .. } => None,
            PairDef::First { rho1, rho2, .. } => {
                let r1 = rho1.eval(&env)?;
                let r2 = rho2.eval(&env)?;
                let c = (&(&k * &r1) * &r2).checked_div(&(&a * &q))?;
                let root = rho1
                    .mul(rho2)
                    .sqrt()
                    .map(|m| m.times_var("rk", 1).times_var("ra", -1).times_var("s", -1))
                    .and_then(|m| m.eval(&env).ok());
                let mut e = env.clone();
                e.set("rk", c.clone(), root);
                params = vec![r1, r2, c];
                Some(e)
            }
            PairDef::Second { .. } => {
                let kk = (&q * &(&a * &a)).checked_div(&k)?;
                let root = match (root_of(&env, "s"), root_of(&env, "rk")) {
                    (Some(s), Some(rk)) => (&s * &a).checked_div(&rk).ok(),
                    _ => None,
                };
                let mut e = env.clone();
                e.set("rk", kk, root);
                Some(e)
            }
            PairDef::Dual { .. } => {
                let mut e = env.clone();
                let (ea, ek) = (env.get("ra").cloned(), env.get("rk").cloned());
                if let (Some(ea), Some(ek)) = (ea, ek) {
                    e.set("ra", ek.square, ek.root);
                    e.set("rk", ea.square, ea.root);
                }
                Some(e)
            }
            PairDef::Inverted { .. } | PairDef::Perturbed { .. } => Some(env.clone()),
        };
        let inner = match (inner_env, pair.inner()) {
            (Some(e), Some(p)) => Some(Box::new(BoundPair::new(p, e)?)),
            _ => None,
        };
        Ok(BoundPair {
            pair,
            values: env.values(),
            a,
            k,
            q,
            inner,
            params,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn pair(&self) -> &WPBaileyPair {
        self.pair
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn a(&self) -> &ExactScalar {
        &self.a
    }

    pub fn k(&self) -> &ExactScalar {
        &self.k
    }

    pub fn q(&self) -> &ExactScalar {
        &self.q
    }

    pub fn alpha(&self, n: i64) -> Result<ExactScalar> {
        self.get(Seq::Alpha, n)
    }

    pub fn beta(&self, n: i64) -> Result<ExactScalar> {
        self.get(Seq::Beta, n)
    }

    pub fn get(&self, seq: Seq, n: i64) -> Result<ExactScalar> {
        if n < 0 {
            return Ok(ExactScalar::zero());
        }
        let key = (seq == Seq::Alpha, n);
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return v.clone();
        }
        let v = self.compute(seq, n);
        self.memo.lock().expect("memo lock").insert(key, v.clone());
        v
    }

    fn p(&self, x: &ExactScalar, n: i64) -> Result<ExactScalar> {
        poch(x, &self.q, n)
    }

    fn inner(&self) -> &BoundPair<'p> {
        self.inner.as_deref().expect("derived pair has an inner binding")
    }

    fn compute(&self, seq: Seq, n: i64) -> Result<ExactScalar> {
        let one = ExactScalar::one();
        let (a, k, q) = (&self.a, &self.k, &self.q);
        match (&self.pair.def, seq) {
            (PairDef::Closed { alpha, .. }, Seq::Alpha) | (PairDef::Simple { alpha }, Seq::Alpha) => {
                alpha.eval(&Env::new(&self.values).with(Index::N, n))
            }
            (PairDef::Closed { beta, .. }, Seq::Beta) => beta.eval(&Env::new(&self.values).with(Index::N, n)),
            (PairDef::Simple { .. }, Seq::Beta) => {
                let prev = if n == 0 { ExactScalar::zero() } else { self.beta(n - 1)? };
                Ok(&prev + &self.alpha(n)?)
            }
            (PairDef::First { .. }, Seq::Alpha) => {
                let (r1, r2, c) = (&self.params[0], &self.params[1], &self.params[2]);
                let aq = a * q;
                let num = &self.p(r1, n)? * &self.p(r2, n)?;
                let den = &self.p(&aq.checked_div(r1)?, n)? * &self.p(&aq.checked_div(r2)?, n)?;
                let kc = k.checked_div(c)?.pow(n)?;
                Ok(&(&num.checked_div(&den)? * &kc) * &self.inner().alpha(n)?)
            }
            (PairDef::First { .. }, Seq::Beta) => {
                let (r1, r2, c) = (&self.params[0], &self.params[1], &self.params[2]);
                let aq = a * q;
                let kr1 = (k * r1).checked_div(a)?;
                let kr2 = (k * r2).checked_div(a)?;
                let kc = k.checked_div(c)?;
                let one_c = &one - c;
                let mut sum = ExactScalar::zero();
                for j in 0..=n {
                    let wp = &one - &(c * &q.pow(2 * j)?);
                    let num = &(&(&wp * &self.p(r1, j)?) * &self.p(r2, j)?)
                        * &(&self.p(&kc, n - j)? * &self.p(k, n + j)?);
                    let den = &(&(&one_c * &self.p(&kr1, j)?) * &self.p(&kr2, j)?)
                        * &(&self.p(q, n - j)? * &self.p(&(q * c), n + j)?);
                    let t = &(&num.checked_div(&den)? * &kc.pow(j)?) * &self.inner().beta(j)?;
                    sum += &t;
                }
                let pre = (&self.p(&kr1, n)? * &self.p(&kr2, n)?)
                    .checked_div(&(&self.p(&aq.checked_div(r1)?, n)? * &self.p(&aq.checked_div(r2)?, n)?))?;
                Ok(&pre * &sum)
            }
            (PairDef::Second { .. }, Seq::Alpha) => {
                let kk = (q * &(a * a)).checked_div(k)?;
                let ratio = (k * k).checked_div(&(q * &(a * a)))?;
                let pre = poch(&kk, q, 2 * n)?.checked_div(&poch(k, q, 2 * n)?)?;
                Ok(&(&pre * &ratio.pow(n)?) * &self.inner().alpha(n)?)
            }
            (PairDef::Second { .. }, Seq::Beta) => {
                let ratio = (k * k).checked_div(&(q * &(a * a)))?;
                let mut sum = ExactScalar::zero();
                for j in 0..=n {
                    let f = self.p(&ratio, n - j)?.checked_div(&self.p(q, n - j)?)?;
                    sum += &(&(&f * &ratio.pow(j)?) * &self.inner().beta(j)?);
                }
                Ok(sum)
            }
            (PairDef::Dual { .. }, Seq::Alpha) => {
                let wp = if n == 0 {
                    one.clone()
                } else {
                    (&one - &(a * &q.pow(2 * n)?)).checked_div(&(&one - a))?
                };
                Ok(&(&wp * &k.checked_div(a)?.pow(n)?) * &self.inner().beta(n)?)
            }
            (PairDef::Dual { .. }, Seq::Beta) => {
                let wp = if n == 0 {
                    one.clone()
                } else {
                    (&one - k).checked_div(&(&one - &(k * &q.pow(2 * n)?)))?
                };
                Ok(&(&wp * &k.checked_div(a)?.pow(n)?) * &self.inner().alpha(n)?)
            }
            (PairDef::Inverted { .. }, Seq::Alpha) => {
                crate::chains::warnaar_invert_at(a, k, q, n, |j| self.inner().beta(j))
            }
            (PairDef::Inverted { .. }, Seq::Beta) => self.inner().beta(n),
            (PairDef::Perturbed { seq: s, n: m, delta, .. }, _) => {
                let v = self.inner().get(seq, n)?;
                Ok(if *s == seq && *m == n { &v + delta } else { v })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Defining relation
// ---------------------------------------------------------------------------

/// Right-hand side of the defining relation at index `n` for an arbitrary
/// `α` sequence at `(a, k, q)`.
pub fn wp_relation_rhs(
    a: &ExactScalar,
    k: &ExactScalar,
    q: &ExactScalar,
    n: i64,
    form: RelationForm,
    mut alpha: impl FnMut(i64) -> Result<ExactScalar>,
) -> Result<ExactScalar> {
    let ka = k.checked_div(a)?;
    let aq = a * q;
    let mut sum = ExactScalar::zero();
    match form {
        RelationForm::Direct => {
            for j in 0..=n {
                let num = &poch(&ka, q, n - j)? * &poch(k, q, n + j)?;
                let den = &poch(q, q, n - j)? * &poch(&aq, q, n + j)?;
                sum += &(&num.checked_div(&den)? * &alpha(j)?);
            }
            Ok(sum)
        }
        RelationForm::Rewritten => {
            let qn = q.pow(n)?;
            let qmn = q.pow(-n)?;
            let x1 = &aq.checked_div(k)? * &qmn;
            let x2 = &aq * &qn;
            let kqn = k * &qn;
            let qak = aq.checked_div(k)?;
            for j in 0..=n {
                let num = &poch(&qmn, q, j)? * &poch(&kqn, q, j)?;
                let den = &poch(&x1, q, j)? * &poch(&x2, q, j)?;
                sum += &(&(&num.checked_div(&den)? * &qak.pow(j)?) * &alpha(j)?);
            }
            let pre = (&poch(&ka, q, n)? * &poch(k, q, n)?).checked_div(&(&poch(&aq, q, n)? * &poch(q, q, n)?))?;
            Ok(&pre * &sum)
        }
    }
}

/// Checks `β_n` against the defining relation for `n ≤ n_max`.
pub fn wp_defining_check(pair: &BoundPair<'_>, n_max: i64, form: RelationForm) -> Result<CheckOutcome> {
    for n in 0..=n_max {
        let got = pair.beta(n)?;
        let expected = wp_relation_rhs(pair.a(), pair.k(), pair.q(), n, form, |j| pair.alpha(j))?;
        if got != expected {
            return Ok(CheckOutcome::Fail { n, expected, got });
        }
    }
    Ok(CheckOutcome::Pass)
}

// ---------------------------------------------------------------------------
// Classical Bailey pairs
// ---------------------------------------------------------------------------

/// `β_n = Σ_r α_r / ((q;q)_{n−r} (x;q)_{n+r})`.
#[derive(Clone, Debug)]
pub struct BaileyPairClassical {
    pub id: String,
    pub alpha: Expr,
    pub beta: Expr,
    pub x: Expr,
}

impl BaileyPairClassical {
    /// The `k = 0` reduction of a WP-Bailey pair, relative to `x = aq`.
    pub fn from_wp(pair: &Arc<WPBaileyPair>) -> Self {
        let node = |seq| Expr::Pair { seq, pair: pair.clone(), index: Box::new(Expr::Idx(Index::N)) };
        BaileyPairClassical {
            id: format!("{}@k=0", pair.id),
            alpha: node(Seq::Alpha),
            beta: node(Seq::Beta),
            x: Expr::mul(Expr::sym("a"), Expr::sym("q")),
        }
    }

    pub fn check(&self, values: &Values, n_max: i64) -> Result<CheckOutcome> {
        let env = Env::new(values);
        let q = env.lookup("q")?.clone();
        let x = self.x.eval(&env)?;
        for n in 0..=n_max {
            let got = self.beta.eval(&env.with(Index::N, n))?;
            let mut expected = ExactScalar::zero();
            for r in 0..=n {
                let den = &poch(&q, &q, n - r)? * &poch(&x, &q, n + r)?;
                expected += &self.alpha.eval(&env.with(Index::N, r))?.checked_div(&den)?;
            }
            if got != expected {
                return Ok(CheckOutcome::Fail { n, expected, got });
            }
        }
        Ok(CheckOutcome::Pass)
    }
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// The second product form of `β` for `mz01`.
pub const MZ01_BETA_ALT: &str =
    "[k/a, k; q]_n/[a*q, q; q]_n*[a*q/k, k^2*q^n/a; q]_n/[a*q^(n+1), k/a; q]_n";

pub fn catalog() -> Vec<Arc<WPBaileyPair>> {
    let simple = WPBaileyPair::simple("simple", "(-1)^n", &[]).expect("simple pair");
    let pairs = vec![
        simple,
        WPBaileyPair::closed(
            "mz01",
            "The pair (α_n^{(1)}",
            "[q*a^2/k^2; q]_n/[q; q]_n*(k/a)^n",
            "[q*a/k, k; q]_n/[k^2/a, q; q]_n*[k^2/a; q]_(2*n)/[a*q; q]_(2*n)",
        ),
        WPBaileyPair::closed(
            "mz03",
            "necessary to set k=q",
            "[a, q*ra, -q*ra, d, q/d, -a; q]_n/[ra, -ra, a*q/d, a*d, -q, q; q]_n*(-1)^n",
            "parity(n, [q^2/(a*d), d*q/a; q^2]_(n/2)/[a*d*q, a*q^2/d; q^2]_(n/2), \
             -a*[q/(a*d), d/a; q^2]_((n+1)/2)/[a*d, a*q/d; q^2]_((n+1)/2))",
        )
        .with_constraint("k = q", "rk^2*s^-2")
        .with_extra(SymbolDecl::plain("d")),
        WPBaileyPair::closed(
            "mz02",
            "initially thought that the following",
            "[a, q*ra, -q*ra, k/a, a*s/rk, -a*s/rk; q]_n/[ra, -ra, q*a^2/k, s*rk, -s*rk, q; q]_n*(-1)^n",
            "parity(n, [k, k^2/a^2; q^2]_(n/2)/[q^2, q^2*a^2/k; q^2]_(n/2), 0)",
        ),
        WPBaileyPair::closed(
            "ab_even",
            "the WP-Bailey pair of Andrews and Berkovich",
            "parity(n, [a, q^2*ra, -q^2*ra, a^2/k^2; q^2]_(n/2)/[q^2, ra, -ra, q^2*k^2/a; q^2]_(n/2)*(k/a)^n, 0)",
            "[k, k*s/ra, -k*s/ra, a/k; q]_n/[ra*s, -ra*s, q*k^2/a, q; q]_n*(-k/a)^n",
        ),
        WPBaileyPair::closed(
            "ab2",
            "the following pair of Andrews and Berkovich",
            "(1 - a*q^(2*n))/(1 - a)*[a, k/(a*q); q]_n/[q, q^2*a^2/k; q]_n*[q*a^2/k; q]_(2*n)/[k; q]_(2*n)*(k/a)^n",
            "[k^2/(q*a^2); q]_n/[q; q]_n",
        ),
        WPBaileyPair::closed(
            "l1_dual",
            "the dual of the pair in Lemma",
            "(1 - a*q^(2*n))/(1 - a)*[a, k*q/a; q]_n/[q, a^2/k; q]_n*[a^2/k; q]_(2*n)/[k*q; q]_(2*n)*(k/a)^n",
            "(1 - k)/(1 - k*q^(2*n))*[q*k^2/a^2; q]_n/[q; q]_n",
        ),
        WPBaileyPair::closed(
            "ab2_dual",
            "the dual of  the pair at",
            "(1 - a*q^(2*n))/(1 - a)*[a^2/(q*k^2); q]_n/[q; q]_n*(k/a)^n",
            "[a/(k*q), k; q]_n/[k^2*q^2/a, q; q]_n*[q*k^2/a; q]_(2*n)/[a; q]_(2*n)",
        ),
        WPBaileyPair::closed(
            "burge",
            "a WP-Burge pair",
            "ifzero(n, 1, s^(-n) + s^n)",
            "[k*s, k; q]_n/[s, q; q]_n*s^(-n)",
        )
        .with_constraint("a = 1", "ra^2"),
    ];
    pairs.into_iter().map(Arc::new).collect()
}

pub fn pair_by_id(id: &str) -> Option<Arc<WPBaileyPair>> {
    catalog().into_iter().find(|p| p.id == id)
}
