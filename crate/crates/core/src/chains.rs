//! Chain constructions on WP-Bailey pairs and the relations they satisfy.
//!
//! Derived pairs are lazy: a step returns a new [`WPBaileyPair`] whose
//! evaluator calls the inner pair at transformed `(a, k)`. Constraints are
//! carried over by rewriting the inner relations in the outer root symbols,
//! so the sampler can solve them the same way as for catalog pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::pairs::{BoundPair, CheckOutcome, Constraint, PairDef, WPBaileyPair};
use crate::point::{value_name, SymbolDecl};
use crate::poch::poch;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    First { rho1: Monomial, rho2: Monomial },
    Second,
    Dual,
    Invert,
}

impl fmt::Display for ChainStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainStep::First { rho1, rho2 } => write!(f, "first:rho1={rho1},rho2={rho2}"),
            ChainStep::Second => f.write_str("second"),
            ChainStep::Dual => f.write_str("dual"),
            ChainStep::Invert => f.write_str("invert"),
        }
    }
}

impl ChainStep {
    /// Parses `first:rho1=ry^2,rho2=rz^2;second;dual`. Empty input gives
    /// no steps.
    pub fn parse_list(src: &str) -> Result<Vec<ChainStep>> {
        src.split(';').map(str::trim).filter(|s| !s.is_empty()).map(Self::parse).collect()
    }

    pub fn parse(src: &str) -> Result<ChainStep> {
        let (name, args) = match src.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (src.trim(), None),
        };
        let no_args = |step: ChainStep| match args {
            Some(a) if !a.trim().is_empty() => Err(Error::Step(format!("`{name}` takes no parameters"))),
            _ => Ok(step),
        };
        match name {
            "first" | "andrews_first" => {
                let args = args.ok_or_else(|| Error::Step("`first` needs rho1=…,rho2=…".into()))?;
                let (mut rho1, mut rho2) = (None, None);
                for kv in args.split(',') {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Step(format!("expected key=value, got `{}`", kv.trim())))?;
                    let m = Monomial::parse(v.trim()).map_err(|e| Error::Step(format!("{}: {e}", v.trim())))?;
                    match k.trim() {
                        "rho1" => rho1 = Some(m),
                        "rho2" => rho2 = Some(m),
                        other => return Err(Error::Step(format!("unknown parameter `{other}`"))),
                    }
                }
                match (rho1, rho2) {
                    (Some(rho1), Some(rho2)) => Ok(ChainStep::First { rho1, rho2 }),
                    _ => Err(Error::Step("`first` needs both rho1 and rho2".into())),
                }
            }
            "second" | "andrews_second" => no_args(ChainStep::Second),
            "dual" => no_args(ChainStep::Dual),
            "invert" | "warnaar_invert" => no_args(ChainStep::Invert),
            other => Err(Error::Step(format!("unknown step `{other}`"))),
        }
    }

    pub fn apply(&self, pair: &Arc<WPBaileyPair>) -> Result<Arc<WPBaileyPair>> {
        match self {
            ChainStep::First { rho1, rho2 } => chain_andrews_first(pair, rho1, rho2),
            ChainStep::Second => chain_andrews_second(pair),
            ChainStep::Dual => dual(pair),
            ChainStep::Invert => inverted(pair),
        }
    }
}

/// Rewrites inner constraints through `rk² ↦ k_inner` (a monomial in the
/// outer roots).
fn substitute_k(pair: &WPBaileyPair, k_inner: &Monomial, step: &str) -> Result<Vec<Constraint>> {
    pair.constraints
        .iter()
        .map(|c| {
            let relation = c.relation.substitute_square("rk", k_inner).ok_or_else(|| {
                Error::Step(format!("{step}: constraint `{}` of `{}` has an odd power of rk", c.text, pair.id))
            })?;
            Ok(Constraint { text: format!("{} [{step}]", c.text), relation })
        })
        .collect()
}

fn derived(
    inner: &Arc<WPBaileyPair>,
    step: String,
    def: PairDef,
    constraints: Vec<Constraint>,
    extra_syms: &[&Monomial],
) -> Arc<WPBaileyPair> {
    let mut extras = inner.extras.clone();
    let known: BTreeSet<String> = ["ra", "rk", "s"].iter().map(|s| s.to_string()).collect();
    for m in extra_syms {
        for sym in m.symbols() {
            if known.contains(sym) || extras.iter().any(|d| d.coord() == sym) {
                continue;
            }
            extras.push(match value_name(sym) {
                Some(v) if sym.starts_with('r') => SymbolDecl::rooted(&v),
                _ => SymbolDecl::plain(sym),
            });
        }
    }
    let mut path = inner.path.clone();
    path.push(step.clone());
    Arc::new(WPBaileyPair {
        id: format!("{}({})", step, inner.id),
        anchor: inner.anchor.clone(),
        def,
        constraints,
        extras,
        path,
    })
}

/// Andrews' first construction: the inner pair is taken at
/// `(a, c)` with `c = kρ₁ρ₂/(aq)`.
pub fn chain_andrews_first(pair: &Arc<WPBaileyPair>, rho1: &Monomial, rho2: &Monomial) -> Result<Arc<WPBaileyPair>> {
    let c = Monomial::var("rk").pow(2).mul(rho1).mul(rho2).times_var("ra", -2).times_var("s", -2);
    let step = format!("first[rho1={rho1},rho2={rho2}]");
    let constraints = substitute_k(pair, &c, "first")?;
    let def = PairDef::First { inner: pair.clone(), rho1: rho1.clone(), rho2: rho2.clone() };
    Ok(derived(pair, step, def, constraints, &[rho1, rho2]))
}

/// Andrews' second construction: the inner pair is taken at `(a, qa²/k)`.
pub fn chain_andrews_second(pair: &Arc<WPBaileyPair>) -> Result<Arc<WPBaileyPair>> {
    let kk = Monomial::var("s").pow(2).times_var("ra", 4).times_var("rk", -2);
    let constraints = substitute_k(pair, &kk, "second")?;
    Ok(derived(pair, "second".into(), PairDef::Second { inner: pair.clone() }, constraints, &[]))
}

/// Interchanges `a` and `k`.
pub fn dual(pair: &Arc<WPBaileyPair>) -> Result<Arc<WPBaileyPair>> {
    let constraints = pair
        .constraints
        .iter()
        .map(|c| Constraint {
            text: format!("{} [dual]", c.text),
            relation: c.relation.rename(&[("ra", "rk"), ("rk", "ra")]),
        })
        .collect();
    Ok(derived(pair, "dual".into(), PairDef::Dual { inner: pair.clone() }, constraints, &[]))
}

/// Same `β`, with `α` recovered by inversion.
pub fn inverted(pair: &Arc<WPBaileyPair>) -> Result<Arc<WPBaileyPair>> {
    let constraints = pair.constraints.clone();
    Ok(derived(pair, "invert".into(), PairDef::Inverted { inner: pair.clone() }, constraints, &[]))
}

/// `α_n` from `β_0..β_n` at `(a, k, q)`:
/// `α_n = (1−aq^{2n})/(1−a) Σ_j (1−kq^{2j})/(1−k) (a/k)_{n−j}(a)_{n+j}
///  / ((q)_{n−j}(kq)_{n+j}) (k/a)^{n−j} β_j`.
///
/// For `n ≥ 1` the factor `(a)_{n+j}/(1−a)` is taken as `(aq)_{n+j−1}`,
/// which keeps `a = 1` evaluable.
pub fn warnaar_invert_at(
    a: &ExactScalar,
    k: &ExactScalar,
    q: &ExactScalar,
    n: i64,
    mut beta: impl FnMut(i64) -> Result<ExactScalar>,
) -> Result<ExactScalar> {
    if n == 0 {
        return beta(0);
    }
    let one = ExactScalar::one();
    let ak = a.checked_div(k)?;
    let ka = k.checked_div(a)?;
    let aq = a * q;
    let kq = k * q;
    let mut sum = ExactScalar::zero();
    for j in 0..=n {
        let wk = if j == 0 {
            one.clone()
        } else {
            (&one - &(k * &q.pow(2 * j)?)).checked_div(&(&one - k))?
        };
        let num = &(&wk * &poch(&ak, q, n - j)?) * &poch(&aq, q, n + j - 1)?;
        let den = &poch(q, q, n - j)? * &poch(&kq, q, n + j)?;
        sum += &(&(&num.checked_div(&den)? * &ka.pow(n - j)?) * &beta(j)?);
    }
    Ok(&(&one - &(a * &q.pow(2 * n)?)) * &sum)
}

/// `α_0..α_{n_max}` recovered from `β`.
pub fn warnaar_invert(
    a: &ExactScalar,
    k: &ExactScalar,
    q: &ExactScalar,
    n_max: i64,
    mut beta: impl FnMut(i64) -> Result<ExactScalar>,
) -> Result<Vec<ExactScalar>> {
    (0..=n_max).map(|n| warnaar_invert_at(a, k, q, n, &mut beta)).collect()
}

/// Both sides of Warnaar's third-chain relation at index `n`, for a pair
/// at `(a, m)` with `m = k`:
///
/// `Σ_j (1+aq^{2j})/(1+a) (m/a;q²)_{n−j}(am;q²)_{n+j}/((q²;q²)_{n−j}(a²q²;q²)_{n+j}) q^{−j} α_j`
/// `= q^{−n}(−mq;q)_{2n}/(−a;q)_{2n} Σ_j (1−mq^{2j})/(1−m) (a/m;q²)_{n−j}(am;q²)_{n+j}
///   /((q²;q²)_{n−j}(m²q²;q²)_{n+j}) (m/a)^{n−j} β_j`.
pub fn warnaar_third_sides(pair: &BoundPair<'_>, n: i64) -> Result<(ExactScalar, ExactScalar)> {
    let (a, m, q) = (pair.a(), pair.k(), pair.q());
    let one = ExactScalar::one();
    let q2 = q * q;
    let am = a * m;
    let ma = m.checked_div(a)?;
    let am_ratio = a.checked_div(m)?;
    let a2q2 = &(a * a) * &q2;
    let m2q2 = &(m * m) * &q2;
    let mut lhs = ExactScalar::zero();
    let mut rhs = ExactScalar::zero();
    for j in 0..=n {
        let w = (&one + &(a * &q.pow(2 * j)?)).checked_div(&(&one + a))?;
        let num = &poch(&ma, &q2, n - j)? * &poch(&am, &q2, n + j)?;
        let den = &poch(&q2, &q2, n - j)? * &poch(&a2q2, &q2, n + j)?;
        lhs += &(&(&(&w * &num.checked_div(&den)?) * &q.pow(-j)?) * &pair.alpha(j)?);

        let wm = if j == 0 {
            one.clone()
        } else {
            (&one - &(m * &q.pow(2 * j)?)).checked_div(&(&one - m))?
        };
        let num = &poch(&am_ratio, &q2, n - j)? * &poch(&am, &q2, n + j)?;
        let den = &poch(&q2, &q2, n - j)? * &poch(&m2q2, &q2, n + j)?;
        rhs += &(&(&(&wm * &num.checked_div(&den)?) * &ma.pow(n - j)?) * &pair.beta(j)?);
    }
    let pre = (&q.pow(-n)? * &poch(&-(m * q), q, 2 * n)?).checked_div(&poch(&-a.clone(), q, 2 * n)?)?;
    Ok((lhs, &pre * &rhs))
}

pub fn warnaar_third_check(pair: &BoundPair<'_>, n_max: i64) -> Result<CheckOutcome> {
    for n in 0..=n_max {
        let (lhs, rhs) = warnaar_third_sides(pair, n)?;
        if lhs != rhs {
            return Ok(CheckOutcome::Fail { n, expected: lhs, got: rhs });
        }
    }
    Ok(CheckOutcome::Pass)
}

/// One node of a generated tree.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub pair: Arc<WPBaileyPair>,
    pub path: Vec<String>,
}

/// Applies the steps in order: `[seed, s₁(seed), s₂(s₁(seed)), …]`.
pub fn chain_path(seed: &Arc<WPBaileyPair>, steps: &[ChainStep]) -> Result<Vec<TreeNode>> {
    let mut out = vec![TreeNode { pair: seed.clone(), path: Vec::new() }];
    for step in steps {
        let last = out.last().expect("nonempty");
        let pair = step.apply(&last.pair)?;
        let mut path = last.path.clone();
        path.push(step.to_string());
        out.push(TreeNode { pair, path });
    }
    Ok(out)
}

/// Breadth-first tree: every step applied to every node, paths of length
/// at most `depth`. Steps that do not apply (for instance a constraint
/// that cannot be carried over) are skipped.
pub fn tree_generate(seed: &Arc<WPBaileyPair>, steps: &[ChainStep], depth: usize) -> Vec<TreeNode> {
    let mut out = vec![TreeNode { pair: seed.clone(), path: Vec::new() }];
    let mut frontier = out.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for node in &frontier {
            for step in steps {
                if let Ok(pair) = step.apply(&node.pair) {
                    let mut path = node.path.clone();
                    path.push(step.to_string());
                    next.push(TreeNode { pair, path });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
