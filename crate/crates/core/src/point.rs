//! Evaluation points at square-root level and the deterministic sampler.
//!
//! Every rooted symbol `x` is sampled through its root (`rx`, or `s` for
//! `q`), so half-integer powers in a formula are integer powers of a sampled
//! rational.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::ExactScalar;

/// Symbol table handed to expression evaluation: root names and value
/// names side by side (`s`, `q`, `ra`, `a`, …).
pub type Values = BTreeMap<String, ExactScalar>;

/// Root name for a value symbol: `q ↦ s`, `x ↦ rx`.
pub fn root_name(value: &str) -> String {
    if value == "q" {
        "s".to_string()
    } else {
        format!("r{value}")
    }
}

/// Value name for a root symbol, inverse of [`root_name`].
pub fn value_name(root: &str) -> Option<String> {
    if root == "s" {
        Some("q".to_string())
    } else {
        root.strip_prefix('r').filter(|v| !v.is_empty()).map(str::to_string)
    }
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDecl {
    /// Value name as it appears in formulas (`a`, `k`, `q`, `y`, …).
    pub name: String,
    /// Sampled through its square root.
    pub rooted: bool,
    /// Bounds `[lo, hi]` on the absolute value of the sampled coordinate.
    #[serde(skip)]
    pub range: Option<(BigRational, BigRational)>,
}

impl SymbolDecl {
    pub fn rooted(name: &str) -> Self {
        SymbolDecl { name: name.to_string(), rooted: true, range: None }
    }

    pub fn plain(name: &str) -> Self {
        SymbolDecl { name: name.to_string(), rooted: false, range: None }
    }

    /// Restricts `|coordinate|` to `[lo, hi]`.
    pub fn within(mut self, lo: (i64, i64), hi: (i64, i64)) -> Self {
        self.range = Some((rat(lo.0, lo.1), rat(hi.0, hi.1)));
        self
    }

    /// Name of the sampled coordinate.
    pub fn coord(&self) -> String {
        if self.rooted {
            root_name(&self.name)
        } else {
            self.name.clone()
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Forces a sampled coordinate to a monomial in the others (applied in order
/// after the free draw).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub coord: String,
    pub value: Monomial,
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub square: ExactScalar,
    pub root: Option<ExactScalar>,
}

/// Root-level view used by pairs and monomials: root name ↦ (square, root?).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootEnv {
    map: BTreeMap<String, RootEntry>,
}

impl RootEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, root: &str) -> Option<&RootEntry> {
        self.map.get(root)
    }

    pub fn set(&mut self, root: &str, square: ExactScalar, root_value: Option<ExactScalar>) {
        self.map.insert(root.to_string(), RootEntry { square, root: root_value });
    }

    pub fn set_root(&mut self, root: &str, r: ExactScalar) {
        let sq = &r * &r;
        self.set(root, sq, Some(r));
    }

    /// Square (value) of a root symbol.
    pub fn square(&self, root: &str) -> Result<&ExactScalar> {
        self.map.get(root).map(|e| &e.square).ok_or_else(|| Error::UnknownSymbol(root.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &RootEntry)> {
        self.map.iter()
    }

    /// Expression symbol table: every value name, plus every available root.
    pub fn values(&self) -> Values {
        let mut v = Values::new();
        for (root, e) in &self.map {
            if let Some(name) = value_name(root) {
                v.insert(name, e.square.clone());
            }
            if let Some(r) = &e.root {
                v.insert(root.clone(), r.clone());
            }
        }
        v
    }
}

/// A sampled point: coordinates (roots for rooted symbols) plus the
/// declarations that say how to read them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    coords: BTreeMap<String, ExactScalar>,
    rooted: BTreeMap<String, bool>,
}

impl EvalPoint {
    pub fn new() -> Self {
        EvalPoint { coords: BTreeMap::new(), rooted: BTreeMap::new() }
    }

    pub fn from_decls(decls: &[SymbolDecl], coords: &BTreeMap<String, ExactScalar>) -> Result<Self> {
        let mut p = EvalPoint::new();
        for d in decls {
            let c = d.coord();
            let v = coords.get(&c).ok_or_else(|| Error::UnknownSymbol(c.clone()))?;
            p.insert(&c, d.rooted, v.clone());
        }
        Ok(p)
    }

    pub fn insert(&mut self, coord: &str, rooted: bool, v: ExactScalar) {
        self.coords.insert(coord.to_string(), v);
        self.rooted.insert(coord.to_string(), rooted);
    }

    pub fn coord(&self, name: &str) -> Option<&ExactScalar> {
        self.coords.get(name)
    }

    pub fn coords(&self) -> &BTreeMap<String, ExactScalar> {
        &self.coords
    }

    /// Sets an existing coordinate (used by bindings and pinned values).
    pub fn set(&mut self, coord: &str, v: ExactScalar) -> Result<()> {
        match self.coords.get_mut(coord) {
            Some(slot) => {
                *slot = v;
                Ok(())
            }
            None => Err(Error::UnknownSymbol(coord.to_string())),
        }
    }

    pub fn root_env(&self) -> RootEnv {
        let mut env = RootEnv::new();
        for (c, v) in &self.coords {
            if self.rooted[c] {
                env.set_root(c, v.clone());
            } else {
                // plain symbols behave as roots of their squares in monomials
                env.set(c, v * v, Some(v.clone()));
            }
        }
        env
    }

    /// Expression symbol table: coordinates plus derived squares.
    pub fn values(&self) -> Values {
        let mut v = Values::new();
        for (c, x) in &self.coords {
            v.insert(c.clone(), x.clone());
            if self.rooted[c] {
                if let Some(name) = value_name(c) {
                    v.insert(name, x * x);
                }
            }
        }
        v
    }
}

impl Default for EvalPoint {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// Sampler
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub max_numerator: u32,
    pub max_denominator: u32,
    /// Cap on `|s|` when the caller asks for small `q` (interval work).
    pub magnitude_cap: BigRational,
    pub max_retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            max_numerator: 12,
            max_denominator: 12,
            magnitude_cap: rat(1, 2),
            max_retries: 400,
        }
    }
}

/// Identifies one independent random stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StreamId<'a> {
    pub label: &'a str,
    pub n: i64,
    pub trial: usize,
}

/// Seeds a stream from `(seed, label, n, trial)` through SHA-256, so streams
/// do not depend on the order in which they are requested.
pub fn stream_rng(seed: u64, id: &StreamId<'_>) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((id.label.len() as u64).to_le_bytes());
    h.update(id.label.as_bytes());
    h.update(id.n.to_le_bytes());
    h.update((id.trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

pub struct Sampler<'a> {
    pub config: &'a SamplerConfig,
    pub decls: &'a [SymbolDecl],
    pub bindings: &'a [Binding],
    /// Apply `config.magnitude_cap` to `s`.
    pub small_q: bool,
}

impl Sampler<'_> {
    /// Draws pole-free points until `accept` says yes.
    pub fn sample(
        &self,
        id: &StreamId<'_>,
        mut accept: impl FnMut(&EvalPoint) -> bool,
    ) -> Result<EvalPoint> {
        let mut rng = stream_rng(self.config.seed, id);
        for _ in 0..self.config.max_retries {
            let Some(p) = self.draw(&mut rng)? else { continue };
            if accept(&p) {
                return Ok(p);
            }
        }
        Err(Error::SamplerExhausted { retries: self.config.max_retries })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Option<EvalPoint>> {
        let mut p = EvalPoint::new();
        for d in self.decls {
            let mut range = d.range.clone();
            if self.small_q && d.name == "q" {
                let cap = self.config.magnitude_cap.clone();
                range = Some(match range {
                    Some((lo, hi)) => (lo, if hi < cap { hi } else { cap }),
                    None => (rat(1, self.config.max_denominator as i64), cap),
                });
            }
            p.insert(&d.coord(), d.rooted, draw_rational(rng, self.config, range.as_ref()));
        }
        for b in self.bindings {
            let v = b.value.eval(&p.root_env())?;
            if v.is_zero() {
                return Ok(None);
            }
            p.set(&b.coord, v)?;
        }
        // q = 1 collapses (q^-N; q)_n and (q; q)_n together
        if p.values().get("q").is_some_and(ExactScalar::is_one) {
            return Ok(None);
        }
        Ok(Some(p))
    }
}

/// Nonzero rational `±n/d`, `n ≤ max_numerator`, `d ≤ max_denominator`,
/// optionally with `|n/d| ∈ [lo, hi]`.
fn draw_rational(
    rng: &mut ChaCha8Rng,
    cfg: &SamplerConfig,
    range: Option<&(BigRational, BigRational)>,
) -> ExactScalar {
    let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let max_n = cfg.max_numerator.max(1) as i64;
    let max_d = cfg.max_denominator.max(1) as i64;
    let Some((lo, hi)) = range else {
        let n = rng.gen_range(1..=max_n);
        let d = rng.gen_range(1..=max_d);
        return ExactScalar::ratio(sign * n, d);
    };
    // pick a denominator whose numerator window inside [lo, hi] is nonempty;
    // ranges may ask for larger denominators than the box when they are narrow
    for _ in 0..64 {
        let d = rng.gen_range(1..=max_d * 4);
        let dd = BigRational::from_integer(d.into());
        let lo_n = (lo * &dd).ceil().to_integer().max(BigInt::one());
        let hi_n = (hi * &dd).floor().to_integer();
        if lo_n > hi_n {
            continue;
        }
        let (lo_n, hi_n) = (lo_n.to_i64().unwrap_or(1), hi_n.to_i64().unwrap_or(i64::MAX / 2));
        let n = rng.gen_range(lo_n..=hi_n);
        if n.gcd(&d) != 1 && rng.gen_bool(0.5) {
            continue;
        }
        return ExactScalar::ratio(sign * n, d);
    }
    // narrow window: fall back to its midpoint
    let mid = (lo + hi) / BigRational::from_integer(2.into());
    let mid = if mid.is_zero() { hi.abs() } else { mid };
    ExactScalar::real(mid * BigRational::from_integer(sign.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decls() -> Vec<SymbolDecl> {
        vec![SymbolDecl::rooted("q"), SymbolDecl::rooted("k"), SymbolDecl::plain("y")]
    }

    #[test]
    fn same_stream_same_point() {
        let cfg = SamplerConfig { seed: 42, ..Default::default() };
        let d = decls();
        let s = Sampler { config: &cfg, decls: &d, bindings: &[], small_q: false };
        let id = StreamId { label: "x", n: 3, trial: 1 };
        let a = s.sample(&id, |_| true).unwrap();
        let b = s.sample(&id, |_| true).unwrap();
        assert_eq!(a, b);
        let other = s.sample(&StreamId { label: "x", n: 3, trial: 2 }, |_| true).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn rejecting_everything_exhausts() {
        let cfg = SamplerConfig { max_retries: 7, ..Default::default() };
        let d = decls();
        let s = Sampler { config: &cfg, decls: &d, bindings: &[], small_q: false };
        let err = s.sample(&StreamId { label: "x", n: 0, trial: 0 }, |_| false).unwrap_err();
        assert_eq!(err, Error::SamplerExhausted { retries: 7 });
    }

    #[test]
    fn predicate_keeps_k_away_from_q() {
        let cfg = SamplerConfig { max_numerator: 2, max_denominator: 2, ..Default::default() };
        let d = decls();
        let s = Sampler { config: &cfg, decls: &d, bindings: &[], small_q: false };
        for trial in 0..20 {
            let p = s
                .sample(&StreamId { label: "k!=q", n: 0, trial }, |p| {
                    let v = p.values();
                    v["k"] != v["q"]
                })
                .unwrap();
            let v = p.values();
            assert_ne!(v["k"], v["q"]);
        }
    }

    #[test]
    fn bindings_and_ranges() {
        let cfg = SamplerConfig::default();
        let d = vec![
            SymbolDecl::rooted("q").within((1, 5), (1, 2)),
            SymbolDecl::rooted("k"),
        ];
        let b = vec![Binding { coord: "rk".into(), value: Monomial::var("s") }];
        let s = Sampler { config: &cfg, decls: &d, bindings: &b, small_q: false };
        for trial in 0..10 {
            let p = s.sample(&StreamId { label: "b", n: 0, trial }, |_| true).unwrap();
            let v = p.values();
            assert_eq!(v["k"], v["q"]);
            let s_abs = v["s"].re().abs();
            assert!(s_abs >= rat(1, 5) && s_abs <= rat(1, 2));
        }
    }

    #[test]
    fn q_one_is_never_drawn() {
        let cfg = SamplerConfig { max_numerator: 1, max_denominator: 1, ..Default::default() };
        let d = vec![SymbolDecl::rooted("q"), SymbolDecl::plain("y")];
        let s = Sampler { config: &cfg, decls: &d, bindings: &[], small_q: false };
        // |s| = 1 is the only draw available
        assert!(s.sample(&StreamId { label: "q1", n: 0, trial: 0 }, |_| true).is_err());
    }

    #[test]
    fn derived_symbols_are_squares() {
        let mut p = EvalPoint::new();
        p.insert("ra", true, ExactScalar::ratio(2, 3));
        p.insert("s", true, ExactScalar::ratio(-1, 2));
        let v = p.values();
        assert_eq!(v["a"], ExactScalar::ratio(4, 9));
        assert_eq!(v["q"], ExactScalar::ratio(1, 4));
    }
}
