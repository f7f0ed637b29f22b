//! Verification driver: sampling, the three backends, reports.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{BallCtx, Env, Index, SeriesCtx};
use crate::hyper::TailPolicy;
use crate::interval::{sci, IntervalValue};
use crate::point::{EvalPoint, Sampler, SamplerConfig, StreamId, Values};
use crate::scalar::{rational_to_decimal, ExactScalar};

use super::{identity_by_id, registry, Backend, Identity, NRole};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_set: Vec<i64>,
    /// Series truncation order `M`.
    pub order: usize,
    pub tail: TailPolicy,
    pub sampler: SamplerConfig,
    /// Coordinates held fixed at every point (undeclared ones are ignored).
    pub pins: BTreeMap<String, ExactScalar>,
    pub timing: bool,
    pub include_misprints: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            trials: 5,
            n_set: (0..=5).collect(),
            order: 60,
            tail: TailPolicy::default(),
            sampler: SamplerConfig::default(),
            pins: BTreeMap::new(),
            timing: false,
            include_misprints: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Consistent,
    Refuted,
    Error,
}

impl Status {
    /// Pass or consistent.
    pub fn ok(self) -> bool {
        matches!(self, Status::Pass | Status::Consistent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Point {
        #[serde(rename = "N")]
        n: Option<i64>,
        trial: usize,
        point: BTreeMap<String, String>,
        lhs: String,
        rhs: String,
    },
    Coefficient {
        point: BTreeMap<String, String>,
        index: usize,
        var: String,
        lhs: String,
        rhs: String,
    },
    Gap {
        point: BTreeMap<String, String>,
        lhs: String,
        rhs: String,
        gap: String,
    },
    Error {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailEcho {
    pub window: usize,
    pub ratio_cap: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub trials: usize,
    #[serde(rename = "N_set")]
    pub n_set: Vec<i64>,
    pub order: usize,
    pub tail: TailEcho,
}

/// Side information that is not part of the serialized report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportStats {
    /// Points at which both sides were compared.
    pub checks: usize,
    /// Widest ball seen (interval backend).
    pub max_width: Option<BigRational>,
    /// Some ball relied on the ratio-window tail.
    pub heuristic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub backend: Backend,
    pub seed: u64,
    pub config: ReportConfig,
    pub status: Status,
    pub witness: Option<Witness>,
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub stats: ReportStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub consistent: usize,
    pub refuted: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Consistent => s.consistent += 1,
                Status::Refuted => s.refuted += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn all_ok(&self) -> bool {
        self.pass + self.consistent == self.total
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

/// Errors that mean "this point is unusable", not "the identity is wrong".
fn degenerate(e: &Error) -> bool {
    match e {
        Error::Series(m) => m.contains("not invertible"),
        Error::Interval(m) => m.contains("containing zero"),
        other => other.is_pole(),
    }
}

fn point_strings(p: &EvalPoint, hide: &[&str]) -> BTreeMap<String, String> {
    p.coords().iter().filter(|(k, _)| !hide.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.to_string())).collect()
}

fn ball_string(b: &IntervalValue) -> String {
    format!("{} ± {}", rational_to_decimal(b.center(), 30), sci(b.radius()))
}

enum Outcome {
    Same,
    Differ(Witness),
}

struct Run<'a> {
    ident: &'a Identity,
    backend: Backend,
    cfg: &'a VerifyConfig,
    stats: ReportStats,
}

impl Run<'_> {
    /// Draws a point on which both sides evaluate, then compares.
    fn check(&mut self, n: Option<i64>, trial: usize) -> Result<Outcome> {
        let sampler_cfg = SamplerConfig { seed: self.cfg.seed, ..self.cfg.sampler.clone() };
        let sampler = Sampler {
            config: &sampler_cfg,
            decls: &self.ident.decls,
            bindings: &self.ident.bindings,
            small_q: self.backend == Backend::Interval,
        };
        let id = StreamId { label: &self.ident.id, n: n.unwrap_or(-1), trial };
        let mut found: Option<(EvalPoint, Outcome)> = None;
        let mut hard: Option<Error> = None;
        let res = sampler.sample(&id, |p| {
            if hard.is_some() {
                return true;
            }
            let p = match self.pinned(p) {
                Ok(p) => p,
                Err(e) if degenerate(&e) => return false,
                Err(e) => {
                    hard = Some(e);
                    return true;
                }
            };
            match self.compare(&p, n, trial) {
                Ok(o) => {
                    found = Some((p, o));
                    true
                }
                Err(e) if degenerate(&e) => false,
                Err(e) => {
                    hard = Some(e);
                    true
                }
            }
        });
        if let Some(e) = hard {
            return Err(e);
        }
        res?;
        let (_, outcome) = found.expect("accepted point was compared");
        self.stats.checks += 1;
        Ok(outcome)
    }

    fn pinned(&self, p: &EvalPoint) -> Result<EvalPoint> {
        let mut p = p.clone();
        if self.cfg.pins.is_empty() {
            return Ok(p);
        }
        for (coord, v) in &self.cfg.pins {
            if p.coord(coord).is_some() {
                p.set(coord, v.clone())?;
            }
        }
        for b in &self.ident.bindings {
            if self.cfg.pins.contains_key(&b.coord) {
                continue;
            }
            let v = b.value.eval(&p.root_env())?;
            if v.is_zero() {
                return Err(Error::DivisionByZero);
            }
            p.set(&b.coord, v)?;
        }
        Ok(p)
    }

    fn compare(&mut self, p: &EvalPoint, n: Option<i64>, trial: usize) -> Result<Outcome> {
        let values: Values = p.values();
        let mut env = Env::new(&values);
        if let Some(n) = n {
            env = env.with(Index::BigN, n);
        }
        match self.backend {
            Backend::Exact => {
                let l = self.ident.lhs.eval(&env)?;
                let r = self.ident.rhs.eval(&env)?;
                Ok(if l == r {
                    Outcome::Same
                } else {
                    Outcome::Differ(Witness::Point {
                        n,
                        trial,
                        point: point_strings(p, &[]),
                        lhs: l.to_string(),
                        rhs: r.to_string(),
                    })
                })
            }
            Backend::Series => {
                let ctx = SeriesCtx::new(self.ident.series_var, self.cfg.order);
                let l = self.ident.lhs.eval_series(&env, &ctx)?;
                let r = self.ident.rhs.eval_series(&env, &ctx)?;
                Ok(match l.first_difference(&r) {
                    None => Outcome::Same,
                    Some(i) => Outcome::Differ(Witness::Coefficient {
                        point: point_strings(p, &["q", "s"]),
                        index: i,
                        var: ctx.var.to_string(),
                        lhs: l.coeff(i).to_string(),
                        rhs: r.coeff(i).to_string(),
                    }),
                })
            }
            Backend::Interval => {
                let ctx = BallCtx { tail: self.cfg.tail.clone() };
                let l = self.ident.lhs.eval_ball(&env, &ctx)?;
                let r = self.ident.rhs.eval_ball(&env, &ctx)?;
                for b in [&l, &r] {
                    let w = b.width();
                    if self.stats.max_width.as_ref().map_or(true, |m| &w > m) {
                        self.stats.max_width = Some(w);
                    }
                    self.stats.heuristic |= !b.is_rigorous();
                }
                Ok(if l.overlaps(&r) {
                    Outcome::Same
                } else {
                    Outcome::Differ(Witness::Gap {
                        point: point_strings(p, &[]),
                        lhs: ball_string(&l),
                        rhs: ball_string(&r),
                        gap: sci(&l.gap(&r)),
                    })
                })
            }
        }
    }

    fn run(&mut self) -> (Status, Option<Witness>) {
        let ns: Vec<Option<i64>> = match (self.backend, self.ident.n_role) {
            (Backend::Exact, NRole::Structural) => self.cfg.n_set.iter().copied().map(Some).collect(),
            _ => vec![None],
        };
        let (ok, bad) = match self.backend {
            Backend::Interval => (Status::Consistent, Status::Refuted),
            _ => (Status::Pass, Status::Fail),
        };
        for n in ns {
            for trial in 0..self.cfg.trials {
                match self.check(n, trial) {
                    Ok(Outcome::Same) => {}
                    Ok(Outcome::Differ(w)) => return (bad, Some(w)),
                    Err(e) => return (Status::Error, Some(Witness::Error { message: e.to_string() })),
                }
            }
        }
        (ok, None)
    }
}

/// Checks one identity with one backend. Never panics on mathematical
/// failure; errors become a report with status `error`.
pub fn verify(ident: &Identity, backend: Backend, cfg: &VerifyConfig) -> VerificationReport {
    let start = Instant::now();
    let (status, witness, stats) = if ident.admits(backend) {
        let mut run = Run { ident, backend, cfg, stats: ReportStats::default() };
        let (s, w) = run.run();
        (s, w, run.stats)
    } else {
        let e = Error::InadmissibleBackend { id: ident.id.clone(), backend: backend.to_string() };
        (Status::Error, Some(Witness::Error { message: e.to_string() }), ReportStats::default())
    };
    VerificationReport {
        id: ident.id.clone(),
        backend,
        seed: cfg.seed,
        config: ReportConfig {
            trials: cfg.trials,
            n_set: cfg.n_set.clone(),
            order: cfg.order,
            tail: TailEcho { window: cfg.tail.window, ratio_cap: cfg.tail.ratio_cap.to_string() },
        },
        status,
        witness,
        elapsed_ms: cfg.timing.then(|| start.elapsed().as_millis() as u64),
        stats,
    }
}

/// Looks up `id` and runs it with `backend` (default backend if `None`).
pub fn verify_id(id: &str, backend: Option<Backend>, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let ident = identity_by_id(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    let backend = backend.unwrap_or(ident.default_backend);
    if !ident.admits(backend) {
        return Err(Error::InadmissibleBackend { id: id.to_string(), backend: backend.to_string() });
    }
    Ok(verify(&ident, backend, cfg))
}

/// Runs the registry with default backends, in parallel, sorted by id.
/// Misprint entries are skipped unless `include_misprints` is set.
pub fn verify_all(cfg: &VerifyConfig) -> BatchReport {
    let idents: Vec<Identity> =
        registry().into_iter().filter(|i| cfg.include_misprints || i.expectation.holds()).collect();
    let mut reports: Vec<VerificationReport> = idents.par_iter().map(|i| verify(i, i.default_backend, cfg)).collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = Summary::of(&reports);
    BatchReport { reports, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig { trials: 2, n_set: vec![0, 1, 2, 3], order: 30, ..VerifyConfig::default() }
    }

    fn by_id(id: &str) -> Identity {
        identity_by_id(id).unwrap()
    }

    #[test]
    fn tele_a_at_zero() {
        let cfg = VerifyConfig { n_set: vec![0], ..quick() };
        let r = verify(&by_id("tele_a"), Backend::Exact, &cfg);
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);
    }

    #[test]
    fn rr1_at_fixed_k() {
        let mut cfg = VerifyConfig { trials: 1, order: 60, ..quick() };
        cfg.pins.insert("k".into(), ExactScalar::ratio(3, 5));
        let r = verify(&by_id("burge_rr1"), Backend::Series, &cfg);
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);
        assert_eq!(r.stats.checks, 1);
    }

    #[test]
    fn rr2_vanishes() {
        let r = verify(&by_id("burge_rr2"), Backend::Series, &quick());
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);
    }

    #[test]
    fn mutation_is_caught() {
        let base = by_id("simple_master");
        let m = base.mutated(0).unwrap();
        let r = verify(&m, Backend::Exact, &quick());
        assert_eq!(r.status, Status::Fail);
        assert!(matches!(r.witness, Some(Witness::Point { .. })));
    }

    #[test]
    fn misprint_fails_with_witness() {
        let r = verify(&by_id("burge_8phi7_verbatim"), Backend::Exact, &quick());
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn inadmissible_backend() {
        let e = verify_id("tele_a", Some(Backend::Interval), &quick()).unwrap_err();
        assert!(matches!(e, Error::InadmissibleBackend { .. }));
        assert!(matches!(verify_id("nope", None, &quick()), Err(Error::UnknownId(_))));
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = quick();
        let a = serde_json::to_string(&verify(&by_id("count_sum"), Backend::Exact, &cfg)).unwrap();
        let b = serde_json::to_string(&verify(&by_id("count_sum"), Backend::Exact, &cfg)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"elapsed_ms\":null"));
        assert!(a.contains("\"N_set\":[0,1,2,3]"));
    }

    #[test]
    fn interval_backend_consistent() {
        let r = verify(&by_id("whipple_q"), Backend::Interval, &quick());
        assert_eq!(r.status, Status::Consistent, "{:?}", r.witness);
        assert!(r.stats.max_width.is_some());
    }
}
