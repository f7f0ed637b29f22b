//! Registered identities and the machinery to verify them.
//!
//! Each [`Identity`] carries two expression sides, the symbols a point must
//! supply (with root-level declarations), and the backends that can decide
//! it. [`verify`] runs one identity, [`verify_all`] runs the registry.

mod registry;
mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, MutationSite, SeriesVar};
use crate::pairs::WPBaileyPair;
use crate::point::{stream_rng, Binding, StreamId, SymbolDecl};

pub use registry::{cor_inf_a, cor_inf_b, registry, sv_special_q, theta_sum, thm1_a, thm1_b, war3_master};
pub use verify::{
    verify, verify_all, verify_id, BatchReport, ReportConfig, ReportStats, Status, Summary, TailEcho,
    VerificationReport, VerifyConfig, Witness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Series,
    Interval,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Series => "series",
            Backend::Interval => "interval",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "series" => Ok(Backend::Series),
            "interval" => Ok(Backend::Interval),
            other => Err(Error::Config(format!("unknown backend `{other}` (exact, series, interval)"))),
        }
    }
}

/// Whether `N` is a structural integer of the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NRole {
    Structural,
    Absent,
}

/// What the registry expects the checker to find.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "note")]
pub enum Expectation {
    Holds,
    /// Registered verbatim from a display known to be wrong.
    Misprint(String),
}

impl Expectation {
    pub fn holds(&self) -> bool {
        matches!(self, Expectation::Holds)
    }
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub anchor: String,
    pub summary: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub decls: Vec<SymbolDecl>,
    pub bindings: Vec<Binding>,
    pub n_role: NRole,
    pub backends: Vec<Backend>,
    pub default_backend: Backend,
    pub expectation: Expectation,
    /// Formal variable for the series backend.
    pub series_var: SeriesVar,
    /// Catalog pair plugged into the identity, if any.
    pub pair: Option<String>,
}

impl Identity {
    pub fn admits(&self, b: Backend) -> bool {
        self.backends.contains(&b)
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        self.decls.iter().map(|d| d.name.clone()).collect()
    }

    /// Symbols used by either side, value names and root names alike.
    pub fn used_symbols(&self) -> BTreeSet<String> {
        let mut s = self.lhs.symbols();
        s.extend(self.rhs.symbols());
        s
    }

    /// Every denominator on either side: divisors, negative powers,
    /// Pochhammer denominators of series, and plugged-in pair sequences.
    pub fn pole_factors(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |s: String| {
            if !out.contains(&s) {
                out.push(s);
            }
        };
        for side in [&self.lhs, &self.rhs] {
            side.visit(&mut |e| match e {
                Expr::Div(_, d) => push(d.to_string()),
                Expr::Pow(b, x) => {
                    if x.to_string().starts_with('-') {
                        push(b.to_string());
                    }
                }
                Expr::Series(s) => {
                    for p in &s.denom {
                        push(format!("({}; {})", p.arg, p.base));
                    }
                }
                Expr::Pair { pair, .. } => push(format!("pair {}", pair.id)),
                _ => {}
            });
        }
        out
    }

    pub fn mutation_sites(&self) -> Vec<MutationSite> {
        let mut out = Vec::new();
        self.lhs.collect_sites(&mut out);
        self.rhs.collect_sites(&mut out);
        out
    }

    /// Copy with one single-factor perturbation; `None` if there is no such
    /// site.
    pub fn mutated(&self, site: usize) -> Option<Identity> {
        if site >= self.mutation_sites().len() {
            return None;
        }
        let mut counter = 0;
        let lhs = self.lhs.mutate(site, &mut counter);
        let rhs = self.rhs.mutate(site, &mut counter);
        Some(Identity {
            id: format!("{}~mut{site}", self.id),
            lhs,
            rhs,
            expectation: Expectation::Holds,
            ..self.clone()
        })
    }

    /// `count` distinct mutation sites drawn from `seed`.
    pub fn seeded_mutations(&self, seed: u64, count: usize) -> Vec<usize> {
        let n = self.mutation_sites().len();
        let label = format!("mutations/{}", self.id);
        let mut rng = stream_rng(seed, &StreamId { label: &label, n: 0, trial: 0 });
        let mut picks = sample(&mut rng, n, count.min(n)).into_vec();
        picks.sort_unstable();
        picks
    }

    pub fn info(&self) -> IdentityInfo {
        IdentityInfo {
            id: self.id.clone(),
            anchor: self.anchor.clone(),
            summary: self.summary.clone(),
            symbols: self.decls.iter().map(|d| if d.rooted { format!("√{}", d.name) } else { d.name.clone() }).collect(),
            n_role: self.n_role,
            backends: self.backends.clone(),
            default_backend: self.default_backend,
            expectation: self.expectation.clone(),
            pair: self.pair.clone(),
            pole_factors: self.pole_factors(),
        }
    }

    /// Adopts the declarations and constraint bindings of a plugged-in pair.
    pub(crate) fn plug(mut self, pair: &Arc<WPBaileyPair>) -> Result<Self> {
        let mut decls = pair.decls();
        for d in self.decls {
            if let Some(existing) = decls.iter_mut().find(|e| e.name == d.name) {
                if d.range.is_some() {
                    existing.range = d.range;
                }
            } else {
                decls.push(d);
            }
        }
        self.decls = decls;
        self.bindings = pair.bindings()?;
        self.pair = Some(pair.id.clone());
        Ok(self)
    }
}

/// Serializable listing entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityInfo {
    pub id: String,
    pub anchor: String,
    pub summary: String,
    pub symbols: Vec<String>,
    pub n_role: NRole,
    pub backends: Vec<Backend>,
    pub default_backend: Backend,
    pub expectation: Expectation,
    pub pair: Option<String>,
    pub pole_factors: Vec<String>,
}

pub fn identity_by_id(id: &str) -> Option<Identity> {
    registry().into_iter().find(|i| i.id == id)
}
