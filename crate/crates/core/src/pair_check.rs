//! Sampled check of a pair against the defining WP-Bailey relation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pairs::{wp_defining_check, CheckOutcome, RelationForm, WPBaileyPair};
use crate::point::{Sampler, SamplerConfig, StreamId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub trial: usize,
    pub n: i64,
    pub form: String,
    pub point: BTreeMap<String, String>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub id: String,
    pub path: Vec<String>,
    pub seed: u64,
    pub trials: usize,
    pub n_max: i64,
    /// `pass`, `fail` or `error`.
    pub status: String,
    pub witness: Option<PairWitness>,
    pub error: Option<String>,
    /// Points where only the direct form could be evaluated.
    pub rewritten_skipped: usize,
}

/// Checks `β_n` for `n ≤ n_max` in both relation forms at `trials` points.
pub fn check_pair(pair: &WPBaileyPair, sampler: &SamplerConfig, trials: usize, n_max: i64) -> PairReport {
    let mut report = PairReport {
        id: pair.id.clone(),
        path: pair.path.clone(),
        seed: sampler.seed,
        trials,
        n_max,
        status: "pass".into(),
        witness: None,
        error: None,
        rewritten_skipped: 0,
    };
    if let Err(e) = run(pair, sampler, trials, n_max, &mut report) {
        report.status = "error".into();
        report.error = Some(e.to_string());
    }
    report
}

fn run(pair: &WPBaileyPair, cfg: &SamplerConfig, trials: usize, n_max: i64, report: &mut PairReport) -> Result<()> {
    let decls = pair.decls();
    let bindings = pair.bindings()?;
    let sampler = Sampler { config: cfg, decls: &decls, bindings: &bindings, small_q: false };
    for trial in 0..trials {
        let mut outcome = None;
        let p = sampler.sample(&StreamId { label: &pair.id, n: n_max, trial }, |p| {
            let Ok(b) = pair.bind(p.root_env()) else { return false };
            let mut out = Vec::new();
            for form in [RelationForm::Direct, RelationForm::Rewritten] {
                match wp_defining_check(&b, n_max, form) {
                    Ok(o) => out.push((form, o)),
                    // k/a in q^(-N) makes the rewritten sum 0 * pole while the direct one is fine
                    Err(e) if e.is_pole() && form == RelationForm::Rewritten => {}
                    Err(e) if e.is_pole() => return false,
                    Err(e) => {
                        outcome = Some(Err(e));
                        return true;
                    }
                }
            }
            outcome = Some(Ok(out));
            true
        })?;
        let out = outcome.expect("accepted point was checked")?;
        if out.len() < 2 {
            report.rewritten_skipped += 1;
        }
        for (form, o) in out {
            if let CheckOutcome::Fail { n, expected, got } = o {
                report.status = "fail".into();
                report.witness = Some(PairWitness {
                    trial,
                    n,
                    form: format!("{form:?}").to_lowercase(),
                    point: p.coords().iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    expected: expected.to_string(),
                    got: got.to_string(),
                });
                return Ok(());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{catalog, PairDef};
    use crate::pairs::pair_by_id;
    use crate::scalar::ExactScalar;
    use crate::expr::Seq;
    use std::sync::Arc;

    #[test]
    fn catalog_passes() {
        let cfg = SamplerConfig { seed: 3, ..Default::default() };
        for p in catalog() {
            let r = check_pair(&p, &cfg, 2, 4);
            assert_eq!(r.status, "pass", "{} {:?} {:?}", p.id, r.witness, r.error);
        }
    }

    #[test]
    fn perturbed_fails() {
        let inner = pair_by_id("mz01").unwrap();
        let bad = WPBaileyPair {
            id: "mz01+".into(),
            def: PairDef::Perturbed { inner: inner.clone(), seq: Seq::Beta, n: 2, delta: ExactScalar::ratio(1, 7) },
            ..(*inner).clone()
        };
        let r = check_pair(&Arc::new(bad), &SamplerConfig::default(), 1, 3);
        assert_eq!(r.status, "fail");
        assert_eq!(r.witness.unwrap().n, 2);
    }
}
