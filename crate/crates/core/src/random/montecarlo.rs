use super::{derived_seed, sample_process, separated_values, ProcessKind, ProcessSpec, Separation};
use super::{sample_variance, VarianceEstimate};
use crate::error::{precondition, Result};
use crate::rightlimit::{find_pair_certificate, FlankSide, NonReflectionlessCertificate, SearchConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Cover radius parameter used for the separation check.
const COVER_M: u64 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub found: bool,
    pub backward: Option<NonReflectionlessCertificate>,
    pub forward: Option<NonReflectionlessCertificate>,
    /// Empirical variance of the sampled path.
    pub variance: VarianceEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub spec: ProcessSpec,
    pub trials: u64,
    pub window: usize,
    pub horizon: u64,
    pub eps: f64,
    pub delta: f64,
    pub path_length: u64,
    /// Exact single-draw variance, for iid specs.
    pub sigma: Option<f64>,
    /// Separated-values construction on the iid distribution.
    pub separation: Option<Separation>,
    pub records: Vec<TrialRecord>,
    pub hits: u64,
    pub hit_rate: f64,
}

impl MonteCarloReport {
    /// Regenerates every path from its seed and re-checks each certificate.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for r in &self.records {
            let path = sample_process(&self.spec.with_seed(r.seed), self.path_length)
                .map_err(|e| e.to_string())?;
            for cert in r.backward.iter().chain(r.forward.iter()) {
                cert.verify(&path).map_err(|e| format!("trial {}: {e}", r.trial))?;
            }
            if r.found != (r.backward.is_some() || r.forward.is_some()) {
                return Err(format!("trial {}: found flag disagrees with certificates", r.trial));
            }
        }
        Ok(())
    }
}

/// Samples `trials` paths, trial `t` with the `t`-th seed derived from
/// `spec.seed`, and runs the pair search on both flank sides of each.
/// Only `window`, `horizon`, `eps`, `delta`, `min_recurrence`,
/// `max_witnesses` and `comparison_budget` of `cfg` are used.
pub fn certificate_rate_experiment(
    spec: &ProcessSpec,
    trials: u64,
    cfg: &SearchConfig,
) -> Result<MonteCarloReport> {
    spec.validate()?;
    precondition(trials >= 1, || "need at least one trial".into())?;
    cfg.check_separation()?;
    let (sigma, separation) = match &spec.kind {
        ProcessKind::Iid { support } => {
            let sigma = spec.iid_variance().unwrap_or(0.0);
            let dist: Vec<_> = support.iter().map(|a| (a.value, a.prob)).collect();
            let sep = separated_values(&dist, COVER_M, sigma)?;
            match &sep {
                Separation::Separated { separation, .. } => {
                    precondition(cfg.delta <= *separation, || {
                        format!("delta {} exceeds the achievable separation {separation}", cfg.delta)
                    })?;
                }
                Separation::NoSeparation { reason, .. } => {
                    precondition(false, || {
                        format!("no separated values ({reason}); delta {} unreachable", cfg.delta)
                    })?;
                }
            }
            (Some(sigma), Some(sep))
        }
        _ => (None, None),
    };
    let path_length = cfg.horizon + cfg.window as u64 + 1;
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derived_seed(spec.seed, trial);
            let path = sample_process(&spec.with_seed(seed), path_length)?;
            let backward = find_pair_certificate(&path, cfg, FlankSide::Backward)?;
            let forward = find_pair_certificate(&path, cfg, FlankSide::Forward)?;
            let variance = sample_variance(&path.prefix(path_length))?;
            Ok(TrialRecord {
                trial,
                seed,
                found: backward.is_some() || forward.is_some(),
                backward,
                forward,
                variance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hits = records.iter().filter(|r| r.found).count() as u64;
    Ok(MonteCarloReport {
        spec: spec.clone(),
        trials,
        window: cfg.window,
        horizon: cfg.horizon,
        eps: cfg.eps,
        delta: cfg.delta,
        path_length,
        sigma,
        separation,
        records,
        hits,
        hit_rate: hits as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::tests::bernoulli;
    use crate::random::Atom;
    use crate::sequence::{BoundaryFn, RotationNumber};
    use num_complex::Complex64;

    fn cfg(horizon: u64) -> SearchConfig {
        SearchConfig {
            window: 3,
            horizon,
            eps: 0.0,
            delta: 1.0,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn bernoulli_always_certifies() {
        let report = certificate_rate_experiment(&bernoulli(42), 8, &cfg(2000)).unwrap();
        assert_eq!(report.hits, 8);
        report.verify().unwrap();
        let again = certificate_rate_experiment(&bernoulli(42), 8, &cfg(2000)).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn constant_rotation_finds_nothing() {
        let spec = ProcessSpec {
            kind: ProcessKind::RotationDriven {
                q: RotationNumber::golden(),
                theta0: None,
                boundary: BoundaryFn::Constant { value: Complex64::new(1.0, 0.0) },
            },
            bound: 1.0,
            seed: 3,
        };
        let report = certificate_rate_experiment(&spec, 3, &cfg(500)).unwrap();
        assert_eq!(report.hits, 0);
    }

    #[test]
    fn constant_iid_is_refused() {
        let spec = ProcessSpec {
            kind: ProcessKind::Iid {
                support: vec![Atom { value: Complex64::new(1.0, 0.0), prob: 1.0 }],
            },
            bound: 1.0,
            seed: 0,
        };
        assert!(certificate_rate_experiment(&spec, 3, &cfg(500)).is_err());
    }
}
