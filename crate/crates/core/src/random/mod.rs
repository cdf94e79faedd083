//! Seeded random coefficient sequences and the experiments built on them.

mod montecarlo;
mod separation;
mod variance;

pub use montecarlo::{certificate_rate_experiment, MonteCarloReport, TrialRecord};
pub use separation::{empirical_distribution, separated_values, Separation};
pub use variance::{sample_variance, variance_window, VarianceEstimate};

use crate::error::{Error, Result};
use crate::sequence::{rotation_point, BoundaryFn, OneSidedSequence, RotationNumber, SequenceOrigin};
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One value of a discrete distribution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: Complex64,
    pub prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProcessKind {
    /// Independent draws from a finite distribution.
    Iid { support: Vec<Atom> },
    /// A Markov chain emitting `emissions[state]`; starts in state 0 unless
    /// an initial distribution is given.
    Markov {
        transition: Vec<Vec<f64>>,
        emissions: Vec<Complex64>,
        #[serde(default)]
        initial: Option<Vec<f64>>,
    },
    /// `boundary(frac(nq + θ₀))`, with `θ₀` drawn from the seed when absent.
    RotationDriven {
        q: RotationNumber,
        #[serde(default)]
        theta0: Option<f64>,
        boundary: BoundaryFn,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    #[serde(flatten)]
    pub kind: ProcessKind,
    /// Almost-sure bound `K` on every value.
    pub bound: f64,
    pub seed: u64,
}

const ROW_TOL: f64 = 1e-12;

fn check_distribution(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidSpec(format!("{what} is empty")));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidSpec(format!("{what} has a negative or non-finite entry")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > ROW_TOL {
        return Err(Error::InvalidSpec(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

fn check_bounded(values: &[Complex64], bound: f64) -> Result<()> {
    match values.iter().find(|v| !(v.norm() <= bound)) {
        Some(v) => Err(Error::InvalidSpec(format!("value {v} exceeds the bound {bound}"))),
        None => Ok(()),
    }
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.bound >= 0.0 && self.bound.is_finite()) {
            return Err(Error::InvalidSpec(format!("bad bound {}", self.bound)));
        }
        match &self.kind {
            ProcessKind::Iid { support } => {
                let probs: Vec<f64> = support.iter().map(|a| a.prob).collect();
                check_distribution(&probs, "iid support")?;
                let values: Vec<Complex64> = support.iter().map(|a| a.value).collect();
                check_bounded(&values, self.bound)
            }
            ProcessKind::Markov {
                transition,
                emissions,
                initial,
            } => {
                let n = emissions.len();
                if n == 0 || transition.len() != n || transition.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidSpec(format!(
                        "transition matrix must be {n}×{n} to match the emissions"
                    )));
                }
                for (i, row) in transition.iter().enumerate() {
                    check_distribution(row, &format!("transition row {i}"))?;
                }
                if let Some(init) = initial {
                    if init.len() != n {
                        return Err(Error::InvalidSpec("initial distribution has the wrong length".into()));
                    }
                    check_distribution(init, "initial distribution")?;
                }
                check_bounded(emissions, self.bound)
            }
            ProcessKind::RotationDriven { q, theta0, boundary } => {
                q.validate_irrational()?;
                boundary.validate()?;
                if theta0.is_some_and(|t| !t.is_finite()) {
                    return Err(Error::InvalidSpec("theta0 is not finite".into()));
                }
                if boundary.sup_norm() > self.bound {
                    return Err(Error::InvalidSpec(format!(
                        "boundary function reaches {}, above the bound {}",
                        boundary.sup_norm(),
                        self.bound
                    )));
                }
                Ok(())
            }
        }
    }

    /// The same process with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        ProcessSpec {
            seed,
            ..self.clone()
        }
    }

    /// Exact variance `E|a|² - |E a|²` of a single draw, for iid processes.
    pub fn iid_variance(&self) -> Option<f64> {
        match &self.kind {
            ProcessKind::Iid { support } => {
                let mean: Complex64 = support.iter().map(|a| a.value * a.prob).sum();
                let second: f64 = support.iter().map(|a| a.value.norm_sqr() * a.prob).sum();
                Some((second - mean.norm_sqr()).max(0.0))
            }
            _ => None,
        }
    }
}

/// Seed of the `index`-th derived stream of `seed`; independent of how many
/// other streams are drawn or in which order.
pub fn derived_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

fn weighted(probs: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(probs).map_err(|e| Error::InvalidSpec(format!("bad weights: {e}")))
}

/// Draws `a_0 .. a_{length-1}`; a pure function of `(spec, length)`.
pub fn sample_process(spec: &ProcessSpec, length: u64) -> Result<OneSidedSequence> {
    spec.validate()?;
    if length == 0 {
        return Err(Error::Precondition("sample length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values: Vec<Complex64> = match &spec.kind {
        ProcessKind::Iid { support } => {
            let probs: Vec<f64> = support.iter().map(|a| a.prob).collect();
            let pick = weighted(&probs)?;
            (0..length).map(|_| support[pick.sample(&mut rng)].value).collect()
        }
        ProcessKind::Markov {
            transition,
            emissions,
            initial,
        } => {
            let rows = transition
                .iter()
                .map(|row| weighted(row))
                .collect::<Result<Vec<_>>>()?;
            let mut state = match initial {
                Some(init) => weighted(init)?.sample(&mut rng),
                None => 0,
            };
            let mut out = Vec::with_capacity(length as usize);
            for _ in 0..length {
                out.push(emissions[state]);
                state = rows[state].sample(&mut rng);
            }
            out
        }
        ProcessKind::RotationDriven { q, theta0, boundary } => {
            let theta = theta0.unwrap_or_else(|| rng.random::<f64>());
            (0..length)
                .map(|n| boundary.eval(rotation_point(n, q, theta)))
                .collect()
        }
    };
    Ok(OneSidedSequence::from_table_with_bound(
        values,
        spec.bound,
        SequenceOrigin::Sampled {
            process: spec.clone(),
            length,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bernoulli(seed: u64) -> ProcessSpec {
        ProcessSpec {
            kind: ProcessKind::Iid {
                support: vec![
                    Atom { value: Complex64::new(0.0, 0.0), prob: 0.5 },
                    Atom { value: Complex64::new(1.0, 0.0), prob: 0.5 },
                ],
            },
            bound: 1.0,
            seed,
        }
    }

    #[test]
    fn seeded_paths_repeat_and_differ() {
        let a = sample_process(&bernoulli(42), 1000).unwrap();
        let b = sample_process(&bernoulli(42), 1000).unwrap();
        assert_eq!(a.prefix(1000), b.prefix(1000));
        let c = sample_process(&bernoulli(43), 1000).unwrap();
        assert!((0..100).any(|n| a.eval(n) != c.eval(n)));
        assert!(a.prefix(1000).iter().all(|v| v.norm() <= 1.0));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut bad = bernoulli(1);
        bad.bound = 0.5;
        assert!(sample_process(&bad, 10).is_err());
        let skew = ProcessSpec {
            kind: ProcessKind::Markov {
                transition: vec![vec![0.5, 0.6], vec![1.0, 0.0]],
                emissions: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
                initial: None,
            },
            bound: 1.0,
            seed: 0,
        };
        assert!(sample_process(&skew, 10).is_err());
        assert!(sample_process(&bernoulli(1), 0).is_err());
    }

    #[test]
    fn markov_chain_follows_its_transitions() {
        // deterministic alternation
        let spec = ProcessSpec {
            kind: ProcessKind::Markov {
                transition: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                emissions: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
                initial: None,
            },
            bound: 1.0,
            seed: 7,
        };
        let s = sample_process(&spec, 6).unwrap();
        let re: Vec<f64> = s.prefix(6).iter().map(|v| v.re).collect();
        assert_eq!(re, vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn rotation_driven_draws_its_phase_from_the_seed() {
        let spec = |seed| ProcessSpec {
            kind: ProcessKind::RotationDriven {
                q: RotationNumber::golden(),
                theta0: None,
                boundary: BoundaryFn::FractionalPart,
            },
            bound: 1.0,
            seed,
        };
        let a = sample_process(&spec(1), 10).unwrap();
        let b = sample_process(&spec(1), 10).unwrap();
        let c = sample_process(&spec(2), 10).unwrap();
        assert_eq!(a.prefix(10), b.prefix(10));
        assert_ne!(a.prefix(10), c.prefix(10));
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|i| derived_seed(42, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert_eq!(derived_seed(42, 5), derived_seed(42, 5));
    }
}
