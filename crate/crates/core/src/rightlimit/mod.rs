//! Finite-horizon search for right-limit structure.
//!
//! Right limits are limits of shifted copies `a_{n_j + k}` along `n_j → ∞`;
//! at a finite horizon the best one can do is exhibit windows that recur at
//! least `min_recurrence` times at strictly increasing centers. Everything
//! here is therefore *evidence*, with the exception of exact eventual
//! periodicity on exact-valued inputs, which is verified over the whole
//! horizon.

mod certificate;
mod clusters;
mod periodicity;
mod szego;
mod verdict;

pub use certificate::{
    enumerate_pair_witnesses, find_gap_certificate, find_pair_certificate, CertificateKind,
    Flank, FlankSide, NonReflectionlessCertificate, PairEnumeration,
};
pub use clusters::{extract_right_limits, RightLimitCandidate, RightLimitReport};
pub use periodicity::detect_eventual_periodicity;
pub use szego::{szego_block_analysis, SzegoEntry, SzegoOutcome, SzegoOverall, SzegoReport};
pub use verdict::{verdict, Evidence, Verdict};

use crate::error::{precondition, Result};
use crate::sequence::OneSidedSequence;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponential envelope `|a_{n+k}| <= C·e^{-D|k|}` allowed on a gap flank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

/// Knobs shared by the searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Flank / window radius `W`.
    pub window: usize,
    pub horizon: u64,
    pub eps: f64,
    pub delta: f64,
    pub min_recurrence: usize,
    pub max_candidates: usize,
    /// Cap on witnesses kept in a certificate; the list is always a prefix of
    /// the uncapped one.
    pub max_witnesses: usize,
    pub p_max: usize,
    pub max_period: u64,
    pub max_preperiod: u64,
    pub periodicity_tol: f64,
    /// Flank comparisons allowed before a pair search stops and flags itself
    /// as truncated.
    pub comparison_budget: u64,
    pub decay: Option<Decay>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            window: 5,
            horizon: 100_000,
            eps: 0.05,
            delta: 0.5,
            min_recurrence: 3,
            max_candidates: 16,
            max_witnesses: 256,
            p_max: 8,
            max_period: 64,
            max_preperiod: 64,
            periodicity_tol: 1e-12,
            comparison_budget: 500_000_000,
            decay: None,
        }
    }
}

impl SearchConfig {
    /// Defaults tuned to the sequence: exact inputs are compared exactly.
    pub fn for_sequence(seq: &OneSidedSequence) -> Self {
        let mut cfg = SearchConfig::default();
        if seq.value_kind().is_exact() {
            cfg.eps = 0.0;
            cfg.periodicity_tol = 0.0;
        }
        cfg
    }

    pub(crate) fn check_separation(&self) -> Result<()> {
        precondition(self.delta > 2.0 * self.eps && self.eps >= 0.0, || {
            format!(
                "need delta > 2·eps >= 0, got delta = {}, eps = {}",
                self.delta, self.eps
            )
        })?;
        precondition(self.min_recurrence >= 1, || "min_recurrence must be positive".into())
    }
}

/// Coefficients `a_0 .. a_{len-1}` plus whether all of them are real.
pub(crate) struct Materialized {
    pub values: Vec<Complex64>,
    pub real: bool,
}

impl Materialized {
    pub(crate) fn new(seq: &OneSidedSequence, len: u64) -> Result<Self> {
        seq.require_len(len)?;
        let values = seq.prefix(len);
        let real = values.iter().all(|v| v.im == 0.0);
        Ok(Materialized { values, real })
    }
}
