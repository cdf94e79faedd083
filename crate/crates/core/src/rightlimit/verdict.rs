use super::{
    detect_eventual_periodicity, find_gap_certificate, find_pair_certificate, szego_block_analysis,
    FlankSide, NonReflectionlessCertificate, SearchConfig, SzegoOverall, SzegoReport,
};
use crate::analytic::{eventually_periodic_form, RationalForm};
use crate::error::{Error, Result};
use crate::sequence::OneSidedSequence;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evidence {
    Certificate(NonReflectionlessCertificate),
    Szego(SzegoReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    StrongNaturalBoundaryEvidence {
        evidence: Evidence,
    },
    /// Reserved for evidence of a natural boundary that does not also bear
    /// on the strong form; the current pipeline never produces it.
    NaturalBoundaryEvidence {
        evidence: Evidence,
    },
    /// Verified on `a_0 .. a_horizon` within `tol`.
    EventuallyPeriodic {
        preperiod: u64,
        period: u64,
        horizon: u64,
        tol: f64,
        rational_form: RationalForm,
    },
    Inconclusive {
        reason: String,
        probes: Vec<String>,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::StrongNaturalBoundaryEvidence { .. } => "StrongNaturalBoundaryEvidence",
            Verdict::NaturalBoundaryEvidence { .. } => "NaturalBoundaryEvidence",
            Verdict::EventuallyPeriodic { .. } => "EventuallyPeriodic",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    /// Re-checks the embedded evidence against freshly evaluated coefficients.
    pub fn verify(&self, seq: &OneSidedSequence) -> std::result::Result<(), String> {
        match self {
            Verdict::StrongNaturalBoundaryEvidence { evidence }
            | Verdict::NaturalBoundaryEvidence { evidence } => match evidence {
                Evidence::Certificate(cert) => cert.verify(seq),
                Evidence::Szego(report) => report.verify(seq),
            },
            Verdict::EventuallyPeriodic {
                preperiod,
                period,
                horizon,
                tol,
                ..
            } => {
                for n in *preperiod..=horizon.saturating_sub(*period) {
                    let d = (seq.eval(n + period) - seq.eval(n)).norm();
                    if d > *tol {
                        return Err(format!("a_{} and a_{n} differ by {d}", n + period));
                    }
                }
                Ok(())
            }
            Verdict::Inconclusive { .. } => Ok(()),
        }
    }
}

/// Periodicity, then gap certificate, then pair certificates (backward,
/// forward), then the block analysis for exact finite-valued inputs.
pub fn verdict(seq: &OneSidedSequence, cfg: &SearchConfig) -> Result<Verdict> {
    let mut probes = Vec::new();

    probes.push("periodicity".to_string());
    if let Some((preperiod, period)) = detect_eventual_periodicity(
        seq,
        cfg.max_period,
        cfg.max_preperiod,
        cfg.horizon,
        cfg.periodicity_tol,
    )? {
        let values = seq.prefix(preperiod + period);
        return Ok(Verdict::EventuallyPeriodic {
            preperiod,
            period,
            horizon: cfg.horizon,
            tol: cfg.periodicity_tol,
            rational_form: eventually_periodic_form(&values, preperiod, period)?,
        });
    }

    probes.push("gap-certificate".to_string());
    if let Some(cert) = find_gap_certificate(seq, cfg)? {
        return Ok(strong(Evidence::Certificate(cert)));
    }
    for side in [FlankSide::Backward, FlankSide::Forward] {
        probes.push(format!("pair-certificate-{}", side_name(side)));
        if let Some(cert) = find_pair_certificate(seq, cfg, side)? {
            return Ok(strong(Evidence::Certificate(cert)));
        }
    }

    if seq.value_kind().is_exact() {
        probes.push("szego".to_string());
        match szego_block_analysis(seq, cfg) {
            Ok(report) if report.overall == SzegoOverall::MismatchAtEveryP => {
                return Ok(strong(Evidence::Szego(report)));
            }
            Ok(_) => {}
            // more distinct values than the block analysis handles
            Err(Error::NotFiniteValued(_)) => probes.push("szego-skipped-alphabet".to_string()),
            Err(e) => return Err(e),
        }
    }

    Ok(Verdict::Inconclusive {
        reason: format!(
            "no periodicity, certificate or block mismatch found up to horizon {}",
            cfg.horizon
        ),
        probes,
    })
}

fn strong(evidence: Evidence) -> Verdict {
    Verdict::StrongNaturalBoundaryEvidence { evidence }
}

fn side_name(side: FlankSide) -> &'static str {
    match side {
        FlankSide::Backward => "backward",
        FlankSide::Forward => "forward",
    }
}
