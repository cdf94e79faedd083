use super::{OneSidedSequence, SequenceOrigin, Source, ValueKind};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of snapping a sequence with finitely many limit points onto them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapReport {
    /// Half the least pairwise distance between limit points.
    pub gamma: f64,
    /// First index from which `|a_n - c_n| <= gamma` holds through the
    /// horizon; `None` if the last scanned index still violates it.
    pub onset_index: Option<u64>,
    /// Indices whose two nearest limit points were within `onset_tol` of
    /// equidistant; resolved by enumeration order.
    pub ties: Vec<u64>,
    pub horizon: u64,
}

const MAX_RECORDED_TIES: usize = 1024;

/// Nearest target and the gap between the two smallest distances.
pub(crate) fn nearest(targets: &[Complex64], v: Complex64) -> (Complex64, f64) {
    let mut best = (0usize, f64::INFINITY);
    let mut second = f64::INFINITY;
    for (i, t) in targets.iter().enumerate() {
        let d = (v - t).norm();
        if d < best.1 {
            second = best.1;
            best = (i, d);
        } else if d < second {
            second = d;
        }
    }
    (targets[best.0], second - best.1)
}

/// Replaces every `a_n` by its nearest point of `targets` and reports from
/// which index on the replacement is within `gamma` of the original, scanning
/// `a_0 .. a_{horizon-1}`.
pub fn snap_to_limit_points(
    seq: &OneSidedSequence,
    targets: &[Complex64],
    onset_tol: f64,
    horizon: u64,
) -> Result<(OneSidedSequence, SnapReport)> {
    if targets.is_empty() {
        return Err(Error::Precondition("limit point set is empty".into()));
    }
    let mut min_dist = f64::INFINITY;
    for (i, a) in targets.iter().enumerate() {
        for b in &targets[i + 1..] {
            min_dist = min_dist.min((a - b).norm());
        }
    }
    if targets.len() > 1 && min_dist <= 2.0 * onset_tol {
        return Err(Error::Precondition(format!(
            "limit points are {min_dist} apart, not more than 2·onset_tol = {}",
            2.0 * onset_tol
        )));
    }
    seq.require_len(horizon)?;
    let gamma = if targets.len() > 1 { 0.5 * min_dist } else { f64::INFINITY };

    let mut onset_index = Some(0);
    let mut ties = Vec::new();
    for n in 0..horizon {
        let a = seq.eval(n);
        let (c, margin) = nearest(targets, a);
        if targets.len() > 1 && margin <= onset_tol && ties.len() < MAX_RECORDED_TIES {
            ties.push(n);
        }
        if (a - c).norm() > gamma {
            onset_index = Some(n + 1);
        }
    }
    if onset_index == Some(horizon) {
        onset_index = None;
    }

    let target_arc: std::sync::Arc<[Complex64]> = targets.to_vec().into();
    let bound = targets.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let value_kind = match ValueKind::infer(targets) {
        ValueKind::Float => ValueKind::Float,
        _ => ValueKind::ExactInteger,
    };
    let snapped = OneSidedSequence {
        source: Source::Snapped {
            inner: Box::new(seq.clone()),
            targets: target_arc,
        },
        bound,
        value_kind,
        origin: SequenceOrigin::Snapped {
            targets: targets.to_vec(),
        },
    };
    Ok((
        snapped,
        SnapReport {
            gamma,
            onset_index,
            ties,
            horizon,
        },
    ))
}
