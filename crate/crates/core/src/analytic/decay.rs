//! Decision rule for two-sided sequences decaying exponentially on one side:
//! such a sequence can only be reflectionless if it vanishes identically.

use crate::error::{precondition, Error, Result};
use crate::sequence::TwoSidedWindow;
use serde::{Deserialize, Serialize};

/// Side carrying the decay hypothesis: `n >= 1` or `n <= -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecaySide {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum DecayOutcome {
    NotReflectionless { witness: i64 },
    ConsistentWithZero,
}

/// Checks `|b_n| <= C·e^{-D|n|}` on the claimed side, then reports the first
/// index (ascending) with `|b_n| >= delta`.
pub fn decay_rule_check(
    window: &TwoSidedWindow,
    side: DecaySide,
    c: f64,
    d: f64,
    delta: f64,
) -> Result<DecayOutcome> {
    precondition(c > 0.0 && d > 0.0, || "decay constants must be positive".into())?;
    precondition(delta > 0.0, || "delta must be positive".into())?;
    let w = window.radius as i64;
    let on_side = |n: i64| match side {
        DecaySide::Positive => n >= 1,
        DecaySide::Negative => n <= -1,
    };
    // the envelope is compared with a relative slack of a few ulps so that
    // values computed as exactly C·e^{-Dn} are not rejected by rounding
    let violations: Vec<i64> = (-w..=w)
        .filter(|&n| on_side(n))
        .filter(|&n| {
            let envelope = c * (-d * n.unsigned_abs() as f64).exp();
            window.get(n).norm() > envelope * (1.0 + 8.0 * f64::EPSILON)
        })
        .collect();
    if !violations.is_empty() {
        return Err(Error::DecayViolated {
            indices: violations,
        });
    }
    Ok((-w..=w)
        .find(|&n| window.get(n).norm() >= delta)
        .map_or(DecayOutcome::ConsistentWithZero, |witness| {
            DecayOutcome::NotReflectionless { witness }
        }))
}
