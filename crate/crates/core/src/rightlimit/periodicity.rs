use super::Materialized;
use crate::error::{precondition, Result};
use crate::sequence::OneSidedSequence;
use rayon::prelude::*;

/// Lexicographically least `(preperiod, period)` with
/// `|a_{n+period} - a_n| <= tol` for every `n` in `[preperiod, horizon - period]`.
pub fn detect_eventual_periodicity(
    seq: &OneSidedSequence,
    max_period: u64,
    max_preperiod: u64,
    horizon: u64,
    tol: f64,
) -> Result<Option<(u64, u64)>> {
    precondition(max_period >= 1, || "max_period must be at least 1".into())?;
    precondition(tol >= 0.0, || "tolerance must be nonnegative".into())?;
    precondition(horizon >= max_preperiod + 2 * max_period, || {
        format!(
            "horizon {horizon} below max_preperiod + 2·max_period = {}",
            max_preperiod + 2 * max_period
        )
    })?;
    let data = Materialized::new(seq, horizon + 1)?;
    let v = &data.values;
    Ok((1..=max_period)
        .into_par_iter()
        .filter_map(|t| {
            let t = t as usize;
            // the least admissible preperiod is one past the last violation
            let pre = (0..v.len() - t)
                .rev()
                .find(|&n| (v[n + t] - v[n]).norm() > tol)
                .map_or(0, |n| n as u64 + 1);
            (pre <= max_preperiod).then_some((pre, t as u64))
        })
        .min())
}
