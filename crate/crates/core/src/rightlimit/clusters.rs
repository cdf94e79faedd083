//! Greedy leader clustering of the windows `a_{n-W} .. a_{n+W}`.

use super::{Materialized, SearchConfig};
use crate::error::{precondition, Result};
use crate::sequence::{OneSidedSequence, Provenance, TwoSidedWindow};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

const MAX_CLUSTERS: usize = 1_000_000;
const MAX_RECORDED_INDICES: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightLimitCandidate {
    /// The cluster leader's window.
    pub window: TwoSidedWindow,
    /// Member centers in ascending order, the first `1024` of them.
    pub recurrence_indices: Vec<u64>,
    pub population: u64,
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightLimitReport {
    pub candidates: Vec<RightLimitCandidate>,
    pub clusters_created: usize,
    /// Set when the cluster cap was hit; later unmatched windows were dropped.
    pub truncated: bool,
    pub window: usize,
    pub horizon: u64,
    pub eps: f64,
}

struct Cluster {
    leader: usize,
    population: u64,
    indices: Vec<u64>,
}

pub fn extract_right_limits(seq: &OneSidedSequence, cfg: &SearchConfig) -> Result<RightLimitReport> {
    let w = cfg.window;
    precondition(w >= 1, || "window must be at least 1".into())?;
    precondition(cfg.horizon >= 10 * w as u64, || {
        format!("horizon {} below 10·W = {}", cfg.horizon, 10 * w)
    })?;
    precondition(cfg.eps >= 0.0, || "eps must be nonnegative".into())?;
    let data = Materialized::new(seq, cfg.horizon + 1)?;
    let v = &data.values;
    let win = |n: usize| &v[n - w..=n + w];
    let eps = cfg.eps;

    let key_of = |cells: &[i64]| {
        let mut h = DefaultHasher::new();
        cells.hash(&mut h);
        h.finish()
    };
    let cells_of = |n: usize| -> [i64; 3] {
        [n - w, n, n + w].map(|i| (v[i].re / eps).floor() as i64)
    };
    let exact_key = |n: usize| {
        let mut h = DefaultHasher::new();
        for x in win(n) {
            ((x.re + 0.0).to_bits(), (x.im + 0.0).to_bits()).hash(&mut h);
        }
        h.finish()
    };
    let close = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).all(|(x, y)| (x - y).norm() <= eps);

    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut truncated = false;
    for n in w..=(cfg.horizon as usize - w) {
        let here = win(n);
        let mut found: Option<usize> = None;
        let mut consider = |ids: &Vec<usize>| {
            for &id in ids {
                if found.is_some_and(|f| id >= f) {
                    break;
                }
                if close(win(clusters[id].leader), here) {
                    found = Some(id);
                    break;
                }
            }
        };
        let own_key;
        if eps == 0.0 {
            own_key = exact_key(n);
            if let Some(ids) = buckets.get(&own_key) {
                consider(ids);
            }
        } else {
            let base = cells_of(n);
            own_key = key_of(&base);
            for combo in 0..27 {
                let mut cells = base;
                let mut c = combo;
                for cell in cells.iter_mut() {
                    *cell += (c % 3) as i64 - 1;
                    c /= 3;
                }
                if let Some(ids) = buckets.get(&key_of(&cells)) {
                    consider(ids);
                }
            }
        }
        let id = match found {
            Some(id) => id,
            None if clusters.len() < MAX_CLUSTERS => {
                clusters.push(Cluster {
                    leader: n,
                    population: 0,
                    indices: Vec::new(),
                });
                let id = clusters.len() - 1;
                buckets.entry(own_key).or_default().push(id);
                id
            }
            None => {
                truncated = true;
                continue;
            }
        };
        let cl = &mut clusters[id];
        cl.population += 1;
        if cl.indices.len() < MAX_RECORDED_INDICES {
            cl.indices.push(n as u64);
        }
    }

    let clusters_created = clusters.len();
    let mut order: Vec<usize> = (0..clusters.len())
        .filter(|&i| clusters[i].population >= cfg.min_recurrence as u64)
        .collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(clusters[i].population), i));
    order.truncate(cfg.max_candidates);
    let candidates = order
        .into_iter()
        .map(|i| {
            let cl = &clusters[i];
            Ok(RightLimitCandidate {
                window: TwoSidedWindow::from_values(
                    win(cl.leader).to_vec(),
                    Provenance::Cluster(cl.indices.clone()),
                    eps,
                )?,
                recurrence_indices: cl.indices.clone(),
                population: cl.population,
                eps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RightLimitReport {
        candidates,
        clusters_created,
        truncated,
        window: w,
        horizon: cfg.horizon,
        eps,
    })
}
