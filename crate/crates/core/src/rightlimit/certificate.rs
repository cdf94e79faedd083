//! Non-reflectionless certificates.
//!
//! A *gap* certificate lists centers `n_j` whose backward flank is (nearly)
//! zero while `|a_{n_j}|` stays away from zero: any right limit along them has
//! `f_- ≡ 0` but `f_+(0) ≠ 0`. A *pair* certificate lists pairs `(n_j, m_j)`
//! whose one-sided flanks agree while the centers differ: two right limits
//! that coincide on a half-line but not at the origin cannot both be
//! reflectionless.

use super::{Decay, Materialized, SearchConfig};
use crate::error::{precondition, Result};
use crate::sequence::OneSidedSequence;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{DefaultHasher, Hash, Hasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    GapZeroFlank,
    PairMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlankSide {
    Backward,
    Forward,
}

/// Inclusive range of window offsets compared on one side of the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flank {
    pub side: FlankSide,
    pub from: i64,
    pub to: i64,
}

impl Flank {
    pub fn new(side: FlankSide, width: usize) -> Self {
        let w = width as i64;
        match side {
            FlankSide::Backward => Flank { side, from: -w, to: -1 },
            FlankSide::Forward => Flank { side, from: 1, to: w },
        }
    }

    pub fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        self.from..=self.to
    }

    fn width(&self) -> usize {
        (self.to - self.from + 1) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonReflectionlessCertificate {
    pub kind: CertificateKind,
    /// `(n_j, m_j)` with `n_j < m_j`, for pair certificates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(u64, u64)>,
    /// Centers `n_j`, for gap certificates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hits: Vec<u64>,
    pub flank: Flank,
    pub eps: f64,
    /// Required center separation.
    pub delta: f64,
    /// Smallest center separation among the witnesses.
    pub separation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<Decay>,
    pub min_recurrence: usize,
    pub horizon: u64,
    /// Set when the witness cap or comparison budget stopped the scan early.
    pub truncated: bool,
}

impl NonReflectionlessCertificate {
    /// Number of witnesses (hits or pairs).
    pub fn len(&self) -> usize {
        match self.kind {
            CertificateKind::GapZeroFlank => self.hits.len(),
            CertificateKind::PairMismatch => self.pairs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Re-checks every witness against freshly evaluated coefficients.
    pub fn verify(&self, seq: &OneSidedSequence) -> std::result::Result<(), String> {
        if self.delta <= 2.0 * self.eps {
            return Err(format!("delta {} not above 2·eps {}", self.delta, 2.0 * self.eps));
        }
        if self.len() < self.min_recurrence {
            return Err(format!(
                "{} witnesses, fewer than min_recurrence {}",
                self.len(),
                self.min_recurrence
            ));
        }
        let at = |n: u64, k: i64| -> std::result::Result<Complex64, String> {
            let idx = n as i64 + k;
            if idx < 0 {
                Err(format!("offset {k} from {n} is negative"))
            } else {
                Ok(seq.eval(idx as u64))
            }
        };
        match self.kind {
            CertificateKind::GapZeroFlank => {
                if self.hits.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("hits not strictly increasing".into());
                }
                for &n in &self.hits {
                    let center = seq.eval(n).norm();
                    if center < self.delta {
                        return Err(format!("|a_{n}| = {center} below delta"));
                    }
                    for k in self.flank.offsets() {
                        let allowed = flank_allowance(self.eps, self.decay, k);
                        let v = at(n, k)?.norm();
                        if v > allowed {
                            return Err(format!("|a_({n}{k:+})| = {v} exceeds {allowed}"));
                        }
                    }
                }
            }
            CertificateKind::PairMismatch => {
                if self.pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err("pair leading indices not strictly increasing".into());
                }
                let mut seen = HashSet::new();
                for &(n, m) in &self.pairs {
                    if n >= m {
                        return Err(format!("pair ({n}, {m}) not ordered"));
                    }
                    if !seen.insert(n) || !seen.insert(m) {
                        return Err(format!("pair ({n}, {m}) reuses an index"));
                    }
                    let sep = (seq.eval(n) - seq.eval(m)).norm();
                    if sep < self.delta {
                        return Err(format!("centers of ({n}, {m}) differ by only {sep}"));
                    }
                    for k in self.flank.offsets() {
                        let d = (at(n, k)? - at(m, k)?).norm();
                        if d > self.eps {
                            return Err(format!("flanks of ({n}, {m}) differ by {d} at {k}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn flank_allowance(eps: f64, decay: Option<Decay>, k: i64) -> f64 {
    match decay {
        Some(Decay { c, d }) => c * (-d * k.unsigned_abs() as f64).exp() + eps,
        None => eps,
    }
}

/// Scans `n ∈ [W, horizon]` for centers with a (near-)zero backward flank and
/// `|a_n| >= delta`.
pub fn find_gap_certificate(
    seq: &OneSidedSequence,
    cfg: &SearchConfig,
) -> Result<Option<NonReflectionlessCertificate>> {
    cfg.check_separation()?;
    let w = cfg.window;
    precondition(w >= 1, || "window must be at least 1".into())?;
    precondition(cfg.horizon >= w as u64, || {
        format!("horizon {} smaller than window {w}", cfg.horizon)
    })?;
    if let Some(Decay { c, d }) = cfg.decay {
        precondition(c > 0.0 && d > 0.0, || "decay constants must be positive".into())?;
    }
    let data = Materialized::new(seq, cfg.horizon + 1)?;
    let v = &data.values;
    let flank = Flank::new(super::FlankSide::Backward, w);
    let allowance: Vec<f64> = flank
        .offsets()
        .map(|k| flank_allowance(cfg.eps, cfg.decay, k))
        .collect();

    let is_hit = |n: usize| {
        v[n].norm() >= cfg.delta
            && allowance
                .iter()
                .zip(&v[n - w..n])
                .all(|(&a, x)| x.norm() <= a)
    };
    let mut hits: Vec<u64> = (w..v.len())
        .into_par_iter()
        .with_min_len(4096)
        .filter(|&n| is_hit(n))
        .map(|n| n as u64)
        .collect();
    let truncated = hits.len() > cfg.max_witnesses;
    hits.truncate(cfg.max_witnesses);
    if hits.len() < cfg.min_recurrence {
        return Ok(None);
    }
    let separation = hits
        .iter()
        .map(|&n| v[n as usize].norm())
        .fold(f64::INFINITY, f64::min);
    Ok(Some(NonReflectionlessCertificate {
        kind: CertificateKind::GapZeroFlank,
        pairs: Vec::new(),
        hits,
        flank,
        eps: cfg.eps,
        delta: cfg.delta,
        separation,
        decay: cfg.decay,
        min_recurrence: cfg.min_recurrence,
        horizon: cfg.horizon,
        truncated,
    }))
}

/// Hash buckets of flank vectors, sub-indexed by the center value so that
/// centers too close to the query can be skipped wholesale.
struct FlankIndex<'a> {
    values: &'a [Complex64],
    flank: Flank,
    eps: f64,
    delta: f64,
    real: bool,
    key_dims: usize,
    center_width: f64,
    buckets: HashMap<u64, BTreeMap<i64, Vec<u64>>>,
    comparisons: u64,
}

const MAX_KEY_DIMS: usize = 6;

impl<'a> FlankIndex<'a> {
    fn new(data: &'a Materialized, flank: Flank, eps: f64, delta: f64) -> Self {
        FlankIndex {
            values: &data.values,
            flank,
            eps,
            delta,
            real: data.real,
            key_dims: flank.width().min(MAX_KEY_DIMS),
            center_width: delta / 4.0,
            buckets: HashMap::new(),
            comparisons: 0,
        }
    }

    fn flank_values(&self, x: u64) -> &[Complex64] {
        let start = (x as i64 + self.flank.from) as usize;
        &self.values[start..start + self.flank.width()]
    }

    /// Grid cells of the flank coordinates nearest the center.
    fn cells(&self, x: u64) -> Vec<i64> {
        let f = self.flank_values(x);
        let near: Box<dyn Iterator<Item = &Complex64>> = match self.flank.side {
            super::FlankSide::Backward => Box::new(f.iter().rev()),
            super::FlankSide::Forward => Box::new(f.iter()),
        };
        near.take(self.key_dims)
            .map(|v| (v.re / self.eps).floor() as i64)
            .collect()
    }

    fn hash_cells(cells: &[i64]) -> u64 {
        let mut h = DefaultHasher::new();
        cells.hash(&mut h);
        h.finish()
    }

    fn key(&self, x: u64) -> u64 {
        if self.eps == 0.0 {
            let mut h = DefaultHasher::new();
            for v in self.flank_values(x) {
                // +0.0 folds -0.0 into 0.0
                ((v.re + 0.0).to_bits(), (v.im + 0.0).to_bits()).hash(&mut h);
            }
            h.finish()
        } else {
            Self::hash_cells(&self.cells(x))
        }
    }

    /// Keys of every bucket that can hold a flank within `eps` of `x`'s.
    fn neighbor_keys(&self, x: u64) -> Vec<u64> {
        if self.eps == 0.0 {
            return vec![self.key(x)];
        }
        let base = self.cells(x);
        let dims = base.len();
        let total = 3usize.pow(dims as u32);
        let mut keys = Vec::with_capacity(total);
        let mut cells = base.clone();
        for combo in 0..total {
            let mut c = combo;
            for (i, cell) in cells.iter_mut().enumerate() {
                *cell = base[i] + (c % 3) as i64 - 1;
                c /= 3;
            }
            keys.push(Self::hash_cells(&cells));
        }
        keys
    }

    fn center_cell(&self, v: Complex64) -> i64 {
        (v.re / self.center_width).floor() as i64
    }

    /// True when every real value in the cell is closer than `delta` to `re`.
    fn cell_too_close(&self, cell: i64, re: f64) -> bool {
        if !self.real {
            return false;
        }
        let lo = cell as f64 * self.center_width;
        let hi = lo + self.center_width;
        let far = (lo - re).abs().max((hi - re).abs());
        far < self.delta * (1.0 - 1e-12)
    }

    fn insert(&mut self, x: u64) {
        let key = self.key(x);
        let cell = self.center_cell(self.values[x as usize]);
        self.buckets
            .entry(key)
            .or_default()
            .entry(cell)
            .or_default()
            .push(x);
    }

    fn qualifies(&mut self, n: u64, m: u64) -> bool {
        self.comparisons += 1;
        let v = self.values;
        if (v[n as usize] - v[m as usize]).norm() < self.delta {
            return false;
        }
        let fm = self.flank_values(m);
        self.flank_values(n)
            .iter()
            .zip(fm)
            .all(|(a, b)| (a - b).norm() <= self.eps)
    }

    /// Calls `visit` on earlier indices that may pair with `m`, bucket by
    /// bucket, each bucket's list in ascending order starting after `after`.
    /// `visit` returns false to stop the current list.
    fn candidates(&self, m: u64, after: Option<u64>, mut visit: impl FnMut(u64) -> bool) {
        let am = self.values[m as usize];
        for key in self.neighbor_keys(m) {
            let Some(bucket) = self.buckets.get(&key) else {
                continue;
            };
            for (&cell, list) in bucket {
                if self.cell_too_close(cell, am.re) {
                    continue;
                }
                let from = after.map_or(0, |a| list.partition_point(|&n| n <= a));
                for &n in &list[from..] {
                    if !visit(n) {
                        break;
                    }
                }
            }
        }
    }
}

fn scan_range(side: FlankSide, w: usize, horizon: u64) -> std::ops::RangeInclusive<u64> {
    match side {
        FlankSide::Backward => w as u64..=horizon,
        FlankSide::Forward => 0..=horizon,
    }
}

fn check_pair_preconditions(seq: &OneSidedSequence, cfg: &SearchConfig) -> Result<Materialized> {
    cfg.check_separation()?;
    precondition(cfg.window >= 1, || "window must be at least 1".into())?;
    // forward flanks read up to horizon + W
    Materialized::new(seq, cfg.horizon + cfg.window as u64 + 1)
}

/// Greedy, prefix-stable pair search: for each `m` in ascending order take the
/// smallest unused `n < m`, larger than the previous pair's `n`, whose flank
/// agrees with `m`'s within `eps` and whose center differs by at least
/// `delta`.
pub fn find_pair_certificate(
    seq: &OneSidedSequence,
    cfg: &SearchConfig,
    side: FlankSide,
) -> Result<Option<NonReflectionlessCertificate>> {
    let data = check_pair_preconditions(seq, cfg)?;
    let flank = Flank::new(side, cfg.window);
    let mut index = FlankIndex::new(&data, flank, cfg.eps, cfg.delta);
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut used: HashSet<u64> = HashSet::new();
    let mut truncated = false;

    for m in scan_range(side, cfg.window, cfg.horizon) {
        if pairs.len() >= cfg.max_witnesses {
            truncated = true;
            break;
        }
        if index.comparisons > cfg.comparison_budget {
            truncated = true;
            break;
        }
        let after = pairs.last().map(|p| p.0);
        let mut tried = Vec::new();
        let mut best: Option<u64> = None;
        index.candidates(m, after, |n| {
            if best.is_some_and(|b| n >= b) {
                return false;
            }
            if used.contains(&n) {
                return true;
            }
            tried.push(n);
            true
        });
        // candidate lists are gathered first so `qualifies` can borrow mutably
        tried.sort_unstable();
        for n in tried {
            if index.qualifies(n, m) {
                best = Some(n);
                break;
            }
        }
        if let Some(n) = best {
            pairs.push((n, m));
            used.insert(n);
            used.insert(m);
        }
        index.insert(m);
    }

    if pairs.len() < cfg.min_recurrence {
        return Ok(None);
    }
    let separation = pairs
        .iter()
        .map(|&(n, m)| (data.values[n as usize] - data.values[m as usize]).norm())
        .fold(f64::INFINITY, f64::min);
    Ok(Some(NonReflectionlessCertificate {
        kind: CertificateKind::PairMismatch,
        pairs,
        hits: Vec::new(),
        flank,
        eps: cfg.eps,
        delta: cfg.delta,
        separation,
        decay: None,
        min_recurrence: cfg.min_recurrence,
        horizon: cfg.horizon,
        truncated,
    }))
}

/// Every qualifying pair `(n, m)`, `n < m <= horizon`, ordered by `m` then
/// `n`, up to `max_pairs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEnumeration {
    pub pairs: Vec<(u64, u64)>,
    pub truncated: bool,
}

pub fn enumerate_pair_witnesses(
    seq: &OneSidedSequence,
    cfg: &SearchConfig,
    side: FlankSide,
    max_pairs: usize,
) -> Result<PairEnumeration> {
    let data = check_pair_preconditions(seq, cfg)?;
    let flank = Flank::new(side, cfg.window);
    let mut index = FlankIndex::new(&data, flank, cfg.eps, cfg.delta);
    let mut pairs = Vec::new();
    let mut truncated = false;
    'scan: for m in scan_range(side, cfg.window, cfg.horizon) {
        let mut cands = Vec::new();
        index.candidates(m, None, |n| {
            cands.push(n);
            true
        });
        cands.sort_unstable();
        for n in cands {
            if index.qualifies(n, m) {
                if pairs.len() == max_pairs || index.comparisons > cfg.comparison_budget {
                    truncated = true;
                    break 'scan;
                }
                pairs.push((n, m));
            }
        }
        index.insert(m);
    }
    Ok(PairEnumeration { pairs, truncated })
}
