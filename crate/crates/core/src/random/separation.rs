//! Constructive version of the separated-values lemma: cover the disk
//! `|z| <= K` by disks of radius `1/m` centred on a hexagonal lattice, take
//! the heaviest disk's centre as `z`, then the heaviest centre at distance
//! at least `sqrt(σ/2)` from `z` as `w`.

use crate::error::{precondition, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Separation {
    Separated {
        z: Complex64,
        w: Complex64,
        prob_z: f64,
        prob_w: f64,
        /// `|z - w|`.
        separation: f64,
        /// `sqrt(σ/2)`.
        threshold: f64,
        /// Radius parameter actually used, raised so `1/m <= sqrt(σ/2)`.
        m: u64,
        /// Number `N_m` of cover disks.
        cover_size: usize,
        /// `σ / (8 K² N_m)`, the probability floor for `w`.
        k_tilde: f64,
    },
    NoSeparation {
        reason: String,
        cover_size: usize,
    },
}

/// Distinct values with their relative frequencies, in first-seen order.
pub fn empirical_distribution(samples: &[Complex64]) -> Vec<(Complex64, f64)> {
    let mut counts: BTreeMap<(u64, u64), (usize, Complex64, usize)> = BTreeMap::new();
    for (i, &x) in samples.iter().enumerate() {
        let key = ((x.re + 0.0).to_bits(), (x.im + 0.0).to_bits());
        counts.entry(key).or_insert((i, x, 0)).2 += 1;
    }
    let mut out: Vec<(usize, Complex64, usize)> = counts.into_values().collect();
    out.sort_by_key(|e| e.0);
    let n = samples.len() as f64;
    out.into_iter().map(|(_, x, c)| (x, c as f64 / n)).collect()
}

/// Hexagonal lattice points with spacing `1/m` within `K + 1/m` of the
/// origin, rows bottom to top, left to right within a row.
fn hex_cover(k: f64, m: u64) -> Vec<Complex64> {
    let s = 1.0 / m as f64;
    let reach = k + s;
    let dy = s * 3f64.sqrt() / 2.0;
    let rows = (reach / dy).ceil() as i64;
    let cols = (reach / s).ceil() as i64 + 1;
    let mut out = Vec::new();
    for j in -rows..=rows {
        let shift = if j.rem_euclid(2) == 1 { 0.5 } else { 0.0 };
        for i in -cols..=cols {
            let c = Complex64::new((i as f64 + shift) * s, j as f64 * dy);
            if c.norm() <= reach {
                out.push(c);
            }
        }
    }
    out
}

struct DiskMass {
    centre: Complex64,
    prob: f64,
    mean_dist: f64,
}

/// Runs the construction on a finite distribution of `(value, probability)`.
pub fn separated_values(dist: &[(Complex64, f64)], m: u64, sigma: f64) -> Result<Separation> {
    precondition(!dist.is_empty(), || "empty distribution".into())?;
    precondition(m >= 1, || "m must be at least 1".into())?;
    precondition(sigma >= 0.0 && sigma.is_finite(), || format!("bad sigma {sigma}"))?;
    let k = dist.iter().map(|d| d.0.norm()).fold(0.0, f64::max);
    let threshold = (sigma / 2.0).sqrt();
    let m = if sigma > 0.0 && 1.0 / (m as f64) > threshold {
        (1.0 / threshold).ceil() as u64
    } else {
        m
    };
    let radius = 1.0 / m as f64;
    let cover = hex_cover(k, m);
    let cover_size = cover.len();
    if sigma == 0.0 || k == 0.0 {
        return Ok(Separation::NoSeparation {
            reason: "variance is zero".into(),
            cover_size,
        });
    }
    let slack = 1e-12 * (1.0 + k);
    let masses: Vec<DiskMass> = cover
        .iter()
        .map(|&c| {
            let mut prob = 0.0;
            let mut dist_sum = 0.0;
            for &(x, p) in dist {
                let d = (x - c).norm();
                if d <= radius + slack {
                    prob += p;
                    dist_sum += p * d;
                }
            }
            DiskMass {
                centre: c,
                prob,
                mean_dist: if prob > 0.0 { dist_sum / prob } else { f64::INFINITY },
            }
        })
        .collect();
    // heaviest first, then the disk whose mass sits closest to its centre,
    // then enumeration order
    let better = |a: &DiskMass, b: &DiskMass| {
        a.prob > b.prob || (a.prob == b.prob && a.mean_dist < b.mean_dist)
    };
    let pick = |allowed: &dyn Fn(&DiskMass) -> bool| {
        masses
            .iter()
            .filter(|d| allowed(d))
            .fold(None::<&DiskMass>, |best, d| match best {
                Some(b) if !better(d, b) => Some(b),
                _ => Some(d),
            })
    };
    let zd = pick(&|_| true).expect("cover is nonempty");
    let k_m = 1.0 / cover_size as f64;
    debug_assert!(zd.prob >= k_m - 1e-12);
    let k_tilde = sigma / (8.0 * k * k * cover_size as f64);
    let z = zd.centre;
    match pick(&|d| (d.centre - z).norm() >= threshold) {
        Some(wd) if wd.prob >= k_tilde && wd.prob > 0.0 => Ok(Separation::Separated {
            z,
            w: wd.centre,
            prob_z: zd.prob,
            prob_w: wd.prob,
            separation: (wd.centre - z).norm(),
            threshold,
            m,
            cover_size,
            k_tilde,
        }),
        _ => Ok(Separation::NoSeparation {
            reason: format!("no disk at distance >= {threshold} carries probability {k_tilde}"),
            cover_size,
        }),
    }
}
