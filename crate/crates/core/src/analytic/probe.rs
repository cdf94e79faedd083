//! The arc integral `I(r) = ∫_arc |f(re^{iθ})| dθ/2π` at midpoint nodes
//! `θ_j = α + (j+½)h`.
//!
//! Node values come from one of three routes that agree to rounding:
//! direct compensated summation for small problems, folding the
//! coefficients modulo `M` followed by one FFT on the full circle, and a
//! chunked chirp-z transform on proper arcs.

use super::{truncation_length, ArcSpec, TERM_CAP};
use crate::error::{precondition, Result};
use crate::numeric::{cis, reduced_angle, ComplexSum, KahanSum};
use crate::sequence::OneSidedSequence;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeConfig {
    /// Starting node count `M`; doubled until consecutive estimates agree.
    pub quad_points: usize,
    /// Per-node truncation tolerance.
    pub tol: f64,
    /// Relative agreement between the `M` and `2M` estimates that stops the
    /// doubling.
    pub refine_rtol: f64,
    pub max_nodes: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            quad_points: 256,
            tol: 1e-8,
            refine_rtol: 1e-3,
            max_nodes: 1 << 22,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeEntry {
    pub r: f64,
    pub integral: f64,
    /// `|I_2M - I_M|` plus a rounding allowance.
    pub quad_err: f64,
    /// Arc fraction times the geometric tail bound.
    pub trunc_err: f64,
    /// Node count of the reported estimate.
    pub nodes: usize,
    pub terms: u64,
    /// False when `max_nodes` stopped the doubling first.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedRadius {
    pub r: f64,
    pub reason: String,
}

/// Least-squares line `I ≈ slope·ln(1/(1-r)) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    /// `max |I - fit| / I` over the fitted radii.
    pub relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProbeReport {
    pub arc: ArcSpec,
    pub config: ProbeConfig,
    pub entries: Vec<ProbeEntry>,
    pub skipped: Vec<SkippedRadius>,
    pub growth_fit: Option<GrowthFit>,
}

impl BoundaryProbeReport {
    /// Plot-ready `r,integral,quad_err,trunc_err` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "integral", "quad_err", "trunc_err"])?;
        for e in &self.entries {
            w.write_record([e.r, e.integral, e.quad_err, e.trunc_err].map(|x| format!("{x:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Coefficient stream `c_n = a_n r^n`, skipping zeros.
fn weighted(seq: &OneSidedSequence, r: f64, n: u64) -> impl Iterator<Item = (u64, Complex64)> + '_ {
    let ln_r = r.ln();
    (0..n).filter_map(move |k| {
        let a = seq.eval(k);
        (a != Complex64::new(0.0, 0.0)).then(|| (k, a * (k as f64 * ln_r).exp()))
    })
}

/// Problems with at most this many term-node products are summed directly.
const DIRECT_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Route {
    Direct,
    Fold,
    Chirp,
}

pub(crate) fn choose_route(arc: &ArcSpec, terms: u64, nodes: usize) -> Route {
    if terms.saturating_mul(nodes as u64) <= DIRECT_LIMIT {
        Route::Direct
    } else if matches!(arc, ArcSpec::Full) {
        Route::Fold
    } else {
        Route::Chirp
    }
}

/// `f_N(re^{iθ_j})` for `j < nodes`, and `Σ |c_n|`.
pub(crate) fn node_values(
    seq: &OneSidedSequence,
    r: f64,
    terms: u64,
    arc: &ArcSpec,
    nodes: usize,
    route: Route,
) -> (Vec<Complex64>, f64) {
    let h = arc.width() / nodes as f64;
    let alpha = arc.start();
    match route {
        Route::Direct => {
            let coeffs: Vec<(u64, Complex64)> = weighted(seq, r, terms).collect();
            let abs = coeffs.iter().map(|c| c.1.norm()).sum();
            let vals = (0..nodes)
                .map(|j| {
                    let theta = alpha + (j as f64 + 0.5) * h;
                    let mut s = ComplexSum::default();
                    for &(n, c) in &coeffs {
                        s.add(c * cis(reduced_angle(n as f64, theta)));
                    }
                    s.value()
                })
                .collect();
            (vals, abs)
        }
        Route::Fold => {
            // θ_j = (j+½)·2π/M, so e^{inθ_j} = e^{2πi(n mod M)j/M}·e^{iπ(n mod 2M)/M}
            let m = nodes as u64;
            let mut folded = vec![ComplexSum::default(); nodes];
            let mut abs = 0.0;
            for (n, c) in weighted(seq, r, terms) {
                abs += c.norm();
                let half = cis(PI * (n % (2 * m)) as f64 / m as f64);
                folded[(n % m) as usize].add(c * half);
            }
            let mut buf: Vec<Complex64> = folded.iter().map(|s| s.value()).collect();
            FftPlanner::new().plan_fft_inverse(nodes).process(&mut buf);
            (buf, abs)
        }
        Route::Chirp => chirp(seq, r, terms, alpha, h, nodes),
    }
}

/// Chunked Bluestein evaluation of `Σ_n c_n e^{in(α + h/2)} e^{injh}`.
fn chirp(
    seq: &OneSidedSequence,
    r: f64,
    terms: u64,
    alpha: f64,
    h: f64,
    nodes: usize,
) -> (Vec<Complex64>, f64) {
    let len = (2 * nodes.max(4096)).next_power_of_two();
    let chunk = len - nodes + 1;
    let half_h = 0.5 * h;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    // kernel v_m = e^{-ih m²/2} for m in [-(chunk-1), nodes-1]
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for m in 0..nodes {
        kernel[m] = cis(-reduced_angle((m * m) as f64, half_h));
    }
    for m in 1..chunk {
        kernel[len - m] = cis(-reduced_angle((m * m) as f64, half_h));
    }
    fwd.process(&mut kernel);
    let post: Vec<Complex64> = (0..nodes)
        .map(|j| cis(reduced_angle((j * j) as f64, half_h)))
        .collect();

    let mut acc = vec![ComplexSum::default(); nodes];
    let mut abs = 0.0;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    let scale = 1.0 / len as f64;
    let mut stream = weighted(seq, r, terms).peekable();
    // each chunk starts at the next nonzero coefficient, so long runs of
    // zeros in lacunary sequences cost nothing
    while let Some(&(start, _)) = stream.peek() {
        let end = start + chunk as u64;
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        while let Some(&(n, c)) = stream.peek() {
            if n >= end {
                break;
            }
            stream.next();
            abs += c.norm();
            let t = (n - start) as f64;
            let phase = reduced_angle(n as f64, alpha + half_h) + reduced_angle(t * t, half_h);
            buf[(n - start) as usize] = c * cis(phase);
        }
        fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&kernel) {
            *b *= k * scale;
        }
        inv.process(&mut buf);
        for j in 0..nodes {
            let shift = cis(reduced_angle((start * j as u64) as f64, h));
            acc[j].add(buf[j] * post[j] * shift);
        }
    }
    (acc.iter().map(|s| s.value()).collect(), abs)
}

fn integral_at(
    seq: &OneSidedSequence,
    r: f64,
    terms: u64,
    arc: &ArcSpec,
    nodes: usize,
) -> (f64, f64) {
    let route = choose_route(arc, terms, nodes);
    let (vals, abs) = node_values(seq, r, terms, arc, nodes, route);
    let mut s = KahanSum::default();
    for v in &vals {
        s.add(v.norm());
    }
    let fraction = arc.width() / TAU;
    let integral = fraction * s.value() / nodes as f64;
    // transform rounding grows with log2 of the length
    let depth = (nodes.max(4096) as f64).log2() * 2.0 + 8.0;
    let rounding = fraction * 64.0 * depth * f64::EPSILON * abs;
    (integral, rounding)
}

fn probe_radius(
    seq: &OneSidedSequence,
    r: f64,
    arc: &ArcSpec,
    cfg: &ProbeConfig,
) -> std::result::Result<ProbeEntry, SkippedRadius> {
    let skip = |reason: String| SkippedRadius { r, reason };
    let terms = truncation_length(seq.bound(), r, cfg.tol).map_err(|e| skip(e.to_string()))?;
    if terms > TERM_CAP {
        return Err(skip(format!("needs {terms} terms, above the cap of {TERM_CAP}")));
    }
    let tail = seq.bound() * r.powf(terms as f64) / (1.0 - r);
    let mut m = cfg.quad_points;
    let (mut prev, _) = integral_at(seq, r, terms, arc, m);
    loop {
        let (next, rounding) = integral_at(seq, r, terms, arc, 2 * m);
        let diff = (next - prev).abs();
        let converged = diff <= cfg.refine_rtol * next;
        if converged || 4 * m > cfg.max_nodes {
            return Ok(ProbeEntry {
                r,
                integral: next,
                quad_err: diff + rounding,
                trunc_err: arc.width() / TAU * tail,
                nodes: 2 * m,
                terms,
                converged,
            });
        }
        m *= 2;
        prev = next;
    }
}

fn growth_fit(entries: &[ProbeEntry]) -> Option<GrowthFit> {
    if entries.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = entries.iter().map(|e| (1.0 / (1.0 - e.r)).ln()).collect();
    let ys: Vec<f64> = entries.iter().map(|e| e.integral).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let relative_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs() / y.abs())
        .fold(0.0, f64::max);
    Some(GrowthFit {
        slope,
        intercept,
        relative_residual,
    })
}

/// Scans `I(r)` over `radii`, each with adaptive node doubling.
pub fn boundary_l1_scan(
    seq: &OneSidedSequence,
    arc: &ArcSpec,
    radii: &[f64],
    cfg: &ProbeConfig,
) -> Result<BoundaryProbeReport> {
    precondition(!radii.is_empty(), || "no radii given".into())?;
    precondition(
        radii.iter().all(|&r| r > 0.0 && r <= 1.0 - 1e-6),
        || "radii must lie in (0, 1 - 1e-6]".into(),
    )?;
    precondition(radii.windows(2).all(|w| w[0] < w[1]), || {
        "radii must be strictly ascending".into()
    })?;
    precondition(cfg.quad_points >= 64, || "quad_points must be at least 64".into())?;
    precondition(cfg.tol > 0.0 && cfg.refine_rtol > 0.0, || {
        "tolerances must be positive".into()
    })?;
    precondition(cfg.max_nodes >= 2 * cfg.quad_points, || {
        "max_nodes must allow at least one doubling".into()
    })?;
    if let ArcSpec::Arc { alpha, beta } = *arc {
        ArcSpec::new(alpha, beta)?;
    }
    let results: Vec<_> = radii
        .par_iter()
        .map(|&r| probe_radius(seq, r, arc, cfg))
        .collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for res in results {
        match res {
            Ok(e) => entries.push(e),
            Err(s) => skipped.push(s),
        }
    }
    let growth_fit = growth_fit(&entries);
    Ok(BoundaryProbeReport {
        arc: *arc,
        config: cfg.clone(),
        entries,
        skipped,
        growth_fit,
    })
}
