//! Certified evaluation of `f(z) = Σ a_n z^n`, its shifted pieces, two-sided
//! series, and the arc-integral probe.
//!
//! Every inside evaluation truncates at the least `N` with
//! `A·|z|^N/(1-|z|) <= tol`, and reports that geometric tail separately from
//! a floating-point rounding allowance.

mod decay;
mod exact;
mod probe;
mod rational;

pub use decay::{decay_rule_check, DecayOutcome, DecaySide};
pub use exact::{shift_identity_exact, ExactShift, GaussianRational};
pub use probe::{
    boundary_l1_scan, BoundaryProbeReport, GrowthFit, ProbeConfig, ProbeEntry, SkippedRadius,
};
pub use rational::{
    cyclotomic, eventually_periodic_form, periodic_reflectionless_check, CheckOutcome,
    RationalForm, ReflectionlessCheck, RootOfUnity,
};

use crate::error::{precondition, Error, Result};
use crate::numeric::{cis, reduced_angle, rounding_allowance, ComplexSum};
use crate::sequence::{OneSidedSequence, TwoSidedWindow};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Hard cap on terms in a single evaluation.
pub const TERM_CAP: u64 = 100_000_000;

/// Largest `|z|` accepted by the inside evaluators.
pub const MAX_INSIDE_RADIUS: f64 = 1.0 - 1e-9;

/// An arc `{e^{iθ} : alpha <= θ <= beta}` or the whole circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcSpec {
    Full,
    Arc { alpha: f64, beta: f64 },
}

impl ArcSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        precondition(alpha.is_finite() && beta.is_finite(), || "arc ends must be finite".into())?;
        precondition(alpha < beta && beta - alpha < TAU, || {
            format!("need alpha < beta < alpha + 2π, got ({alpha}, {beta})")
        })?;
        Ok(ArcSpec::Arc { alpha, beta })
    }

    pub fn start(&self) -> f64 {
        match *self {
            ArcSpec::Full => 0.0,
            ArcSpec::Arc { alpha, .. } => alpha,
        }
    }

    pub fn width(&self) -> f64 {
        match *self {
            ArcSpec::Full => TAU,
            ArcSpec::Arc { alpha, beta } => beta - alpha,
        }
    }

    /// Whether `e^{iθ}` lies on the closed arc, up to `slack` radians.
    pub fn contains(&self, theta: f64, slack: f64) -> bool {
        match *self {
            ArcSpec::Full => true,
            ArcSpec::Arc { alpha, beta } => {
                let off = (theta - alpha).rem_euclid(TAU);
                off <= beta - alpha + slack || off >= TAU - slack
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    /// Geometric tail bound of the truncated series.
    pub abs_error_bound: f64,
    pub terms_used: u64,
    /// Allowance for floating-point rounding in the partial sum.
    pub rounding_bound: f64,
}

impl EvalResult {
    pub fn total_error(&self) -> f64 {
        self.abs_error_bound + self.rounding_bound
    }
}

/// Least `N` with `A·r^N/(1-r) <= tol`.
pub fn truncation_length(bound: f64, r: f64, tol: f64) -> Result<u64> {
    precondition(r > 0.0 && r < 1.0, || format!("radius {r} outside (0, 1)"))?;
    precondition(tol > 0.0, || format!("tolerance {tol} must be positive"))?;
    precondition(bound >= 0.0 && bound.is_finite(), || format!("bad bound {bound}"))?;
    let tail = |n: f64| bound * r.powf(n) / (1.0 - r);
    if tail(0.0) <= tol {
        return Ok(0);
    }
    let guess = ((tol * (1.0 - r) / bound).ln() / r.ln()).ceil().max(0.0);
    let mut n = guess as u64;
    while tail(n as f64) > tol {
        n += 1;
    }
    while n > 0 && tail((n - 1) as f64) <= tol {
        n -= 1;
    }
    Ok(n)
}

fn capped(n: u64) -> Result<u64> {
    if n > TERM_CAP {
        Err(Error::TermCap {
            required: n,
            cap: TERM_CAP,
        })
    } else {
        Ok(n)
    }
}

/// `Σ_{j in range} coeff(j) z^{j - shift}` with compensated accumulation;
/// returns the sum and `Σ |terms|`.
fn power_sum(
    coeff: impl Fn(u64) -> Complex64,
    range: std::ops::Range<u64>,
    shift: u64,
    z: Complex64,
) -> (Complex64, f64) {
    let ln_r = z.norm().ln();
    let phi = z.arg();
    let mut sum = ComplexSum::default();
    let mut abs = 0.0;
    for j in range {
        let a = coeff(j);
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let e = j as f64 - shift as f64;
        let term = a * (e * ln_r).exp() * cis(reduced_angle(e, phi));
        abs += term.norm();
        sum.add(term);
    }
    (sum.value(), abs)
}

fn check_inside(z: Complex64, tol: f64) -> Result<()> {
    precondition(z.re.is_finite() && z.im.is_finite(), || "z must be finite".into())?;
    precondition(tol > 0.0, || format!("tolerance {tol} must be positive"))?;
    precondition(z.norm() <= MAX_INSIDE_RADIUS, || {
        format!("|z| = {} exceeds 1 - 1e-9", z.norm())
    })
}

/// `f(z)` summed to the truncation length for `tol`.
pub fn eval_f(seq: &OneSidedSequence, z: Complex64, tol: f64) -> Result<EvalResult> {
    check_inside(z, tol)?;
    let r = z.norm();
    if r == 0.0 {
        return Ok(EvalResult {
            value: seq.eval(0),
            abs_error_bound: 0.0,
            terms_used: 1,
            rounding_bound: 0.0,
        });
    }
    let a = seq.bound();
    let n = capped(truncation_length(a, r, tol)?)?;
    let (value, abs) = power_sum(|j| seq.eval(j), 0..n, 0, z);
    Ok(EvalResult {
        value,
        abs_error_bound: a * r.powf(n as f64) / (1.0 - r),
        terms_used: n,
        rounding_bound: rounding_allowance(n, abs),
    })
}

/// Both sides of `f_+^(N)(z) + f_-^(N)(z) = z^{-N} f(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftPair {
    /// `Σ_{n>=0} a_{n+N} z^n`; present only for `|z| < 1`.
    pub fplus: Option<EvalResult>,
    /// `Σ_{k<N} a_k z^{k-N}`, a finite sum.
    pub fminus: Complex64,
    pub fminus_rounding: f64,
    /// `z^{-N} f(z)` truncated to match `fplus`.
    pub scaled_f: Option<EvalResult>,
    pub identity_residual: Option<f64>,
    /// Sum of every component's error bounds plus the rounding of the
    /// residual itself.
    pub error_budget: Option<f64>,
}

pub fn eval_shift_pair(
    seq: &OneSidedSequence,
    shift: u64,
    z: Complex64,
    tol: f64,
) -> Result<ShiftPair> {
    precondition(z.norm() > 0.0, || "z = 0 is excluded".into())?;
    precondition(z.norm() != 1.0, || "|z| = 1 is excluded".into())?;
    precondition(tol > 0.0, || format!("tolerance {tol} must be positive"))?;
    let (fminus, fm_abs) = power_sum(|k| seq.eval(k), 0..shift, shift, z);
    let fminus_rounding = rounding_allowance(shift, fm_abs);
    if z.norm() > MAX_INSIDE_RADIUS {
        return Ok(ShiftPair {
            fplus: None,
            fminus,
            fminus_rounding,
            scaled_f: None,
            identity_residual: None,
            error_budget: None,
        });
    }
    let r = z.norm();
    let a = seq.bound();
    let m = capped(truncation_length(a, r, tol)?)?;
    let (fp, fp_abs) = power_sum(|n| seq.eval(n + shift), 0..m, 0, z);
    let tail = a * r.powf(m as f64) / (1.0 - r);
    let fplus = EvalResult {
        value: fp,
        abs_error_bound: tail,
        terms_used: m,
        rounding_bound: rounding_allowance(m, fp_abs),
    };
    // same terms a_0 .. a_{N+M-1}, each carried by z^{k-N} directly
    let (sc, sc_abs) = power_sum(|k| seq.eval(k), 0..shift + m, shift, z);
    let scaled_f = EvalResult {
        value: sc,
        abs_error_bound: tail,
        terms_used: shift + m,
        rounding_bound: rounding_allowance(shift + m, sc_abs),
    };
    let residual = (fp + fminus - sc).norm();
    let budget = fplus.total_error()
        + scaled_f.total_error()
        + fminus_rounding
        + 4.0 * f64::EPSILON * (fp.norm() + fminus.norm() + sc.norm());
    Ok(ShiftPair {
        fplus: Some(fplus),
        fminus,
        fminus_rounding,
        scaled_f: Some(scaled_f),
        identity_residual: Some(residual),
        error_budget: Some(budget),
    })
}

/// A two-sided coefficient sequence `b_n`, `n ∈ ℤ`.
#[derive(Clone, Debug)]
pub enum TwoSidedSeries {
    /// The window's values, zero outside it.
    Window(TwoSidedWindow),
    /// `b_n = pattern[n mod p]` for every integer `n`.
    Periodic(Vec<Complex64>),
    /// `b_n = nonneg(n)` for `n >= 0` and `b_n = negative(-n-1)` for `n < 0`.
    Halves {
        nonneg: OneSidedSequence,
        negative: OneSidedSequence,
    },
}

impl TwoSidedSeries {
    pub fn coeff(&self, n: i64) -> Complex64 {
        match self {
            TwoSidedSeries::Window(w) => w.get(n),
            TwoSidedSeries::Periodic(p) => p[n.rem_euclid(p.len() as i64) as usize],
            TwoSidedSeries::Halves { nonneg, negative } => {
                if n >= 0 {
                    nonneg.eval(n as u64)
                } else {
                    negative.eval((-n - 1) as u64)
                }
            }
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            TwoSidedSeries::Window(w) => w.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
            TwoSidedSeries::Periodic(p) => p.iter().map(|v| v.norm()).fold(0.0, f64::max),
            TwoSidedSeries::Halves { nonneg, negative } => nonneg.bound().max(negative.bound()),
        }
    }

    fn radius(&self) -> Option<u64> {
        match self {
            TwoSidedSeries::Window(w) => Some(w.radius as u64),
            _ => None,
        }
    }
}

/// `f_+(z) = Σ_{n>=0} b_n z^n` for `|z| < 1`, `f_-(z) = Σ_{n<=-1} b_n z^n`
/// for `|z| > 1`.
pub fn eval_two_sided(series: &TwoSidedSeries, z: Complex64, tol: f64) -> Result<EvalResult> {
    precondition(tol > 0.0, || format!("tolerance {tol} must be positive"))?;
    precondition(z.re.is_finite() && z.im.is_finite(), || "z must be finite".into())?;
    let r = z.norm();
    precondition((r - 1.0).abs() > 1e-12, || "|z| = 1 is excluded".into())?;
    let a = series.bound();
    let inside = r < 1.0;
    // ρ is the modulus of the expansion variable: z inside, 1/z outside
    let (w, rho) = if inside { (z, r) } else { (z.inv(), 1.0 / r) };
    let coeff = |m: u64| {
        if inside {
            series.coeff(m as i64)
        } else {
            series.coeff(-(m as i64))
        }
    };
    let first = if inside { 0 } else { 1 };
    let (terms, tail) = match series.radius() {
        Some(radius) => (radius + 1, 0.0),
        None if rho == 0.0 => (1, 0.0),
        None => {
            check_inside(w, tol)?;
            let m = capped(truncation_length(a, rho, tol)?)?;
            (m, a * rho.powf(m as f64) / (1.0 - rho))
        }
    };
    let (value, abs) = power_sum(coeff, first.min(terms)..terms, 0, w);
    Ok(EvalResult {
        value,
        abs_error_bound: tail,
        terms_used: terms,
        rounding_bound: rounding_allowance(terms, abs),
    })
}
