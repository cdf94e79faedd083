//! Rational forms of eventually periodic power series and their reduction by
//! cyclotomic factors.
//!
//! With preperiod `P` and period `T`,
//! `f = (A(z)(1 - z^T) + z^P C(z)) / (1 - z^T)` where `A` collects the first
//! `P` coefficients and `C` one period. `1 - z^T = -∏_{d|T} Φ_d(z)` is
//! squarefree, so each `Φ_d` either cancels once or leaves simple poles at
//! the primitive `d`-th roots of unity.

use super::{eval_two_sided, ArcSpec, TwoSidedSeries};
use crate::error::{precondition, Result};
use crate::numeric::cis;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Pole-matching tolerance of the floating-point route, relative to the
/// numerator's coefficient mass.
const ROOT_TOL: f64 = 1e-9;

/// Coefficients of the cyclotomic polynomial `Φ_d`, lowest degree first.
pub fn cyclotomic(d: u64) -> Vec<i64> {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut poly = vec![0i128; d as usize + 1];
    poly[0] = -1;
    poly[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        let phi: Vec<i128> = cyclotomic(e).into_iter().map(i128::from).collect();
        poly = div_exact(&poly, &phi).expect("Φ_e divides z^d - 1 for e | d");
    }
    poly.into_iter().map(|c| c as i64).collect()
}

/// Quotient of `num` by the monic `den` when the remainder is zero.
fn div_exact(num: &[i128], den: &[i128]) -> Option<Vec<i128>> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    if num.len() <= dd {
        return num.iter().all(|&c| c == 0).then(Vec::new);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        if q != 0 {
            for (j, &c) in den.iter().enumerate() {
                rem[i + j] = rem[i + j].checked_sub(q.checked_mul(c)?)?;
            }
        }
    }
    rem[..dd].iter().all(|&c| c == 0).then_some(quot)
}

/// Quotient of `num` by the monic real `den`, remainder discarded.
fn div_float(num: &[Complex64], den: &[i128]) -> Vec<Complex64> {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return Vec::new();
    }
    let mut rem = num.to_vec();
    let mut quot = vec![Complex64::new(0.0, 0.0); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        for (j, &c) in den.iter().enumerate() {
            rem[i + j] -= q * c as f64;
        }
    }
    quot
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `e^{2πik/d}` with `gcd(k, d) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub k: u64,
    pub d: u64,
    /// `2πk/d` in `[0, 2π)`.
    pub angle: f64,
}

impl RootOfUnity {
    fn primitive(d: u64) -> impl Iterator<Item = RootOfUnity> {
        (0..d).filter(move |&k| gcd(k, d) == 1).map(move |k| RootOfUnity {
            k,
            d,
            angle: TAU * k as f64 / d as f64,
        })
    }

    pub fn value(&self) -> Complex64 {
        cis(self.angle)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalForm {
    pub preperiod: u64,
    pub period: u64,
    /// Reduced numerator, lowest degree first.
    pub numerator: Vec<Complex64>,
    /// Reduced denominator, lowest degree first.
    pub denominator: Vec<Complex64>,
    /// Indices `d` whose `Φ_d` cancelled.
    pub cancelled: Vec<u64>,
    /// Surviving poles, all simple.
    pub poles: Vec<RootOfUnity>,
    /// Whether the reduction ran in exact integer arithmetic.
    pub exact: bool,
}

impl RationalForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.numerator, z) / horner(&self.denominator, z)
    }
}

fn as_integer(v: Complex64) -> Option<i128> {
    (v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() < 2f64.powi(62)).then_some(v.re as i128)
}

/// Reduced rational form of the series with coefficients `values[..P]`
/// followed by `values[P..P+T]` repeated forever.
pub fn eventually_periodic_form(
    values: &[Complex64],
    preperiod: u64,
    period: u64,
) -> Result<RationalForm> {
    precondition(period >= 1, || "period must be at least 1".into())?;
    let (p, t) = (preperiod as usize, period as usize);
    precondition(values.len() >= p + t, || {
        format!("need {} coefficients, got {}", p + t, values.len())
    })?;
    let values = &values[..p + t];
    // numerator A(z)(1 - z^T) + z^P C(z)
    let mut num = vec![Complex64::new(0.0, 0.0); p + t];
    for (n, &a) in values[..p].iter().enumerate() {
        num[n] += a;
        num[n + t] -= a;
    }
    for (j, &c) in values[p..].iter().enumerate() {
        num[p + j] += c;
    }
    let mut den: Vec<i128> = vec![0; t + 1];
    den[0] = 1;
    den[t] = -1;

    let divisors: Vec<u64> = (1..=period).filter(|d| period.is_multiple_of(*d)).collect();
    let exact_num: Option<Vec<i128>> = num.iter().map(|&v| as_integer(v)).collect();
    let mut cancelled = Vec::new();
    let mut surviving = Vec::new();
    let exact = exact_num.is_some();
    let numerator: Vec<Complex64>;
    match exact_num {
        Some(mut int_num) => {
            for &d in &divisors {
                let phi: Vec<i128> = cyclotomic(d).into_iter().map(i128::from).collect();
                match div_exact(&int_num, &phi) {
                    Some(q) => {
                        int_num = q;
                        den = div_exact(&den, &phi).expect("Φ_d divides 1 - z^T");
                        cancelled.push(d);
                    }
                    None => surviving.extend(RootOfUnity::primitive(d)),
                }
            }
            numerator = int_num.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
        }
        None => {
            let mut fnum = num;
            for &d in &divisors {
                let mass: f64 = fnum.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
                let roots: Vec<RootOfUnity> = RootOfUnity::primitive(d).collect();
                let vanishes: Vec<bool> = roots
                    .iter()
                    .map(|r| horner(&fnum, r.value()).norm() <= ROOT_TOL * mass)
                    .collect();
                if vanishes.iter().all(|&v| v) {
                    let phi: Vec<i128> = cyclotomic(d).into_iter().map(i128::from).collect();
                    fnum = div_float(&fnum, &phi);
                    den = div_exact(&den, &phi).expect("Φ_d divides 1 - z^T");
                    cancelled.push(d);
                } else {
                    // with complex coefficients Φ_d can split; only roots where
                    // the numerator stays nonzero are poles
                    surviving.extend(roots.into_iter().zip(vanishes).filter(|p| !p.1).map(|p| p.0));
                }
            }
            numerator = fnum;
        }
    }
    surviving.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    // Φ_1 = z - 1 flips the sign; normalise to a denominator with constant term 1
    let mut numerator = numerator;
    if den[0] < 0 {
        den.iter_mut().for_each(|c| *c = -*c);
        numerator.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(RationalForm {
        preperiod,
        period,
        numerator,
        denominator: den.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect(),
        cancelled,
        poles: surviving,
        exact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail {
        reason: String,
        root: Option<RootOfUnity>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionlessCheck {
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    pub form: RationalForm,
    /// Sample points used for the numeric confirmation (0 if skipped).
    pub samples: usize,
    /// Largest `|f_+(z) + f_-(z)|` over the samples, with `f_+` continued by
    /// its reduced rational form.
    pub max_deviation: f64,
}

const SAMPLES: usize = 50;

/// Whether the periodic two-sided sequence with the given pattern is
/// reflectionless on `arc`.
pub fn periodic_reflectionless_check(
    pattern: &[Complex64],
    arc: &ArcSpec,
) -> Result<ReflectionlessCheck> {
    precondition(!pattern.is_empty(), || "pattern must be nonempty".into())?;
    let form = eventually_periodic_form(pattern, 0, pattern.len() as u64)?;
    if let Some(root) = form.poles.iter().find(|r| arc.contains(r.angle, 1e-12)) {
        return Ok(ReflectionlessCheck {
            outcome: CheckOutcome::Fail {
                reason: format!(
                    "pole at e^(2πi·{}/{}) survives reduction and lies on the arc",
                    root.k, root.d
                ),
                root: Some(*root),
            },
            form,
            samples: 0,
            max_deviation: 0.0,
        });
    }
    let series = TwoSidedSeries::Periodic(pattern.to_vec());
    let mut max_deviation: f64 = 0.0;
    for i in 0..SAMPLES {
        let rho = 1.05 + 0.9 * ((i % 10) as f64 + 0.5) / 10.0;
        let theta = arc.start() + arc.width() * (i as f64 + 0.5) / SAMPLES as f64;
        let z = cis(theta) * rho;
        let fm = eval_two_sided(&series, z, 1e-13)?;
        let dev = (form.eval(z) + fm.value).norm();
        max_deviation = max_deviation.max(dev);
        if dev > fm.total_error() + 1e-10 {
            return Ok(ReflectionlessCheck {
                outcome: CheckOutcome::Fail {
                    reason: format!("f_+ + f_- = {dev:e} at z = {z}"),
                    root: None,
                },
                form,
                samples: i + 1,
                max_deviation,
            });
        }
    }
    Ok(ReflectionlessCheck {
        outcome: CheckOutcome::Pass,
        form,
        samples: SAMPLES,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn product_over_divisors_is_z_to_the_n_minus_one() {
        for n in 1..=30u64 {
            let mut prod = vec![1i128];
            for d in (1..=n).filter(|d| n % d == 0) {
                let phi = cyclotomic(d);
                let mut next = vec![0i128; prod.len() + phi.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, &b) in phi.iter().enumerate() {
                        next[i + j] += a * b as i128;
                    }
                }
                prod = next;
            }
            let mut expect = vec![0i128; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn periodic_examples() {
        let pass = periodic_reflectionless_check(&[c(1.0)], &ArcSpec::new(0.1, TAU - 0.1).unwrap())
            .unwrap();
        assert_eq!(pass.outcome, CheckOutcome::Pass);
        assert_eq!(pass.samples, 50);

        let around_one = ArcSpec::new(-0.5, 0.5).unwrap();
        let fail = periodic_reflectionless_check(&[c(1.0), c(0.0)], &around_one).unwrap();
        match fail.outcome {
            CheckOutcome::Fail { root: Some(r), .. } => assert_eq!((r.k, r.d), (0, 1)),
            other => panic!("expected a pole at 1, got {other:?}"),
        }

        let cancel = periodic_reflectionless_check(&[c(1.0), c(-1.0)], &around_one).unwrap();
        assert_eq!(cancel.outcome, CheckOutcome::Pass);
        assert_eq!(cancel.form.cancelled, vec![1]);
        assert_eq!(cancel.form.numerator, vec![c(1.0)]);
        assert_eq!(cancel.form.denominator, vec![c(1.0), c(1.0)]);
    }

    #[test]
    fn preperiodic_form() {
        // 5, then 1, 0 repeating: f = 5 + z/(1 - z^2)
        let form = eventually_periodic_form(&[c(5.0), c(1.0), c(0.0)], 1, 2).unwrap();
        let z = Complex64::new(0.3, -0.2);
        let direct = c(5.0) + z / (c(1.0) - z * z);
        assert!((form.eval(z) - direct).norm() < 1e-14);
        assert_eq!(form.poles.len(), 2);
    }

    #[test]
    fn float_route_matches_exact_route() {
        let exact = eventually_periodic_form(&[c(1.0), c(1.0), c(-2.0)], 0, 3).unwrap();
        let float = eventually_periodic_form(&[c(0.5), c(0.5), c(-1.0)], 0, 3).unwrap();
        assert!(exact.exact && !float.exact);
        assert_eq!(exact.cancelled, float.cancelled);
        assert_eq!(exact.poles.len(), float.poles.len());
    }

    #[test]
    fn complex_pattern_splits_cyclotomic_factors() {
        // 1 + i z vanishes at z = i but not at z = -i
        let form = eventually_periodic_form(&[c(1.0), Complex64::new(0.0, 1.0), c(0.0), c(0.0)], 0, 4)
            .unwrap();
        assert!(!form.exact);
        assert!(form.poles.iter().all(|r| !(r.k == 1 && r.d == 4)));
        assert!(form.poles.iter().any(|r| r.k == 3 && r.d == 4));
    }
}
