use super::{derived_seed, sample_process, ProcessSpec};
use crate::error::{precondition, Result};
use crate::numeric::{ComplexSum, KahanSum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub index: Option<u64>,
    pub samples: usize,
    pub mean: Complex64,
    /// Unbiased `Σ|x - x̄|² / (n-1)`.
    pub variance: f64,
    /// `sqrt(m₄/n)` with `m₄` the fourth central sample moment; this bounds
    /// the asymptotic standard deviation `sqrt((μ₄ - σ⁴)/n)` of the estimate
    /// from above.
    pub std_error: f64,
}

impl VarianceEstimate {
    pub fn covers(&self, value: f64, standard_errors: f64) -> bool {
        (self.variance - value).abs() <= standard_errors * self.std_error
    }
}

/// Variance estimate of a sample of complex values.
pub fn sample_variance(xs: &[Complex64]) -> Result<VarianceEstimate> {
    precondition(xs.len() >= 2, || "need at least two samples".into())?;
    let n = xs.len();
    if xs.iter().all(|&x| x == xs[0]) {
        return Ok(VarianceEstimate {
            index: None,
            samples: n,
            mean: xs[0],
            variance: 0.0,
            std_error: 0.0,
        });
    }
    let mut total = ComplexSum::default();
    xs.iter().for_each(|&x| total.add(x));
    let mean = total.value() / n as f64;
    let mut m2 = KahanSum::default();
    let mut m4 = KahanSum::default();
    for x in xs {
        let d = (x - mean).norm_sqr();
        m2.add(d);
        m4.add(d * d);
    }
    Ok(VarianceEstimate {
        index: None,
        samples: n,
        mean,
        variance: m2.value() / (n - 1) as f64,
        std_error: (m4.value() / n as f64 / n as f64).sqrt(),
    })
}

/// Per-index variance over `samples` independent paths, path `s` drawn with
/// the `s`-th seed derived from `spec.seed`.
pub fn variance_window(
    spec: &ProcessSpec,
    indices: &[u64],
    samples: usize,
) -> Result<Vec<VarianceEstimate>> {
    precondition(samples >= 100, || format!("{samples} samples, need at least 100"))?;
    precondition(!indices.is_empty(), || "no indices given".into())?;
    let length = indices.iter().max().copied().unwrap_or(0) + 1;
    let paths = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let path = sample_process(&spec.with_seed(derived_seed(spec.seed, s)), length)?;
            Ok(indices.iter().map(|&i| path.eval(i)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    indices
        .iter()
        .enumerate()
        .map(|(k, &index)| {
            let column: Vec<Complex64> = paths.iter().map(|p| p[k]).collect();
            let mut est = sample_variance(&column)?;
            est.index = Some(index);
            Ok(est)
        })
        .collect()
}
