//! Small floating-point helpers: error-free products, angle reduction and
//! compensated summation.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Low word of 2π so that `TAU + TAU_LO` carries ~107 bits.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Exact product `a*b = hi + lo`.
#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    (hi, lo)
}

/// Exact sum `a+b = s + err`.
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// `x * step` reduced to `[-π, π]`, with the product carried in double-double
/// so that large `x` does not destroy the phase.
pub(crate) fn reduced_angle(x: f64, step: f64) -> f64 {
    let (hi, lo) = two_prod(x, step);
    let k = (hi / TAU).round();
    // fma keeps hi - k*TAU exact to one rounding
    let r = (-k).mul_add(TAU, hi);
    let r = (-k).mul_add(TAU_LO, r) + lo;
    if r > std::f64::consts::PI {
        r - TAU
    } else if r < -std::f64::consts::PI {
        r + TAU
    } else {
        r
    }
}

/// Neumaier summation for real values.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise Neumaier summation for complex values.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    #[inline]
    pub(crate) fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e^{i·angle}`.
#[inline]
pub(crate) fn cis(angle: f64) -> Complex64 {
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// Rounding-error allowance for a compensated sum of `n` products, each
/// carrying a few ulps of error, against the sum of absolute terms.
#[inline]
pub(crate) fn rounding_allowance(n: u64, abs_sum: f64) -> f64 {
    // a term t_n = a_n r^n e^{inφ} carries (|ln r^n| + O(1)) ulps from
    // exp/sincos and the product; Σ |t_n| |ln r^n| stays within a small
    // multiple of Σ |t_n|
    64.0 * f64::EPSILON * abs_sum + 2.0 * (n as f64) * f64::EPSILON * f64::EPSILON * abs_sum
}
