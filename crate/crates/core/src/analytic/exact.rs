//! The shift identity in exact rational arithmetic.

use crate::error::{precondition, Result};
use crate::sequence::OneSidedSequence;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Sub};

/// `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    /// The exact value of a pair of finite doubles.
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussianRational::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(GaussianRational::new(&self.re / &norm, -&self.im / &norm))
    }

    pub fn to_c64(&self) -> Complex64 {
        use num_traits::ToPrimitive;
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: Self) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactShift {
    pub fplus: GaussianRational,
    pub fminus: GaussianRational,
    pub scaled_f: GaussianRational,
    /// `fplus + fminus - scaled_f`.
    pub residual: GaussianRational,
}

/// The shift identity with `f_+^(N)` truncated to `terms` terms and
/// `z^{-N} f` truncated to the matching `N + terms`, every coefficient taken
/// as the exact rational value of its double.
pub fn shift_identity_exact(
    seq: &OneSidedSequence,
    shift: u64,
    z: &GaussianRational,
    terms: u64,
) -> Result<ExactShift> {
    let w = z
        .inv()
        .ok_or_else(|| crate::error::Error::Precondition("z = 0 is excluded".into()))?;
    precondition(terms <= 100_000, || format!("{terms} exact terms is too many"))?;
    let coeff = |k: u64| {
        GaussianRational::from_c64(seq.eval(k)).expect("sequence values are finite")
    };

    // Σ_{n<terms} a_{N+n} z^n by Horner
    let mut fplus = GaussianRational::zero();
    for n in (0..terms).rev() {
        fplus = &(&fplus * z) + &coeff(shift + n);
    }
    // Σ_{k<N} a_k w^{N-k}
    let mut fminus = GaussianRational::zero();
    for k in 0..shift {
        fminus = &(&fminus + &coeff(k)) * &w;
    }
    let mut full = GaussianRational::zero();
    for k in (0..shift + terms).rev() {
        full = &(&full * z) + &coeff(k);
    }
    let mut w_pow = GaussianRational::one();
    for _ in 0..shift {
        w_pow = &w_pow * &w;
    }
    let scaled_f = &full * &w_pow;
    let residual = &(&fplus + &fminus) - &scaled_f;
    Ok(ExactShift {
        fplus,
        fminus,
        scaled_f,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{make_sequence, GeneratorSpec};

    #[test]
    fn residual_vanishes_exactly() {
        let rs = make_sequence(&GeneratorSpec::RudinShapiro).unwrap();
        let half = GaussianRational::ratio(1, 2);
        for shift in [0, 1, 5, 20] {
            let e = shift_identity_exact(&rs, shift, &half, 40).unwrap();
            assert!(e.residual.is_zero());
        }
    }

    #[test]
    fn fminus_of_constant() {
        let one = make_sequence(&GeneratorSpec::Periodic {
            pattern: vec![Complex64::new(1.0, 0.0)],
        })
        .unwrap();
        let e = shift_identity_exact(&one, 3, &GaussianRational::ratio(1, 2), 10).unwrap();
        assert_eq!(e.fminus, GaussianRational::ratio(14, 1));
        assert!(shift_identity_exact(&one, 3, &GaussianRational::zero(), 10).is_err());
    }
}
