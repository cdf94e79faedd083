use crate::error::{Error, Result};
use crate::numeric::{cis, two_prod, two_sum};
use crate::sequence::ValueKind;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

/// `1!, 2!, ..., 20!` (every factorial that fits in a u64, without the
/// duplicate `0! = 1`).
const FACTORIALS: [u64; 20] = {
    let mut f = [0u64; 20];
    let mut acc = 1u64;
    let mut k = 0;
    while k < 20 {
        acc *= (k + 1) as u64;
        f[k] = acc;
        k += 1;
    }
    f
};

/// `j!` for `1 <= j <= 20`.
fn factorial(j: usize) -> u64 {
    FACTORIALS[j - 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "kebab-case")]
pub enum ExponentSet {
    /// `{1, 2, 6, 24, ...}`.
    Factorials,
    /// `{0, 1, 4, 9, ...}`.
    Squares,
    /// Strictly increasing explicit exponents.
    Explicit { exponents: Vec<u64> },
}

impl ExponentSet {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            ExponentSet::Factorials => FACTORIALS.binary_search(&n).is_ok(),
            ExponentSet::Squares => {
                let r = n.isqrt();
                r * r == n
            }
            ExponentSet::Explicit { exponents } => exponents.binary_search(&n).is_ok(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let ExponentSet::Explicit { exponents } = self {
            if exponents.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSpec(
                    "exponent set must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Edge profile of the Erdős-type sequences vanishing on `∪ [j!, j!+j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Edge {
    /// `a_n = 1` everywhere off `U`: the value jumps at the block edges.
    Hard,
    /// Symmetric linear ramps `0 → 1 → 0` between blocks, rise `⌊√gap⌋`.
    Soft,
}

/// A function on the unit circle, parameterized by the turn `x ∈ [0, 1)` of
/// the point `e^{2πix}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryFn {
    /// `x` itself; jumps from 1 to 0 at `x = 0`.
    FractionalPart,
    Constant { value: Complex64 },
    /// `below` on `[0, cut)`, `above` on `[cut, 1)`.
    Step { cut: f64, below: Complex64, above: Complex64 },
    /// `e^{2πix}`; continuous, used as a control.
    Character,
}

impl BoundaryFn {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            BoundaryFn::FractionalPart => Complex64::new(x, 0.0),
            BoundaryFn::Constant { value } => *value,
            BoundaryFn::Step { cut, below, above } => {
                if x < *cut {
                    *below
                } else {
                    *above
                }
            }
            BoundaryFn::Character => cis(TAU * x),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            BoundaryFn::FractionalPart | BoundaryFn::Character => 1.0,
            BoundaryFn::Constant { value } => value.norm(),
            BoundaryFn::Step { below, above, .. } => below.norm().max(above.norm()),
        }
    }

    pub(crate) fn value_kind(&self) -> ValueKind {
        match self {
            BoundaryFn::FractionalPart | BoundaryFn::Character => ValueKind::Float,
            BoundaryFn::Constant { value } => ValueKind::infer(&[*value]),
            BoundaryFn::Step { below, above, .. } => ValueKind::infer(&[*below, *above]),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match self {
            BoundaryFn::Constant { value } if !finite(value) => {
                Err(Error::InvalidSpec("non-finite boundary value".into()))
            }
            BoundaryFn::Step { cut, below, above } => {
                if !(*cut > 0.0 && *cut < 1.0) {
                    Err(Error::InvalidSpec(format!("step cut {cut} not in (0, 1)")))
                } else if !finite(below) || !finite(above) {
                    Err(Error::InvalidSpec("non-finite boundary value".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// A rotation number stored as an unevaluated sum `hi + lo` so that `n·q`
/// keeps its low bits for n up to ~10^7 and beyond.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    pub hi: f64,
    pub lo: f64,
}

impl RotationNumber {
    pub fn from_f64(q: f64) -> Self {
        RotationNumber { hi: q, lo: 0.0 }
    }

    /// `√n` to about 106 bits.
    pub fn sqrt(n: u64) -> Result<Self> {
        let nf = n as f64;
        if nf as u64 != n {
            return Err(Error::InvalidSpec(format!("sqrt argument {n} not exact in f64")));
        }
        let hi = nf.sqrt();
        // n - hi² is exactly representable, so a single fma gives it exactly
        let resid = (-hi).mul_add(hi, nf);
        Ok(RotationNumber {
            hi,
            lo: resid / (2.0 * hi),
        })
    }

    /// `(√5 − 1)/2`.
    pub fn golden() -> Self {
        let s = Self::sqrt(5).expect("5 is exact").plus_integer(-1);
        RotationNumber {
            hi: s.hi / 2.0,
            lo: s.lo / 2.0,
        }
    }

    pub fn plus_integer(self, k: i64) -> Self {
        let (s, e) = two_sum(self.hi, k as f64);
        let (hi, lo) = two_sum(s, e + self.lo);
        RotationNumber { hi, lo }
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }

    /// Rejects `q` within 1e-12 of any `p/d` with `d <= 10^4`. Larger
    /// denominators cannot be excluded: every double is that close to some
    /// convergent of its continued fraction.
    pub fn validate_irrational(&self) -> Result<()> {
        if !self.hi.is_finite() || !self.lo.is_finite() {
            return Err(Error::InvalidSpec("rotation number is not finite".into()));
        }
        for d in 1..=10_000u32 {
            let d = d as f64;
            let p = (self.hi * d).round();
            let diff = self.hi.mul_add(d, -p) + self.lo * d;
            if diff.abs() <= 1e-12 * d {
                return Err(Error::InvalidSpec(format!(
                    "rotation number {} is within 1e-12 of {p}/{d}",
                    self.value()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Accepts `sqrtN`, `sqrtN-K`, `sqrtN+K`, `golden`, or a decimal.
impl FromStr for RotationNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "golden" {
            return Ok(Self::golden());
        }
        if let Some(rest) = s.strip_prefix("sqrt") {
            let split = rest.find(['+', '-']).unwrap_or(rest.len());
            let (radicand, shift) = rest.split_at(split);
            let n: u64 = radicand
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad radicand in {s:?}")))?;
            let k: i64 = if shift.is_empty() {
                0
            } else {
                shift
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad integer shift in {s:?}")))?
            };
            return Ok(Self::sqrt(n)?.plus_integer(k));
        }
        s.parse::<f64>()
            .map(Self::from_f64)
            .map_err(|_| Error::InvalidSpec(format!("cannot parse rotation number {s:?}")))
    }
}

/// `frac(n·q + theta)` with the product carried in double-double.
pub(crate) fn rotation_point(n: u64, q: &RotationNumber, theta: f64) -> f64 {
    let nf = n as f64;
    let (p, e) = two_prod(nf, q.hi);
    let e = e + nf * q.lo;
    let f = p - p.floor();
    let t = f + (theta - theta.floor()) + e;
    let x = t - t.floor();
    if x >= 1.0 {
        // t was a hair below an integer
        1.0 - f64::EPSILON / 2.0
    } else {
        x
    }
}

pub(crate) fn rudin_shapiro(n: u64) -> f64 {
    if (n & (n >> 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn erdos(n: u64, edge: Edge) -> f64 {
    let (start, end) = if n < 2 {
        (0, 1)
    } else {
        // largest j >= 2 with j! <= n
        let j = FACTORIALS.partition_point(|&f| f <= n);
        let block_end = factorial(j) + j as u64;
        if n <= block_end {
            return 0.0;
        }
        let end = if j < 20 { factorial(j + 1) - 1 } else { u64::MAX };
        (block_end + 1, end)
    };
    match edge {
        Edge::Hard => 1.0,
        Edge::Soft => {
            let len = end - start + 1;
            let rise = len.isqrt().max(1) as f64;
            let d = (n - start).min(end - n) as f64;
            ((d + 1.0) / (rise + 1.0)).min(1.0)
        }
    }
}
