//! Bounded coefficient sequences `a_0, a_1, ...` and the generator families
//! used throughout the crate.
//!
//! A [`OneSidedSequence`] is an immutable, cheaply clonable handle. Every
//! family evaluates `eval(n)` in O(1) or O(log n) without materializing
//! arrays, so horizons of 10^9 are fine for the lazy families.

mod csv_io;
mod families;
mod snap;

pub use csv_io::{read_csv, read_csv_from, write_csv, write_csv_to};
pub use families::{BoundaryFn, Edge, ExponentSet, RotationNumber};
pub(crate) use families::rotation_point;
pub use snap::{snap_to_limit_points, SnapReport};

use crate::error::{Error, Result};
use crate::random::ProcessSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Whether the values of a sequence are exact (so equality tests may be
/// exact) or carry floating-point noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    ExactInteger,
    ExactRational,
    Float,
}

impl ValueKind {
    pub fn is_exact(self) -> bool {
        !matches!(self, ValueKind::Float)
    }

    /// `ExactInteger` if every real and imaginary part is an integer, else `Float`.
    pub fn infer(values: &[Complex64]) -> Self {
        let integral = |x: f64| x.is_finite() && x.fract() == 0.0;
        if values.iter().all(|v| integral(v.re) && integral(v.im)) {
            ValueKind::ExactInteger
        } else {
            ValueKind::Float
        }
    }
}

/// Description of one of the canonical sequence families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// `a_n = pattern[n mod p]`.
    Periodic { pattern: Vec<Complex64> },
    /// `a_n = fill` on the exponent set, zero elsewhere.
    GapPowers { exponents: ExponentSet, fill: Complex64 },
    /// Coefficients of the Rudin–Shapiro polynomials `P_n`.
    RudinShapiro,
    /// `a_n = g(frac(n q + theta))`, the boundary function sampled along an
    /// irrational rotation. `theta` is measured in turns.
    Rotation {
        boundary: BoundaryFn,
        q: RotationNumber,
        theta: f64,
    },
    /// Zero on `U = ∪_{j≥2} [j!, j!+j]`, with hard or soft edges off `U`.
    Erdos { edge: Edge },
    /// A finite list, extended by zeros.
    Explicit { values: Vec<Complex64> },
    /// A sampled path of a stochastic process.
    Stochastic { process: ProcessSpec, length: u64 },
}

/// Where a sequence came from; carried into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "kebab-case")]
pub enum SequenceOrigin {
    Generated { spec: GeneratorSpec },
    Imported { source: String },
    Sampled { process: ProcessSpec, length: u64 },
    Snapped { targets: Vec<Complex64> },
}

#[derive(Clone, Debug)]
enum Source {
    Periodic(Arc<[Complex64]>),
    Gap { exponents: ExponentSet, fill: Complex64 },
    RudinShapiro,
    Rotation { boundary: BoundaryFn, q: RotationNumber, theta: f64 },
    Erdos(Edge),
    Table(Arc<[Complex64]>),
    Snapped { inner: Box<OneSidedSequence>, targets: Arc<[Complex64]> },
}

/// A bounded one-sided coefficient sequence with a certified bound
/// `sup_n |a_n| <= bound`.
#[derive(Clone, Debug)]
pub struct OneSidedSequence {
    source: Source,
    bound: f64,
    value_kind: ValueKind,
    origin: SequenceOrigin,
}

impl OneSidedSequence {
    /// Wraps an explicit table. Indices past the end evaluate to zero, and
    /// [`known_len`](Self::known_len) reports the table length.
    pub fn from_values(values: Vec<Complex64>, origin: SequenceOrigin) -> Self {
        let bound = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let value_kind = ValueKind::infer(&values);
        OneSidedSequence {
            source: Source::Table(values.into()),
            bound,
            value_kind,
            origin,
        }
    }

    pub(crate) fn from_table_with_bound(
        values: Vec<Complex64>,
        bound: f64,
        origin: SequenceOrigin,
    ) -> Self {
        let value_kind = ValueKind::infer(&values);
        OneSidedSequence {
            source: Source::Table(values.into()),
            bound,
            value_kind,
            origin,
        }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    pub fn origin(&self) -> &SequenceOrigin {
        &self.origin
    }

    /// Number of stored coefficients for table-backed sequences; `None` for
    /// generators defined on all of ℕ.
    pub fn known_len(&self) -> Option<u64> {
        match &self.source {
            Source::Table(t) => Some(t.len() as u64),
            Source::Snapped { inner, .. } => inner.known_len(),
            _ => None,
        }
    }

    /// Fails if a table-backed sequence has fewer than `needed` coefficients.
    pub fn require_len(&self, needed: u64) -> Result<()> {
        match self.known_len() {
            Some(available) if available < needed => {
                Err(Error::HorizonExceedsData { needed, available })
            }
            _ => Ok(()),
        }
    }

    /// The coefficient `a_n`.
    pub fn eval(&self, n: u64) -> Complex64 {
        let v = match &self.source {
            Source::Periodic(p) => p[(n % p.len() as u64) as usize],
            Source::Gap { exponents, fill } => {
                if exponents.contains(n) {
                    *fill
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Source::RudinShapiro => Complex64::new(families::rudin_shapiro(n), 0.0),
            Source::Rotation { boundary, q, theta } => {
                boundary.eval(families::rotation_point(n, q, *theta))
            }
            Source::Erdos(edge) => Complex64::new(families::erdos(n, *edge), 0.0),
            Source::Table(t) => t.get(n as usize).copied().unwrap_or_default(),
            Source::Snapped { inner, targets } => snap::nearest(targets, inner.eval(n)).0,
        };
        debug_assert!(
            v.norm() <= self.bound * (1.0 + 1e-12) + f64::MIN_POSITIVE,
            "|a_{n}| = {} exceeds bound {}",
            v.norm(),
            self.bound
        );
        v
    }

    /// `a_0 .. a_{len-1}`.
    pub fn prefix(&self, len: u64) -> Vec<Complex64> {
        match &self.source {
            Source::Table(t) if (len as usize) <= t.len() => t[..len as usize].to_vec(),
            _ => (0..len).map(|n| self.eval(n)).collect(),
        }
    }
}

/// Builds a sequence from a generator description, validating it first.
pub fn make_sequence(spec: &GeneratorSpec) -> Result<OneSidedSequence> {
    let origin = SequenceOrigin::Generated { spec: spec.clone() };
    let seq = match spec {
        GeneratorSpec::Periodic { pattern } => {
            if pattern.is_empty() {
                return Err(Error::InvalidSpec("periodic pattern is empty".into()));
            }
            check_finite(pattern)?;
            OneSidedSequence {
                bound: pattern.iter().map(|v| v.norm()).fold(0.0, f64::max),
                value_kind: ValueKind::infer(pattern),
                source: Source::Periodic(pattern.clone().into()),
                origin,
            }
        }
        GeneratorSpec::GapPowers { exponents, fill } => {
            exponents.validate()?;
            check_finite(std::slice::from_ref(fill))?;
            OneSidedSequence {
                bound: fill.norm().max(1.0),
                value_kind: ValueKind::infer(std::slice::from_ref(fill)),
                source: Source::Gap {
                    exponents: exponents.clone(),
                    fill: *fill,
                },
                origin,
            }
        }
        GeneratorSpec::RudinShapiro => OneSidedSequence {
            source: Source::RudinShapiro,
            bound: 1.0,
            value_kind: ValueKind::ExactInteger,
            origin,
        },
        GeneratorSpec::Rotation { boundary, q, theta } => {
            q.validate_irrational()?;
            boundary.validate()?;
            if !theta.is_finite() {
                return Err(Error::InvalidSpec("rotation theta is not finite".into()));
            }
            OneSidedSequence {
                bound: boundary.sup_norm(),
                value_kind: boundary.value_kind(),
                source: Source::Rotation {
                    boundary: boundary.clone(),
                    q: *q,
                    theta: *theta,
                },
                origin,
            }
        }
        GeneratorSpec::Erdos { edge } => OneSidedSequence {
            source: Source::Erdos(*edge),
            bound: 1.0,
            value_kind: match edge {
                Edge::Hard => ValueKind::ExactInteger,
                Edge::Soft => ValueKind::Float,
            },
            origin,
        },
        GeneratorSpec::Explicit { values } => {
            check_finite(values)?;
            OneSidedSequence::from_values(values.clone(), origin)
        }
        GeneratorSpec::Stochastic { process, length } => {
            crate::random::sample_process(process, *length)?
        }
    };
    Ok(seq)
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidSpec("non-finite coefficient".into()))
    }
}

/// Where the values of a [`TwoSidedWindow`] were read from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Center(u64),
    Cluster(Vec<u64>),
}

/// A finite window `b_{-W} .. b_W` approximating a right limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedWindow {
    pub radius: usize,
    pub values: Vec<Complex64>,
    pub provenance: Provenance,
    pub eps: f64,
}

impl TwoSidedWindow {
    /// Builds a window from explicit values (length must be `2*radius+1`).
    pub fn from_values(values: Vec<Complex64>, provenance: Provenance, eps: f64) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::Precondition(
                "a two-sided window needs an odd number of values".into(),
            ));
        }
        Ok(TwoSidedWindow {
            radius: values.len() / 2,
            values,
            provenance,
            eps,
        })
    }

    /// `b_k` for `|k| <= radius`, zero outside.
    pub fn get(&self, k: i64) -> Complex64 {
        let w = self.radius as i64;
        if k < -w || k > w {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[(k + w) as usize]
        }
    }
}

/// The window of radius `radius` centered at index `center`.
pub fn window(seq: &OneSidedSequence, center: u64, radius: usize) -> Result<TwoSidedWindow> {
    let w = radius as u64;
    if center < w {
        return Err(Error::Precondition(format!(
            "window center {center} is smaller than radius {radius}"
        )));
    }
    seq.require_len(center + w + 1)?;
    let values = (center - w..=center + w).map(|n| seq.eval(n)).collect();
    Ok(TwoSidedWindow {
        radius,
        values,
        provenance: Provenance::Center(center),
        eps: 0.0,
    })
}
