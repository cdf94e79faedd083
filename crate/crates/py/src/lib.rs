//! Python bindings. Reports come back as plain dicts with the same shape as
//! the CLI's JSON output.

use nbscope_core::analytic::{
    boundary_l1_scan, decay_rule_check, eval_f as core_eval_f, eval_shift_pair,
    periodic_reflectionless_check, ArcSpec, DecaySide, ProbeConfig,
};
use nbscope_core::random::{certificate_rate_experiment, sample_process, ProcessSpec};
use nbscope_core::rightlimit::{
    detect_eventual_periodicity, extract_right_limits, find_gap_certificate,
    find_pair_certificate, szego_block_analysis, verdict as core_verdict, FlankSide,
    SearchConfig,
};
use nbscope_core::sequence::{
    make_sequence, read_csv, write_csv, BoundaryFn, Edge, ExponentSet, GeneratorSpec,
    OneSidedSequence, Provenance, RotationNumber, TwoSidedWindow,
};
use nbscope_core::Error;
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::PathBuf;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| err(e.into()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if obj.is_instance_of::<PyString>() {
        obj.extract()?
    } else {
        obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Overlays keyword arguments on a base config.
fn with_overrides(base: SearchConfig, overrides: Option<&Bound<'_, PyDict>>) -> PyResult<SearchConfig> {
    let Some(kw) = overrides else { return Ok(base) };
    let mut value = serde_json::to_value(&base).map_err(|e| err(e.into()))?;
    let extra: serde_json::Map<String, serde_json::Value> = from_py(kw.as_any())?;
    let fields = value.as_object_mut().expect("config serializes to an object");
    for (k, v) in extra {
        if !fields.contains_key(&k) {
            return Err(PyValueError::new_err(format!("unknown search option {k:?}")));
        }
        fields.insert(k, v);
    }
    serde_json::from_value(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn search_config(seq: &Sequence, kw: Option<&Bound<'_, PyDict>>) -> PyResult<SearchConfig> {
    with_overrides(SearchConfig::for_sequence(&seq.inner), kw)
}

fn arc_spec(arc: Option<(f64, f64)>) -> PyResult<ArcSpec> {
    match arc {
        None => Ok(ArcSpec::Full),
        Some((a, b)) => ArcSpec::new(a, b).map_err(err),
    }
}

/// A bounded coefficient sequence `a_0, a_1, ...`.
#[pyclass(module = "nbscope", frozen)]
struct Sequence {
    inner: OneSidedSequence,
}

fn generated(spec: GeneratorSpec) -> PyResult<Sequence> {
    Ok(Sequence { inner: make_sequence(&spec).map_err(err)? })
}

#[pymethods]
impl Sequence {
    #[staticmethod]
    fn periodic(pattern: Vec<Complex64>) -> PyResult<Self> {
        generated(GeneratorSpec::Periodic { pattern })
    }

    /// `a_n = fill` on the exponents (`"factorials"`, `"squares"` or a list).
    #[staticmethod]
    #[pyo3(signature = (exponents, fill = Complex64::new(1.0, 0.0)))]
    fn gap(exponents: &Bound<'_, PyAny>, fill: Complex64) -> PyResult<Self> {
        let exponents = if let Ok(name) = exponents.extract::<String>() {
            match name.as_str() {
                "factorials" => ExponentSet::Factorials,
                "squares" => ExponentSet::Squares,
                _ => return Err(PyValueError::new_err(format!("unknown exponent set {name:?}"))),
            }
        } else {
            ExponentSet::Explicit { exponents: exponents.extract()? }
        };
        generated(GeneratorSpec::GapPowers { exponents, fill })
    }

    #[staticmethod]
    fn rudin_shapiro() -> PyResult<Self> {
        generated(GeneratorSpec::RudinShapiro)
    }

    /// `boundary(frac(n q + theta))`; `q` is a float or a string such as
    /// `"sqrt2-1"` or `"golden"`, `boundary` is `"fractional"`,
    /// `"character"` or a dict in the JSON form.
    #[staticmethod]
    #[pyo3(signature = (q, theta = 0.0, boundary = None))]
    fn rotation(q: &Bound<'_, PyAny>, theta: f64, boundary: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let q = match q.extract::<f64>() {
            Ok(x) => RotationNumber::from_f64(x),
            Err(_) => q.extract::<String>()?.parse().map_err(err)?,
        };
        let boundary = match boundary {
            None => BoundaryFn::FractionalPart,
            Some(b) => match b.extract::<String>().ok().as_deref() {
                Some("fractional") => BoundaryFn::FractionalPart,
                Some("character") => BoundaryFn::Character,
                _ => from_py(b)?,
            },
        };
        generated(GeneratorSpec::Rotation { boundary, q, theta })
    }

    #[staticmethod]
    #[pyo3(signature = (edge = "hard"))]
    fn erdos(edge: &str) -> PyResult<Self> {
        let edge = match edge {
            "hard" => Edge::Hard,
            "soft" => Edge::Soft,
            _ => return Err(PyValueError::new_err(format!("edge must be hard or soft, got {edge:?}"))),
        };
        generated(GeneratorSpec::Erdos { edge })
    }

    /// A finite table, extended by zeros.
    #[staticmethod]
    fn from_values(values: Vec<Complex64>) -> PyResult<Self> {
        generated(GeneratorSpec::Explicit { values })
    }

    /// Any generator spec in its JSON form (dict or string).
    #[staticmethod]
    fn from_spec(spec: &Bound<'_, PyAny>) -> PyResult<Self> {
        generated(from_py(spec)?)
    }

    #[staticmethod]
    fn from_csv(path: PathBuf) -> PyResult<Self> {
        Ok(Sequence { inner: read_csv(&path).map_err(err)? })
    }

    /// A sampled path of the process spec (dict in the JSON form).
    #[staticmethod]
    fn sample(process: &Bound<'_, PyAny>, length: u64) -> PyResult<Self> {
        let spec: ProcessSpec = from_py(process)?;
        Ok(Sequence { inner: sample_process(&spec, length).map_err(err)? })
    }

    fn to_csv(&self, path: PathBuf, count: u64) -> PyResult<()> {
        write_csv(&self.inner, count, &path).map_err(err)
    }

    fn __getitem__(&self, n: u64) -> Complex64 {
        self.inner.eval(n)
    }

    fn prefix(&self, len: u64) -> Vec<Complex64> {
        self.inner.prefix(len)
    }

    #[getter]
    fn bound(&self) -> f64 {
        self.inner.bound()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.value_kind().is_exact()
    }

    #[getter]
    fn known_len(&self) -> Option<u64> {
        self.inner.known_len()
    }

    #[getter]
    fn origin(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, self.inner.origin())
    }

    fn __repr__(&self) -> String {
        let origin = serde_json::to_string(self.inner.origin()).unwrap_or_default();
        format!("Sequence({origin})")
    }
}

/// Periodicity, certificates and block analysis in turn.
#[pyfunction]
#[pyo3(signature = (seq, **config))]
fn verdict(py: Python<'_>, seq: &Sequence, config: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let cfg = search_config(seq, config)?;
    to_py(py, &core_verdict(&seq.inner, &cfg).map_err(err)?)
}

/// Gap and pair certificates as `{"gap", "backward", "forward"}`.
#[pyfunction]
#[pyo3(signature = (seq, **config))]
fn certificates(py: Python<'_>, seq: &Sequence, config: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let cfg = search_config(seq, config)?;
    let out = PyDict::new(py);
    out.set_item("gap", to_py(py, &find_gap_certificate(&seq.inner, &cfg).map_err(err)?)?)?;
    for (key, side) in [("backward", FlankSide::Backward), ("forward", FlankSide::Forward)] {
        let cert = find_pair_certificate(&seq.inner, &cfg, side).map_err(err)?;
        out.set_item(key, to_py(py, &cert)?)?;
    }
    Ok(out.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (seq, **config))]
fn right_limits(py: Python<'_>, seq: &Sequence, config: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let cfg = search_config(seq, config)?;
    to_py(py, &extract_right_limits(&seq.inner, &cfg).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (seq, **config))]
fn szego(py: Python<'_>, seq: &Sequence, config: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let cfg = search_config(seq, config)?;
    to_py(py, &szego_block_analysis(&seq.inner, &cfg).map_err(err)?)
}

/// `(preperiod, period)` or `None`.
#[pyfunction]
#[pyo3(signature = (seq, **config))]
fn periodicity(seq: &Sequence, config: Option<&Bound<'_, PyDict>>) -> PyResult<Option<(u64, u64)>> {
    let cfg = search_config(seq, config)?;
    detect_eventual_periodicity(&seq.inner, cfg.max_period, cfg.max_preperiod, cfg.horizon, cfg.periodicity_tol)
        .map_err(err)
}

/// `∫ |f(r e^{iθ})| dθ` over the arc (full circle by default) for each radius.
#[pyfunction]
#[pyo3(signature = (seq, radii, arc = None, quad_points = None, tol = None))]
fn probe(
    py: Python<'_>,
    seq: &Sequence,
    radii: Vec<f64>,
    arc: Option<(f64, f64)>,
    quad_points: Option<usize>,
    tol: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let mut cfg = ProbeConfig::default();
    if let Some(m) = quad_points {
        cfg.quad_points = m;
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    let report = boundary_l1_scan(&seq.inner, &arc_spec(arc)?, &radii, &cfg).map_err(err)?;
    to_py(py, &report)
}

/// `f(z)` for `|z| < 1` with its error bounds.
#[pyfunction]
#[pyo3(signature = (seq, z, tol = 1e-12))]
fn eval_f(py: Python<'_>, seq: &Sequence, z: Complex64, tol: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &core_eval_f(&seq.inner, z, tol).map_err(err)?)
}

/// Both sides of the shift identity at `z`.
#[pyfunction]
#[pyo3(signature = (seq, shift, z, tol = 1e-12))]
fn shift_pair(py: Python<'_>, seq: &Sequence, shift: u64, z: Complex64, tol: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &eval_shift_pair(&seq.inner, shift, z, tol).map_err(err)?)
}

/// Whether the periodic two-sided sequence is reflectionless on the arc.
#[pyfunction]
#[pyo3(signature = (pattern, arc = None))]
fn reflectionless_check(py: Python<'_>, pattern: Vec<Complex64>, arc: Option<(f64, f64)>) -> PyResult<Py<PyAny>> {
    to_py(py, &periodic_reflectionless_check(&pattern, &arc_spec(arc)?).map_err(err)?)
}

/// Decay rule on the window `b_{-W} .. b_W` (odd length, centered).
#[pyfunction]
#[pyo3(signature = (values, side, c, d, delta))]
fn decay_rule(py: Python<'_>, values: Vec<Complex64>, side: &str, c: f64, d: f64, delta: f64) -> PyResult<Py<PyAny>> {
    let side = match side {
        "positive" => DecaySide::Positive,
        "negative" => DecaySide::Negative,
        _ => return Err(PyValueError::new_err("side must be positive or negative")),
    };
    let window = TwoSidedWindow::from_values(values, Provenance::Center(0), 0.0).map_err(err)?;
    to_py(py, &decay_rule_check(&window, side, c, d, delta).map_err(err)?)
}

/// Certificate rate over `trials` sampled paths of the process.
#[pyfunction]
#[pyo3(signature = (process, trials, **config))]
fn montecarlo(
    py: Python<'_>,
    process: &Bound<'_, PyAny>,
    trials: u64,
    config: Option<&Bound<'_, PyDict>>,
) -> PyResult<Py<PyAny>> {
    let spec: ProcessSpec = from_py(process)?;
    let base = SearchConfig { horizon: 10_000, eps: 0.0, delta: 1.0, ..SearchConfig::default() };
    let cfg = with_overrides(base, config)?;
    let report = py
        .detach(|| certificate_rate_experiment(&spec, trials, &cfg))
        .map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn nbscope(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sequence>()?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(certificates, m)?)?;
    m.add_function(wrap_pyfunction!(right_limits, m)?)?;
    m.add_function(wrap_pyfunction!(szego, m)?)?;
    m.add_function(wrap_pyfunction!(periodicity, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(eval_f, m)?)?;
    m.add_function(wrap_pyfunction!(shift_pair, m)?)?;
    m.add_function(wrap_pyfunction!(reflectionless_check, m)?)?;
    m.add_function(wrap_pyfunction!(decay_rule, m)?)?;
    m.add_function(wrap_pyfunction!(montecarlo, m)?)?;
    Ok(())
}
