//! Python bindings. Reports come back as plain dicts decoded from the same
//! JSON the command line tool prints.

use num_complex::Complex64;
use opgeo_core::classify::{recover_adjoint as core_adjoint, ClassifierConfig, IdentifiedUnit};
use opgeo_core::document::{to_json_17, OperatorDocument};
use opgeo_core::harness::{run_suite, Suite, TrialConfig};
use opgeo_core::report::{self, CertificateDocument, CertifiedPredicate};
use opgeo_core::{AlgebraShape, Element, Error, Tolerances};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = to_json_17(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Element of a direct sum of full matrix algebras.
#[pyclass(name = "Element", module = "opgeo", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    inner: Element,
}

#[pymethods]
impl PyElement {
    /// `blocks[i]` lists the entries of block `i` row by row.
    #[new]
    fn new(shape: Vec<usize>, blocks: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let shape = AlgebraShape::new(shape).map_err(err)?;
        Ok(PyElement {
            inner: Element::from_entries(shape, blocks).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity(shape: Vec<usize>) -> PyResult<Self> {
        Ok(PyElement {
            inner: Element::unit(&AlgebraShape::new(shape).map_err(err)?),
        })
    }

    /// Parses an operator document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = OperatorDocument::parse(text).map_err(err)?;
        Ok(PyElement {
            inner: doc.element().map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        OperatorDocument::from_element(&self.inner, None).to_json()
    }

    #[getter]
    fn shape(&self) -> Vec<usize> {
        self.inner.shape().block_dims().to_vec()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<Complex64>> {
        self.inner.blocks().iter().map(|b| b.entries().to_vec()).collect()
    }

    /// Largest block operator norm.
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Conjugate transpose, blockwise.
    fn adjoint(&self) -> Self {
        PyElement {
            inner: self.inner.adjoint(),
        }
    }

    fn distance(&self, other: &PyElement) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Element({}, norm={:.6})", self.inner.shape(), self.inner.norm())
    }
}

fn config(equality: Option<f64>, classification: Option<f64>) -> ClassifierConfig {
    let mut t = Tolerances::default();
    if let Some(e) = equality {
        t.equality = e;
    }
    if let Some(c) = classification {
        t.classification = c;
    }
    ClassifierConfig::with_tolerances(t)
}

/// `None`, `"identity"` or an `Element`.
fn unit_of(
    x: &Element,
    unit: Option<&Bound<'_, PyAny>>,
    cfg: &ClassifierConfig,
) -> PyResult<Option<(IdentifiedUnit, &'static str)>> {
    let Some(u) = unit else {
        return Ok(None);
    };
    if u.is_instance_of::<PyString>() {
        return match u.extract::<String>()?.as_str() {
            "identity" => Ok(Some((IdentifiedUnit::identity(x.shape()), "identity"))),
            other => Err(PyValueError::new_err(format!("unknown unit `{other}`"))),
        };
    }
    let e = u
        .extract::<PyRef<PyElement>>()
        .map_err(|_| PyTypeError::new_err("unit must be None, \"identity\" or an Element"))?;
    e.inner.require_same_shape(x).map_err(err)?;
    Ok(Some((
        IdentifiedUnit::new(e.inner.clone(), cfg).map_err(err)?,
        "explicit",
    )))
}

/// Runs every classifier and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (x, unit=None, equality=None, classification=None))]
fn classify<'py>(
    py: Python<'py>,
    x: &PyElement,
    unit: Option<&Bound<'py, PyAny>>,
    equality: Option<f64>,
    classification: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(equality, classification);
    let unit = unit_of(&x.inner, unit, &cfg)?;
    let input = x.to_json();
    let r = report::classify_report(
        &x.inner,
        unit.as_ref().map(|(u, k)| (u, *k)),
        None,
        input.as_bytes(),
        &cfg,
    )
    .map_err(err)?;
    to_py(py, &r)
}

/// Certificate dict for `"invertible"` or `"partial-isometry"` (a witness
/// that `x` is not one), or `None` when none exists.
#[pyfunction]
#[pyo3(signature = (x, predicate="invertible"))]
fn certify<'py>(py: Python<'py>, x: &PyElement, predicate: &str) -> PyResult<Option<Bound<'py, PyAny>>> {
    let p = match predicate {
        "invertible" => CertifiedPredicate::Invertible,
        "partial-isometry" => CertifiedPredicate::PartialIsometry,
        other => return Err(PyValueError::new_err(format!("unknown predicate `{other}`"))),
    };
    match report::certify(&x.inner, p, &ClassifierConfig::default()).map_err(err)? {
        Some(c) => Ok(Some(to_py(py, &c)?)),
        None => Ok(None),
    }
}

/// Re-checks a certificate (dict or JSON text) against `x`.
#[pyfunction]
fn verify<'py>(py: Python<'py>, x: &PyElement, certificate: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = if certificate.is_instance_of::<PyString>() {
        certificate.extract()?
    } else {
        py.import("json")?.call_method1("dumps", (certificate,))?.extract()?
    };
    let cert: CertificateDocument =
        serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("malformed certificate: {e}")))?;
    let check = report::verify(&x.inner, &cert, &ClassifierConfig::default()).map_err(err)?;
    to_py(py, &check)
}

/// `(span_dim, Σ n_i²)` for the norming set of a norm-one `x`.
#[pyfunction]
fn norming_span(x: &PyElement) -> PyResult<(usize, usize)> {
    let d = opgeo_core::algebra::norming_set(&x.inner, &Tolerances::default()).map_err(err)?;
    Ok((d.span_dim, d.full_dim()))
}

/// The adjoint computed from the norm and the unit alone. The unit
/// defaults to the identity.
#[pyfunction]
#[pyo3(signature = (x, unit=None))]
fn recover_adjoint(x: &PyElement, unit: Option<&Bound<'_, PyAny>>) -> PyResult<PyElement> {
    let cfg = ClassifierConfig::default();
    let u = match unit_of(&x.inner, unit, &cfg)? {
        Some((u, _)) => u,
        None => IdentifiedUnit::identity(x.inner.shape()),
    };
    Ok(PyElement {
        inner: core_adjoint(&x.inner, &u, &cfg).map_err(err)?,
    })
}

/// Runs the property suites; returns the report dict.
#[pyfunction]
#[pyo3(signature = (seed=1, trials=100, suites=None, shapes=None))]
fn run_harness<'py>(
    py: Python<'py>,
    seed: u64,
    trials: usize,
    suites: Option<Vec<String>>,
    shapes: Option<Vec<Vec<usize>>>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = TrialConfig {
        seed,
        trials,
        ..Default::default()
    };
    if let Some(s) = suites {
        cfg.suites = s
            .iter()
            .map(|n| n.parse::<Suite>())
            .collect::<Result<_, _>>()
            .map_err(err)?;
    }
    if let Some(s) = shapes {
        cfg.shapes = s
            .into_iter()
            .map(AlgebraShape::new)
            .collect::<Result<_, _>>()
            .map_err(err)?;
    }
    let r = py.detach(|| run_suite(&cfg)).map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
fn opgeo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", report::TOOL_VERSION)?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(norming_span, m)?)?;
    m.add_function(wrap_pyfunction!(recover_adjoint, m)?)?;
    m.add_function(wrap_pyfunction!(run_harness, m)?)?;
    Ok(())
}
