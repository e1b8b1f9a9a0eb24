//! Python bindings: curves, L-polynomials, screening, certificates and the
//! group tables. Structured results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use g2screen_core::classify::{self, CertifyOptions};
use g2screen_core::counting;
use g2screen_core::curve::GenusTwoCurve;
use g2screen_core::gsp4;
use g2screen_core::quadfields::{self, QuadraticDiscriminant};
use g2screen_core::screen;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_python<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A genus-2 curve `y^2 + h(x) y = f(x)` over the rationals.
#[pyclass(name = "Curve", frozen)]
struct PyCurve {
    inner: GenusTwoCurve,
}

#[pymethods]
impl PyCurve {
    /// Parses an equation such as `"y^2 + x y = x^5 - 1"` or a curve-list line.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        GenusTwoCurve::parse(text).map(|inner| PyCurve { inner }).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (f, h = None, label = None))]
    fn from_coefficients(f: Vec<i64>, h: Option<Vec<i64>>, label: Option<String>) -> PyResult<Self> {
        let mut fa = [0i64; 7];
        let mut ha = [0i64; 4];
        let h = h.unwrap_or_default();
        if f.len() > 7 || h.len() > 4 {
            return Err(value_error("f takes at most 7 and h at most 4 coefficients"));
        }
        fa[..f.len()].copy_from_slice(&f);
        ha[..h.len()].copy_from_slice(&h);
        GenusTwoCurve::new(fa, ha, label).map(|inner| PyCurve { inner }).map_err(value_error)
    }

    #[getter]
    fn f(&self) -> Vec<i64> {
        self.inner.f().to_vec()
    }

    #[getter]
    fn h(&self) -> Vec<i64> {
        self.inner.h().to_vec()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label().map(str::to_string)
    }

    /// The model discriminant as a decimal string.
    #[getter]
    fn discriminant(&self) -> String {
        self.inner.discriminant().to_string()
    }

    fn twist(&self, d: i64) -> PyResult<Self> {
        self.inner.twist(d).map(|inner| PyCurve { inner }).map_err(value_error)
    }

    fn to_list_line(&self) -> String {
        self.inner.to_list_line()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Curve({:?})", self.inner.to_string())
    }
}

#[pyfunction]
fn lpolynomial<'py>(py: Python<'py>, curve: &PyCurve, q: u64) -> PyResult<Bound<'py, PyAny>> {
    let rec = counting::lpolynomial(&curve.inner, q).map_err(value_error)?;
    to_python(py, &rec)
}

#[pyfunction]
fn a_q(curve: &PyCurve, q: u64) -> PyResult<i64> {
    counting::a_q(&curve.inner, q).map_err(value_error)
}

#[pyfunction]
fn candidate_discriminants(curve: &PyCurve, p: u64) -> PyResult<Vec<u64>> {
    let ds = quadfields::candidate_discriminants(curve.inner.discriminant(), p).map_err(value_error)?;
    Ok(ds.into_iter().map(QuadraticDiscriminant::get).collect())
}

/// Screens at `p`; `fields` replaces the discriminants read off the model.
#[pyfunction]
#[pyo3(signature = (curve, p, q_max = screen::DEFAULT_QMAX, fields = None))]
fn screen_curve<'py>(
    py: Python<'py>,
    curve: &PyCurve,
    p: u64,
    q_max: u64,
    fields: Option<Vec<u64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = match fields {
        Some(ds) => {
            let ds = ds
                .into_iter()
                .map(|d| QuadraticDiscriminant::new(d).ok_or_else(|| value_error(format!("{d} is not a real fundamental discriminant"))))
                .collect::<PyResult<Vec<_>>>()?;
            screen::screen_curve_for(&curve.inner, p, q_max, &ds)
        }
        None => screen::screen_curve(&curve.inner, p, q_max),
    }
    .map_err(value_error)?;
    to_python(py, &report)
}

#[pyfunction]
fn local_checks<'py>(py: Python<'py>, curve: &PyCurve, p: u64) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &classify::local_checks(&curve.inner, p).map_err(value_error)?)
}

#[pyfunction]
#[pyo3(signature = (curve, p, q_max = classify::DEFAULT_CLASSIFY_QMAX))]
fn classify_image<'py>(py: Python<'py>, curve: &PyCurve, p: u64, q_max: u64) -> PyResult<Bound<'py, PyAny>> {
    let tables = gsp4::CandidateTables::cached(p).map_err(value_error)?;
    let c = py
        .detach(|| classify::classify_image(&curve.inner, p, q_max, tables))
        .map_err(value_error)?;
    to_python(py, &c)
}

#[pyfunction]
#[pyo3(signature = (curve, p, q_max = screen::DEFAULT_QMAX, classify_qmax = classify::DEFAULT_CLASSIFY_QMAX))]
fn certify<'py>(
    py: Python<'py>,
    curve: &PyCurve,
    p: u64,
    q_max: u64,
    classify_qmax: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let options = CertifyOptions { screen_qmax: q_max, classify_qmax };
    let cert = py.detach(|| classify::certify(&curve.inner, p, options)).map_err(value_error)?;
    to_python(py, &cert)
}

/// `(numerator, denominator)` of the trace-zero proportion of `GSp4(F_p)`.
#[pyfunction]
fn trace_zero_fraction(py: Python<'_>, p: u64) -> PyResult<(u64, u64)> {
    let f = py.detach(|| gsp4::trace_zero_fraction(p)).map_err(value_error)?;
    Ok((*f.fraction.numer(), *f.fraction.denom()))
}

#[pyfunction]
#[pyo3(signature = (p, seed = 0))]
fn group_tables<'py>(py: Python<'py>, p: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| g2screen_core::cli::group_tables(p, seed)).map_err(value_error)?;
    to_python(py, &report)
}

#[pymodule]
fn g2screen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", g2screen_core::VERSION)?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(lpolynomial, m)?)?;
    m.add_function(wrap_pyfunction!(a_q, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_discriminants, m)?)?;
    m.add_function(wrap_pyfunction!(screen_curve, m)?)?;
    m.add_function(wrap_pyfunction!(local_checks, m)?)?;
    m.add_function(wrap_pyfunction!(classify_image, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(trace_zero_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(group_tables, m)?)?;
    Ok(())
}
