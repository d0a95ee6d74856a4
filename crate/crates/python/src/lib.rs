//! Python bindings: `import rph`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rph_core::certify::outcome_json;
use rph_core::{self as core, SparseSystem, TrackerOptions};

create_exception!(rph, RphError, PyException);

type Matrix = Vec<Vec<i64>>;

fn to_py_err(e: core::RphError) -> PyErr {
    RphError::new_err(e.to_string())
}

/// Converts a JSON value to Python objects through the `json` module.
fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = v.to_string();
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A square sparse polynomial system.
#[pyclass(name = "System", module = "rph", frozen)]
struct PySystem {
    inner: SparseSystem,
}

#[pymethods]
impl PySystem {
    /// `polynomials[i]` is a list of `(exponents, coefficient)` terms.
    #[new]
    #[pyo3(signature = (polynomials, variables=None))]
    fn new(polynomials: Vec<Vec<(Vec<u32>, f64)>>, variables: Option<Vec<String>>) -> PyResult<Self> {
        let inner = match variables {
            None => SparseSystem::from_terms(polynomials),
            Some(vars) => SparseSystem::new(
                vars,
                polynomials.into_iter().map(core::SparsePolynomial::new).collect(),
            ),
        }
        .map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySystem {
            inner: core::parse_system(text).map_err(to_py_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.variables().to_vec()
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.check_point(&x)?;
        Ok(self.inner.evaluate(&x))
    }

    fn jacobian(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        self.check_point(&x)?;
        Ok(self.inner.jacobian(&x))
    }

    fn __len__(&self) -> usize {
        self.inner.n_vars()
    }

    fn __repr__(&self) -> String {
        let polys: Vec<String> = (0..self.inner.n_vars())
            .map(|i| self.inner.format_polynomial(i))
            .collect();
        format!("System([{}])", polys.join(", "))
    }
}

impl PySystem {
    fn check_point(&self, x: &[f64]) -> PyResult<()> {
        if x.len() == self.inner.n_vars() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.n_vars(),
                x.len()
            )))
        }
    }
}

/// `1` / `0`, or `(flag, real_root_count)` with `count_real=True` when certified.
#[pyfunction]
#[pyo3(signature = (system, count_real=false))]
fn certify_patchwork(py: Python<'_>, system: &PySystem, count_real: bool) -> PyResult<Py<PyAny>> {
    let cert = core::certify_patchwork(&system.inner, count_real).map_err(to_py_err)?;
    let flag = u8::from(cert.certified);
    Ok(match cert.real_root_count {
        Some(k) => (flag, k).into_pyobject(py)?.into_any().unbind(),
        None => flag.into_pyobject(py)?.into_any().unbind(),
    })
}

/// Full certificate with per-generator margins.
#[pyfunction]
#[pyo3(signature = (system, count_real=false))]
fn patchwork_report(py: Python<'_>, system: &PySystem, count_real: bool) -> PyResult<Py<PyAny>> {
    let cert = core::certify_patchwork(&system.inner, count_real).map_err(to_py_err)?;
    json_to_py(py, &cert.to_json())
}

/// One dict per mixed cell: `equations`, `exponent_matrix`, `rhs`, `source_cell`.
#[pyfunction]
fn generate_binomials(py: Python<'_>, system: &PySystem) -> PyResult<Py<PyAny>> {
    let bs = core::generate_binomials(&system.inner).map_err(to_py_err)?;
    json_to_py(py, &serde_json::Value::Array(bs.iter().map(|b| b.to_json()).collect()))
}

/// Real solutions of `x^E = rhs`.
#[pyfunction]
fn solve_binomial_real(exponent_matrix: Vec<Vec<i64>>, rhs: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let b = core::BinomialSystem::from_parts(exponent_matrix, rhs).map_err(to_py_err)?;
    core::solve_binomial_real(&b).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (system, seed=0))]
fn mixed_volume(system: &PySystem, seed: u64) -> PyResult<u64> {
    core::mixed_volume_seeded(&system.inner, seed).map_err(to_py_err)
}

/// Tracks every real start solution; returns the solve report as a dict.
#[pyfunction]
#[pyo3(signature = (system, certify=false, t_start=1e-6, newton_tol=1e-10, max_steps=100_000))]
fn rph_track(
    py: Python<'_>,
    system: &PySystem,
    certify: bool,
    t_start: f64,
    newton_tol: f64,
    max_steps: usize,
) -> PyResult<Py<PyAny>> {
    let opts = TrackerOptions {
        t_start,
        newton_tol,
        max_steps,
        ..TrackerOptions::default()
    };
    let inner = system.inner.clone();
    let report = py
        .detach(move || core::rph_track(&inner, &opts, certify))
        .map_err(to_py_err)?;
    json_to_py(py, &report.to_json())
}

/// `(U, S, V)` with `U @ E @ V == S`.
#[pyfunction]
fn smith_normal_form(matrix: Vec<Vec<i64>>) -> PyResult<(Matrix, Matrix, Matrix)> {
    let n = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("rows must have equal length"));
    }
    let d = core::smith_normal_form(&core::IntMatrix::from_i64(&matrix));
    let conv = |m: &core::IntMatrix| {
        m.to_i64()
            .ok_or_else(|| PyValueError::new_err("entries overflow 64-bit integers"))
    };
    Ok((conv(&d.u)?, conv(&d.s)?, conv(&d.v)?))
}

/// Krawczyk test on the box `x +- radius*|x|`.
#[pyfunction]
#[pyo3(signature = (system, x, radius=1e-6))]
fn krawczyk_test(py: Python<'_>, system: &PySystem, x: Vec<f64>, radius: f64) -> PyResult<Py<PyAny>> {
    system.check_point(&x)?;
    let out = core::krawczyk_test(&system.inner, &x, radius);
    json_to_py(py, &outcome_json(&x, &out))
}

#[pymodule]
fn rph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RphError", m.py().get_type::<RphError>())?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(certify_patchwork, m)?)?;
    m.add_function(wrap_pyfunction!(patchwork_report, m)?)?;
    m.add_function(wrap_pyfunction!(generate_binomials, m)?)?;
    m.add_function(wrap_pyfunction!(solve_binomial_real, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(rph_track, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(krawczyk_test, m)?)?;
    Ok(())
}
