//! Python bindings: `import pyskewinfo`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use skewinfo::fisher::{check_f, tilde_f};
use skewinfo::matrix::ComplexMatrix;
use skewinfo::membership::VerifyConfig;
use skewinfo::order::OrderMethod;
use skewinfo::quadrature::QuadratureConfig;
use skewinfo::suites::{ObservableKind, Suite, SuiteConfig};
use skewinfo::weight::WeightFunction;
use skewinfo::{Error, HermitianMatrix};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix, Error> {
    ComplexMatrix::from_rows(&rows)
}

fn to_hermitian(rows: Vec<Vec<Complex64>>) -> Result<HermitianMatrix, Error> {
    HermitianMatrix::new(to_matrix(rows)?, HermitianMatrix::DEFAULT_TOL)
}

/// An operator monotone representing function, built from a spec such as
/// `max`, `wyd:0.3` or `bridge:0.5`.
#[pyclass(frozen, skip_from_py_object, name = "FisherFunction")]
#[derive(Clone)]
struct PyFisherFunction(skewinfo::FisherFunction);

#[pymethods]
impl PyFisherFunction {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        skewinfo::FisherFunction::parse(spec).map(Self).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn f_zero(&self) -> f64 {
        self.0.f_zero()
    }

    fn is_regular(&self) -> bool {
        self.0.is_regular()
    }

    fn __call__(&self, t: f64) -> PyResult<f64> {
        self.0.eval(t).map_err(py_err)
    }

    fn check_f(&self, t: f64) -> PyResult<f64> {
        check_f(&self.0, t).map_err(py_err)
    }

    fn tilde_f(&self, t: f64) -> PyResult<f64> {
        tilde_f(&self.0, t).map_err(py_err)
    }

    /// `h(λ)` when the weight is known in closed form, else `None`.
    fn weight(&self, lam: f64) -> Option<f64> {
        self.0.weight().map(|h| h.eval(lam))
    }

    fn sharp(&self) -> Self {
        Self(skewinfo::sharp(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("FisherFunction('{}')", self.0.name())
    }
}

/// A faithful density matrix given as nested lists of complex numbers.
#[pyclass(frozen, name = "DensityMatrix")]
struct PyDensityMatrix(skewinfo::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        to_matrix(rows).and_then(skewinfo::DensityMatrix::new).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_diag(diag: Vec<f64>) -> PyResult<Self> {
        skewinfo::DensityMatrix::from_diag(&diag).map(Self).map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={})", self.0.dim())
    }
}

#[pyfunction]
fn skew_info(f: &PyFisherFunction, rho: &PyDensityMatrix, a: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let a = to_matrix(a).map_err(py_err)?;
    skewinfo::skew_info(&f.0, &rho.0, &a).map_err(py_err)
}

#[pyfunction]
fn variance(rho: &PyDensityMatrix, a: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let a = to_matrix(a).map_err(py_err)?;
    skewinfo::variance(&rho.0, &a).map_err(py_err)
}

/// `-½ Tr([ρ^p, A][ρ^{1-p}, A])` for Hermitian `A`.
#[pyfunction]
fn wyd_direct(p: f64, rho: &PyDensityMatrix, a: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let a = to_hermitian(a).map_err(py_err)?;
    skewinfo::wyd_direct(p, &rho.0, &a).map_err(py_err)
}

#[pyfunction]
fn wyd_weight(p: f64, lam: f64) -> PyResult<f64> {
    skewinfo::weight::wyd_weight(p, lam).map_err(py_err)
}

/// `f(t)` rebuilt from a weight spec such as `wydh:0.3` or `const:0.5`.
#[pyfunction]
fn reconstruct_f(weight: &str, t: f64) -> PyResult<f64> {
    let h = WeightFunction::parse(weight).map_err(py_err)?;
    skewinfo::weight::reconstruct_f(&h, t, &QuadratureConfig::default()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (f, g, method = "auto"))]
fn preceq(f: &PyFisherFunction, g: &PyFisherFunction, method: &str) -> PyResult<bool> {
    let method = OrderMethod::parse(method).map_err(py_err)?;
    skewinfo::preceq_with(&f.0, &g.0, &VerifyConfig::default(), method).map(|v| v.holds).map_err(py_err)
}

#[pyfunction]
fn meet(f: &PyFisherFunction, g: &PyFisherFunction) -> PyResult<PyFisherFunction> {
    skewinfo::meet(&f.0, &g.0).map(PyFisherFunction).map_err(py_err)
}

#[pyfunction]
fn join(f: &PyFisherFunction, g: &PyFisherFunction) -> PyResult<PyFisherFunction> {
    skewinfo::join(&f.0, &g.0).map(PyFisherFunction).map_err(py_err)
}

#[pyfunction]
fn figure1_curve(lam: f64, p_grid: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    skewinfo::weight::figure1_curve(lam, &p_grid).map_err(py_err)
}

/// Runs one verification suite and returns its report as a JSON string.
#[pyfunction]
#[pyo3(signature = (suite, f, dims = vec![3], trials = 1000, seed = 42, tol = 1e-9, k = 2, observables = "mixed"))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    suite: &str,
    f: &PyFisherFunction,
    dims: Vec<usize>,
    trials: usize,
    seed: u64,
    tol: f64,
    k: usize,
    observables: &str,
) -> PyResult<String> {
    run_suite_json(suite, &f.0, dims, trials, seed, tol, k, observables).map_err(py_err)
}

#[allow(clippy::too_many_arguments)]
fn run_suite_json(
    suite: &str,
    f: &skewinfo::FisherFunction,
    dims: Vec<usize>,
    trials: usize,
    seed: u64,
    tol: f64,
    k: usize,
    observables: &str,
) -> Result<String, Error> {
    let suites = Suite::parse(suite)?;
    if suites.len() != 1 {
        return Err(Error::Parse("run_suite takes a single suite name".into()));
    }
    let cfg = SuiteConfig {
        dims,
        trials,
        seed,
        tol,
        k,
        observables: ObservableKind::parse(observables)?,
        ..Default::default()
    };
    let report = skewinfo::run_suite(suites[0], f, &cfg)?;
    serde_json::to_string(&report).map_err(|e| Error::Parse(e.to_string()))
}

#[pymodule]
fn pyskewinfo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFisherFunction>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(skew_info, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(wyd_direct, m)?)?;
    m.add_function(wrap_pyfunction!(wyd_weight, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_f, m)?)?;
    m.add_function(wrap_pyfunction!(preceq, m)?)?;
    m.add_function(wrap_pyfunction!(meet, m)?)?;
    m.add_function(wrap_pyfunction!(join, m)?)?;
    m.add_function(wrap_pyfunction!(figure1_curve, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
