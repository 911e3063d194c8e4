//! Python bindings. Matrices cross the boundary as lists of rows, partitions
//! as 1-based strings such as `"1,2|3"`.

use gaussent::measures::{
    contangle_of_m_squared, eof_of_m_squared, m_squared_across, tangle_of_m_squared, OneToRestOptions,
};
use gaussent::separability::{self, Bipartition};
use gaussent::state::{self, CovMatrix};
use gaussent::symmetric;
use gaussent::symplectic::{symplectic_spectrum, STRUCTURAL_TOL};
use gaussent::tripartite::{self, SharingMeasure};
use gaussent::Error;
use nalgebra::DMatrix;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numeric(m) => PyArithmeticError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for gaussent::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn partition(text: &str) -> PyResult<Bipartition> {
    Bipartition::parse(text).or_raise()
}

fn sharing(name: &str) -> PyResult<SharingMeasure> {
    match name {
        "contangle" => Ok(SharingMeasure::Contangle),
        "tangle" => Ok(SharingMeasure::Tangle),
        _ => Err(PyValueError::new_err(format!("unknown measure {name:?}; use 'contangle' or 'tangle'"))),
    }
}

/// Gaussian state given by its covariance matrix (xpxp, vacuum = identity).
#[pyclass(name = "GaussianState", module = "gaussent", frozen)]
pub struct PyState {
    inner: state::GaussianState,
}

impl From<state::GaussianState> for PyState {
    fn from(inner: state::GaussianState) -> Self {
        Self { inner }
    }
}

impl PyState {
    fn cm(&self) -> &CovMatrix {
        self.inner.cm()
    }

    fn across(&self, part: &str) -> PyResult<f64> {
        m_squared_across(self.cm(), &partition(part)?, &OneToRestOptions::default()).or_raise()
    }
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (matrix, mean = None, tol = STRUCTURAL_TOL))]
    fn new(matrix: Vec<Vec<f64>>, mean: Option<Vec<f64>>, tol: f64) -> PyResult<Self> {
        let dim = matrix.len();
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let flat: Vec<f64> = matrix.into_iter().flatten().collect();
        let cm = CovMatrix::from_row_slice(dim, &flat).or_raise()?;
        let mean = mean.map(nalgebra::DVector::from_vec);
        Ok(state::GaussianState::with_tolerance(cm, mean, tol).or_raise()?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(state::state_from_json(text).or_raise()?.into())
    }

    #[staticmethod]
    fn vacuum(n: usize) -> PyResult<Self> {
        Ok(state::vacuum(n).or_raise()?.into())
    }

    #[staticmethod]
    fn thermal(nu: Vec<f64>) -> PyResult<Self> {
        Ok(state::thermal(&nu).or_raise()?.into())
    }

    #[staticmethod]
    fn two_mode_squeezed(r: f64) -> Self {
        state::two_mode_squeezed(r).into()
    }

    #[staticmethod]
    fn fully_symmetric_pure(n: usize, b: f64) -> PyResult<Self> {
        Ok(symmetric::fully_symmetric_pure(n, b).or_raise()?.into())
    }

    #[staticmethod]
    fn fully_symmetric_mixed(n: usize, traced: usize, b: f64) -> PyResult<Self> {
        Ok(symmetric::fully_symmetric_mixed(n, traced, b).or_raise()?.into())
    }

    #[staticmethod]
    fn pure_three_mode(a1: f64, a2: f64, a3: f64) -> PyResult<Self> {
        Ok(tripartite::pure_three_mode(a1, a2, a3).or_raise()?.into())
    }

    #[staticmethod]
    fn ghzw(a: f64) -> PyResult<Self> {
        Ok(tripartite::ghzw(a).or_raise()?.into())
    }

    #[staticmethod]
    fn four_mode(s: f64, a: f64) -> PyResult<Self> {
        Ok(tripartite::four_mode_promiscuous(s, a).or_raise()?.into())
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        rows(self.cm().matrix())
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean().iter().copied().collect()
    }

    fn to_json(&self) -> String {
        state::to_json(&self.inner)
    }

    fn det(&self) -> f64 {
        self.cm().det()
    }

    fn seralian(&self) -> f64 {
        self.cm().seralian()
    }

    fn local_mixedness(&self, mode: usize) -> PyResult<f64> {
        if mode >= self.inner.n_modes() {
            return Err(PyValueError::new_err(format!("mode {mode} out of range")));
        }
        Ok(self.cm().local_mixedness(mode))
    }

    /// 0-based mode indices, kept in the given order.
    fn reduce(&self, modes: Vec<usize>) -> PyResult<Self> {
        Ok(state::reduce(&self.inner, &modes).or_raise()?.into())
    }

    fn symplectic_spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(symplectic_spectrum(self.cm()).or_raise()?.values().to_vec())
    }

    fn purity(&self) -> PyResult<f64> {
        state::purity(&self.inner).or_raise()
    }

    fn linear_entropy(&self) -> PyResult<f64> {
        state::linear_entropy(&self.inner).or_raise()
    }

    fn von_neumann_entropy(&self) -> PyResult<f64> {
        state::von_neumann_entropy(&self.inner).or_raise()
    }

    fn renyi_entropy(&self, p: f64) -> PyResult<f64> {
        state::renyi_entropy(&self.inner, p).or_raise()
    }

    fn pt_spectrum(&self, partition: &str) -> PyResult<Vec<f64>> {
        Ok(separability::pt_spectrum(self.cm(), &self::partition(partition)?).or_raise()?.values().to_vec())
    }

    #[pyo3(signature = (partition, tol = STRUCTURAL_TOL))]
    fn is_ppt(&self, partition: &str, tol: f64) -> PyResult<bool> {
        separability::is_ppt(self.cm(), &self::partition(partition)?, tol).or_raise()
    }

    fn log_negativity(&self, partition: &str) -> PyResult<f64> {
        separability::log_negativity(self.cm(), &self::partition(partition)?).or_raise()
    }

    fn negativity(&self, partition: &str) -> PyResult<f64> {
        separability::negativity(self.cm(), &self::partition(partition)?).or_raise()
    }

    /// Needs a partition with a single-mode side.
    fn gaussian_eof(&self, partition: &str) -> PyResult<f64> {
        Ok(eof_of_m_squared(self.across(partition)?))
    }

    fn contangle(&self, partition: &str) -> PyResult<f64> {
        Ok(contangle_of_m_squared(self.across(partition)?))
    }

    fn gaussian_tangle(&self, partition: &str) -> PyResult<f64> {
        Ok(tangle_of_m_squared(self.across(partition)?))
    }

    /// Two-mode symmetric states only.
    fn eof_symmetric(&self) -> PyResult<f64> {
        separability::eof_symmetric(&separability::two_mode_standard_form(self.cm()).or_raise()?).or_raise()
    }

    fn block_log_negativity(&self, k: usize) -> PyResult<f64> {
        symmetric::block_log_negativity(&self.inner, k).or_raise()
    }

    fn one_by_k_log_negativity(&self, k: usize) -> PyResult<f64> {
        symmetric::one_by_k_log_negativity(&self.inner, k).or_raise()
    }

    fn ole(&self) -> PyResult<f64> {
        symmetric::ole(&self.inner).or_raise()
    }

    /// Minimum over probes of the one-to-rest measure minus the pairwise ones.
    #[pyo3(signature = (measure = "contangle"))]
    fn residual(&self, measure: &str) -> PyResult<ResidualReport> {
        let r = tripartite::residual_contangle_generic(self.cm(), sharing(measure)?, &OneToRestOptions::default())
            .or_raise()?;
        Ok(r.into())
    }

    /// (probe, lhs, rhs, slack) for every probe mode.
    #[pyo3(signature = (measure = "tangle"))]
    fn monogamy(&self, measure: &str) -> PyResult<Vec<(usize, f64, f64, f64)>> {
        let rep = tripartite::monogamy_check(self.cm(), sharing(measure)?, &OneToRestOptions::default()).or_raise()?;
        Ok(rep.entries.iter().map(|e| (e.probe, e.lhs, e.rhs, e.slack)).collect())
    }

    fn ppt_class(&self) -> PyResult<&'static str> {
        Ok(tripartite::ppt_class(self.cm(), STRUCTURAL_TOL).or_raise()?.as_str())
    }

    fn __repr__(&self) -> String {
        format!("GaussianState(n_modes={})", self.inner.n_modes())
    }
}

#[pyclass(module = "gaussent", frozen, get_all)]
pub struct ResidualReport {
    value: f64,
    probe_mode: usize,
    one_to_rest: f64,
    pairwise: (f64, f64),
}

impl From<tripartite::ResidualContangleReport> for ResidualReport {
    fn from(r: tripartite::ResidualContangleReport) -> Self {
        Self {
            value: r.value,
            probe_mode: r.probe_mode,
            one_to_rest: r.one_to_rest,
            pairwise: (r.pairwise[0], r.pairwise[1]),
        }
    }
}

#[pymethods]
impl ResidualReport {
    fn __repr__(&self) -> String {
        format!("ResidualReport(value={}, probe_mode={})", self.value, self.probe_mode)
    }
}

#[pyfunction]
fn residual_contangle_pure(a1: f64, a2: f64, a3: f64) -> PyResult<ResidualReport> {
    Ok(tripartite::residual_contangle_pure(a1, a2, a3).or_raise()?.into())
}

#[pyfunction]
fn ghzw_residual(a: f64) -> PyResult<f64> {
    tripartite::ghzw_residual(a).or_raise()
}

#[pyfunction]
fn asymptotic_1k_bound(n: usize, k: usize) -> PyResult<f64> {
    symmetric::asymptotic_1k_bound(n, k).or_raise()
}

#[pyfunction]
fn classify_purities(mu1: f64, mu2: f64, mu: f64) -> &'static str {
    separability::classify_purities(mu1, mu2, mu).as_str()
}

#[pyfunction]
fn average_log_negativity(mu1: f64, mu2: f64, mu: f64) -> PyResult<f64> {
    separability::average_log_negativity(mu1, mu2, mu).or_raise()
}

/// f(x), the von Neumann entropy of a mode with symplectic eigenvalue x.
#[pyfunction]
fn entropy_function(x: f64) -> f64 {
    state::entropy_function(x)
}

#[pymodule]
#[pyo3(name = "gaussent")]
fn gaussent_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<ResidualReport>()?;
    m.add_function(wrap_pyfunction!(residual_contangle_pure, m)?)?;
    m.add_function(wrap_pyfunction!(ghzw_residual, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_1k_bound, m)?)?;
    m.add_function(wrap_pyfunction!(classify_purities, m)?)?;
    m.add_function(wrap_pyfunction!(average_log_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_function, m)?)?;
    Ok(())
}
