//! Python bindings for the exact (Gaussian-rational) backend: the matrix and
//! subspace types, the generalized inverses, the constrained solvers, and
//! the verification suites.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyList, PyTuple};

use ginv_core::bdd::{self, BddContext};
use ginv_core::error::Error;
use ginv_core::geninv;
use ginv_core::io;
use ginv_core::linalg;
use ginv_core::matrix;
use ginv_core::scalar::GaussQ;
use ginv_core::solver;
use ginv_core::subspace;
use ginv_core::suites::{self, CorpusBackend, SuiteConfig, SuiteKind};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Singular(msg) => PyZeroDivisionError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_rational_part(value: &Bound<'_, PyAny>) -> PyResult<num_rational::BigRational> {
    if let Ok(i) = value.extract::<i64>() {
        return Ok(num_rational::BigRational::from_integer(i.into()));
    }
    if let Ok(s) = value.extract::<String>() {
        return GaussQ::parse_rational(&s).map_err(to_py_err);
    }
    Err(PyValueError::new_err(
        "exact entries must be ints or rational strings like \"2/3\" (floats are not exact)",
    ))
}

fn parse_entry(value: &Bound<'_, PyAny>) -> PyResult<GaussQ> {
    if let Ok(pair) = value.cast::<PyTuple>() {
        if pair.len() != 2 {
            return Err(PyValueError::new_err(
                "complex entries are (re, im) pairs of ints or rational strings",
            ));
        }
        let re = parse_rational_part(&pair.get_item(0)?)?;
        let im = parse_rational_part(&pair.get_item(1)?)?;
        return Ok(GaussQ::new(re, im));
    }
    Ok(GaussQ::new(
        parse_rational_part(value)?,
        num_rational::BigRational::from_integer(0.into()),
    ))
}

/// Dense matrix over exact Gaussian rationals.
#[pyclass(frozen, skip_from_py_object, name = "Matrix", module = "ginv")]
#[derive(Clone)]
struct PyMatrix {
    inner: matrix::Matrix<GaussQ>,
}

impl PyMatrix {
    fn wrap(inner: matrix::Matrix<GaussQ>) -> Self {
        PyMatrix { inner }
    }
}

#[pymethods]
impl PyMatrix {
    /// Build from a list of rows; entries are ints, rational strings
    /// ("1/12"), or (re, im) pairs.
    #[new]
    fn new(rows: &Bound<'_, PyList>) -> PyResult<Self> {
        let mut data = Vec::new();
        for row in rows.iter() {
            let row = row.cast::<PyList>().map_err(|_| {
                PyValueError::new_err("matrix rows must be lists of entries")
            })?;
            data.push(
                row.iter()
                    .map(|v| parse_entry(&v))
                    .collect::<PyResult<Vec<_>>>()?,
            );
        }
        Ok(PyMatrix::wrap(
            matrix::Matrix::from_rows(data).map_err(to_py_err)?,
        ))
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyMatrix::wrap(matrix::Matrix::identity(n))
    }

    #[staticmethod]
    fn zeros(rows: usize, cols: usize) -> Self {
        PyMatrix::wrap(matrix::Matrix::zeros(rows, cols))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let m = io::parse_matrix_str(text).map_err(to_py_err)?;
        Ok(PyMatrix::wrap(m.as_exact().map_err(to_py_err)?.clone()))
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    /// Entry at zero-based (i, j) rendered as a rational (or `a+bi`) string.
    fn entry(&self, i: usize, j: usize) -> PyResult<String> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyValueError::new_err("entry index out of range"));
        }
        Ok(self.inner.get(i, j).to_string())
    }

    fn to_lists(&self) -> Vec<Vec<String>> {
        (0..self.inner.rows())
            .map(|i| {
                (0..self.inner.cols())
                    .map(|j| self.inner.get(i, j).to_string())
                    .collect()
            })
            .collect()
    }

    fn to_json(&self) -> String {
        io::exact_matrix_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.to_lists())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyMatrix::wrap(
            self.inner.checked_add(&other.inner).map_err(to_py_err)?,
        ))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyMatrix::wrap(
            self.inner.checked_sub(&other.inner).map_err(to_py_err)?,
        ))
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyMatrix::wrap(
            self.inner.checked_mul(&other.inner).map_err(to_py_err)?,
        ))
    }

    fn conj_transpose(&self) -> Self {
        PyMatrix::wrap(self.inner.conj_transpose())
    }

    fn transpose(&self) -> Self {
        PyMatrix::wrap(self.inner.transpose())
    }

    fn power(&self, p: usize) -> PyResult<Self> {
        Ok(PyMatrix::wrap(self.inner.matrix_power(p).map_err(to_py_err)?))
    }

    fn rank(&self) -> PyResult<usize> {
        linalg::rank(&self.inner).map_err(to_py_err)
    }

    fn det(&self) -> PyResult<String> {
        Ok(linalg::det(&self.inner).map_err(to_py_err)?.to_string())
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(PyMatrix::wrap(linalg::inverse(&self.inner).map_err(to_py_err)?))
    }

    fn moore_penrose(&self) -> PyResult<Self> {
        Ok(PyMatrix::wrap(
            geninv::moore_penrose(&self.inner).map_err(to_py_err)?,
        ))
    }

    /// Matrix index: the smallest k with rank(A^k) = rank(A^{k+1}).
    fn index(&self) -> PyResult<usize> {
        geninv::index(&self.inner).map_err(to_py_err)
    }

    /// Drazin inverse as (inverse, index, eigenprojection).
    fn drazin(&self) -> PyResult<(Self, usize, Self)> {
        let d = geninv::drazin(&self.inner).map_err(to_py_err)?;
        Ok((
            PyMatrix::wrap(d.d_inverse),
            d.index,
            PyMatrix::wrap(d.eigenprojection),
        ))
    }
}

/// Subspace of C^n with a canonical basis.
#[pyclass(frozen, skip_from_py_object, name = "Subspace", module = "ginv")]
#[derive(Clone)]
struct PySubspace {
    inner: subspace::Subspace<GaussQ>,
}

#[pymethods]
impl PySubspace {
    /// Span of the columns of the given matrix.
    #[new]
    fn new(span: &PyMatrix) -> PyResult<Self> {
        Ok(PySubspace {
            inner: subspace::Subspace::from_span(&span.inner).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn full(n: usize) -> Self {
        PySubspace {
            inner: subspace::Subspace::full(n),
        }
    }

    /// Span of the 1-based standard basis vectors.
    #[staticmethod]
    fn coordinate(n: usize, axes: Vec<usize>) -> PyResult<Self> {
        Ok(PySubspace {
            inner: subspace::Subspace::coordinate(n, &axes).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    fn basis(&self) -> PyMatrix {
        PyMatrix::wrap(self.inner.basis().clone())
    }

    fn orthogonal_projector(&self) -> PyResult<PyMatrix> {
        Ok(PyMatrix::wrap(
            subspace::orthogonal_projector(&self.inner).map_err(to_py_err)?,
        ))
    }

    fn perp(&self) -> PyResult<Self> {
        Ok(PySubspace {
            inner: self.inner.perp().map_err(to_py_err)?,
        })
    }

    fn contains(&self, v: &PyMatrix) -> PyResult<bool> {
        self.inner.contains(&v.inner).map_err(to_py_err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Subspace(dim {} of C^{})",
            self.inner.dim(),
            self.inner.ambient_dim()
        )
    }
}

/// Classical constrained inverse `P_L (A P_L + P_Lperp)^{-1}`.
#[pyfunction]
fn bott_duffin(a: &PyMatrix, l: &PySubspace) -> PyResult<PyMatrix> {
    Ok(PyMatrix::wrap(
        bdd::bott_duffin(&a.inner, &l.inner).map_err(to_py_err)?,
    ))
}

/// Drazin-based constrained inverse `P_L (A P_L + P_Lperp)^D`.
#[pyfunction]
fn bdd_inverse(a: &PyMatrix, l: &PySubspace) -> PyResult<PyMatrix> {
    Ok(PyMatrix::wrap(
        bdd::bdd_inverse(&a.inner, &l.inner).map_err(to_py_err)?,
    ))
}

/// Outer inverse with prescribed range and null space.
#[pyfunction]
fn outer_inverse(a: &PyMatrix, s: &PySubspace, t: &PySubspace) -> PyResult<PyMatrix> {
    Ok(PyMatrix::wrap(
        geninv::outer_inverse_st(&a.inner, &s.inner, &t.inner).map_err(to_py_err)?,
    ))
}

/// The five associated index values as a dict.
#[pyfunction]
fn index_equivalences(
    py: Python<'_>,
    a: &PyMatrix,
    l: &PySubspace,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let eq = bdd::index_equivalences(&a.inner, &l.inner).map_err(to_py_err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("shifted_right", eq.shifted_right)?;
    d.set_item("shifted_left", eq.shifted_left)?;
    d.set_item("shifted_core", eq.shifted_core)?;
    d.set_item("core", eq.core)?;
    d.set_item("adjoint_core", eq.adjoint_core)?;
    d.set_item("satisfied", eq.satisfied())?;
    Ok(d.unbind())
}

/// Every equivalent representation route as a list of (name, Matrix).
#[pyfunction]
fn representations(a: &PyMatrix, l: &PySubspace) -> PyResult<Vec<(String, PyMatrix)>> {
    let ctx = BddContext::new(a.inner.clone(), l.inner.clone()).map_err(to_py_err)?;
    let mut out = Vec::new();
    for (name, m) in ctx.all_representations().map_err(to_py_err)? {
        out.push((name.to_string(), PyMatrix::wrap(m)));
    }
    for (name, m) in ctx.projector_mp_representations().map_err(to_py_err)? {
        out.push((name.to_string(), PyMatrix::wrap(m)));
    }
    out.push((
        "restriction".to_string(),
        PyMatrix::wrap(ctx.restriction_representation().map_err(to_py_err)?),
    ));
    Ok(out)
}

/// Evaluate every characterization criterion set against a candidate,
/// returning (criterion id, holds) pairs.
#[pyfunction]
fn characterize(a: &PyMatrix, l: &PySubspace, x: &PyMatrix) -> PyResult<Vec<(String, bool)>> {
    let ctx = BddContext::new(a.inner.clone(), l.inner.clone()).map_err(to_py_err)?;
    Ok(ctx
        .characterize(&x.inner)
        .map_err(to_py_err)?
        .into_iter()
        .map(|v| (v.id, v.holds))
        .collect())
}

/// Minimum-norm solution of `P_L A x = b` with its family generator.
#[pyfunction]
fn solve_constrained(
    a: &PyMatrix,
    l: &PySubspace,
    b: &PyMatrix,
) -> PyResult<(PyMatrix, PyMatrix)> {
    let ctx = BddContext::new(a.inner.clone(), l.inner.clone()).map_err(to_py_err)?;
    let sol = solver::solve_constrained(&ctx, &b.inner).map_err(to_py_err)?;
    Ok((
        PyMatrix::wrap(sol.x_min),
        PyMatrix::wrap(sol.family_generator),
    ))
}

/// Particular solution of `A x + y = beta` with `x in L`, `y in Lperp`.
#[pyfunction]
#[pyo3(signature = (a, l, beta, enforce_core = false))]
fn solve_restricted(
    a: &PyMatrix,
    l: &PySubspace,
    beta: &PyMatrix,
    enforce_core: bool,
) -> PyResult<(PyMatrix, PyMatrix, bool)> {
    let ctx = BddContext::new(a.inner.clone(), l.inner.clone()).map_err(to_py_err)?;
    let sol = solver::solve_restricted(&ctx, &beta.inner, enforce_core).map_err(to_py_err)?;
    Ok((PyMatrix::wrap(sol.x), PyMatrix::wrap(sol.y), sol.unique))
}

/// Minimum-norm solution through bordered determinant ratios.
#[pyfunction]
fn cramer_min_p_norm(a: &PyMatrix, l: &PySubspace, b: &PyMatrix) -> PyResult<PyMatrix> {
    let ctx = BddContext::new(a.inner.clone(), l.inner.clone()).map_err(to_py_err)?;
    Ok(PyMatrix::wrap(
        solver::cramer_min_p_norm(&ctx, &b.inner).map_err(to_py_err)?,
    ))
}

/// Run a verification suite over a seeded random corpus; returns the JSON
/// report. Suites: thm31, thm32, thm4, thm5, lemmas, solver, all.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 7, count = 50))]
fn verify(suite: &str, seed: u64, count: usize) -> PyResult<String> {
    let kinds: Vec<SuiteKind> = if suite == "all" {
        SuiteKind::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(to_py_err)?]
    };
    let cfg = SuiteConfig {
        seed,
        perturbations: 20,
        samples: 50,
    };
    let report = suites::run_corpus(suite, &kinds, CorpusBackend::Exact, &cfg, count, false);
    serde_json::to_string_pretty(&report)
        .map_err(|e| PyValueError::new_err(format!("report serialization: {e}")))
}

#[pymodule]
fn ginv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySubspace>()?;
    m.add_function(wrap_pyfunction!(bott_duffin, m)?)?;
    m.add_function(wrap_pyfunction!(bdd_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(outer_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(index_equivalences, m)?)?;
    m.add_function(wrap_pyfunction!(representations, m)?)?;
    m.add_function(wrap_pyfunction!(characterize, m)?)?;
    m.add_function(wrap_pyfunction!(solve_constrained, m)?)?;
    m.add_function(wrap_pyfunction!(solve_restricted, m)?)?;
    m.add_function(wrap_pyfunction!(cramer_min_p_norm, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
