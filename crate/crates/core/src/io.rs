//! JSON interchange for matrices and subspace spans.
//!
//! A matrix file carries `rows`, `cols`, a backend tag (`"exact"` or
//! `"f64"`), and a 2-D `entries` array. Exact entries are rational strings
//! `"p/q"` (or plain integers) or `{re, im}` objects of the same; float
//! entries are numbers or `{re, im}` numbers. Exact round-trips are
//! bit-exact and the output is byte-stable across runs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussQ, C64};
use crate::subspace::Subspace;
use num_traits::Zero;

pub const BACKEND_EXACT: &str = "exact";
pub const BACKEND_F64: &str = "f64";

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    backend: String,
    entries: Vec<Vec<Value>>,
}

/// A parsed matrix with its backend decided by the file tag.
#[derive(Debug, Clone)]
pub enum DynMatrix {
    Exact(Matrix<GaussQ>),
    Float(Matrix<C64>),
}

impl DynMatrix {
    pub fn backend(&self) -> &'static str {
        match self {
            DynMatrix::Exact(_) => BACKEND_EXACT,
            DynMatrix::Float(_) => BACKEND_F64,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            DynMatrix::Exact(m) => m.rows(),
            DynMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            DynMatrix::Exact(m) => m.cols(),
            DynMatrix::Float(m) => m.cols(),
        }
    }

    /// Convert to the float backend (exact entries go through `f64`).
    pub fn into_float(self) -> Matrix<C64> {
        match self {
            DynMatrix::Exact(m) => to_float(&m),
            DynMatrix::Float(m) => m,
        }
    }

    pub fn as_exact(&self) -> Result<&Matrix<GaussQ>> {
        match self {
            DynMatrix::Exact(m) => Ok(m),
            DynMatrix::Float(_) => Err(Error::BackendMismatch(
                "expected an exact-backend matrix, found f64".into(),
            )),
        }
    }
}

pub fn to_float(m: &Matrix<GaussQ>) -> Matrix<C64> {
    m.map(|v| v.to_c64())
}

/// A parsed subspace: the span of the file's columns, on the file's backend.
#[derive(Debug, Clone)]
pub enum DynSubspace {
    Exact(Subspace<GaussQ>),
    Float(Subspace<C64>),
}

impl DynSubspace {
    pub fn as_exact(&self) -> Result<&Subspace<GaussQ>> {
        match self {
            DynSubspace::Exact(s) => Ok(s),
            DynSubspace::Float(_) => Err(Error::BackendMismatch(
                "expected an exact-backend subspace, found f64".into(),
            )),
        }
    }

    pub fn into_float(self) -> Result<Subspace<C64>> {
        match self {
            DynSubspace::Exact(s) => Subspace::from_span(&to_float(s.basis())),
            DynSubspace::Float(s) => Ok(s),
        }
    }
}

/// A subspace file is a matrix file whose columns span the subspace; zero
/// and dependent columns are dropped during canonicalization.
pub fn parse_subspace_str(text: &str) -> Result<DynSubspace> {
    match parse_matrix_str(text)? {
        DynMatrix::Exact(m) => Ok(DynSubspace::Exact(Subspace::from_span(&m)?)),
        DynMatrix::Float(m) => Ok(DynSubspace::Float(Subspace::from_span(&m)?)),
    }
}

pub fn parse_subspace_file(path: &std::path::Path) -> Result<DynSubspace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_subspace_str(&text)
}

fn parse_exact_part(v: &Value) -> Result<num_rational::BigRational> {
    match v {
        Value::String(s) => GaussQ::parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(num_rational::BigRational::from_integer(i.into()))
            } else {
                Err(Error::Parse(format!(
                    "exact entries must be integers or \"p/q\" strings, got {n}"
                )))
            }
        }
        other => Err(Error::Parse(format!("bad rational component: {other}"))),
    }
}

fn parse_exact_entry(v: &Value) -> Result<GaussQ> {
    match v {
        Value::Object(map) => {
            let re = map
                .get("re")
                .map(parse_exact_part)
                .transpose()?
                .unwrap_or_else(num_rational::BigRational::zero);
            let im = map
                .get("im")
                .map(parse_exact_part)
                .transpose()?
                .unwrap_or_else(num_rational::BigRational::zero);
            Ok(GaussQ::new(re, im))
        }
        other => Ok(GaussQ::new(
            parse_exact_part(other)?,
            num_rational::BigRational::zero(),
        )),
    }
}

fn parse_float_part(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("float entries must be numbers, got {v}")))
}

fn parse_float_entry(v: &Value) -> Result<C64> {
    match v {
        Value::Object(map) => {
            let re = map.get("re").map(parse_float_part).transpose()?.unwrap_or(0.0);
            let im = map.get("im").map(parse_float_part).transpose()?.unwrap_or(0.0);
            Ok(C64::new(re, im))
        }
        other => Ok(C64::new(parse_float_part(other)?, 0.0)),
    }
}

pub fn parse_matrix_str(text: &str) -> Result<DynMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad matrix file: {e}")))?;
    if file.entries.len() != file.rows || file.entries.iter().any(|r| r.len() != file.cols) {
        return Err(Error::Parse(format!(
            "entries do not form a {}x{} grid",
            file.rows, file.cols
        )));
    }
    match file.backend.as_str() {
        BACKEND_EXACT => {
            let rows = file
                .entries
                .iter()
                .map(|r| r.iter().map(parse_exact_entry).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(DynMatrix::Exact(Matrix::from_rows(rows)?))
        }
        BACKEND_F64 => {
            let rows = file
                .entries
                .iter()
                .map(|r| r.iter().map(parse_float_entry).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(DynMatrix::Float(Matrix::from_rows(rows)?))
        }
        other => Err(Error::Parse(format!(
            "unknown backend tag {other:?}; expected \"exact\" or \"f64\""
        ))),
    }
}

pub fn parse_matrix_file(path: &std::path::Path) -> Result<DynMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_str(&text)
}

fn exact_entry_value(v: &GaussQ) -> Value {
    if v.im().is_zero() {
        Value::String(GaussQ::format_rational(v.re()))
    } else {
        json!({
            "re": GaussQ::format_rational(v.re()),
            "im": GaussQ::format_rational(v.im()),
        })
    }
}

fn float_entry_value(v: &C64) -> Value {
    if v.im == 0.0 {
        json!(v.re)
    } else {
        json!({ "re": v.re, "im": v.im })
    }
}

pub fn exact_matrix_to_json(m: &Matrix<GaussQ>) -> String {
    let entries: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| exact_entry_value(m.get(i, j))).collect())
        .collect();
    let file = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        backend: BACKEND_EXACT.into(),
        entries,
    };
    serde_json::to_string_pretty(&file).expect("matrix file serializes")
}

pub fn float_matrix_to_json(m: &Matrix<C64>) -> String {
    let entries: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| float_entry_value(m.get(i, j))).collect())
        .collect();
    let file = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        backend: BACKEND_F64.into(),
        entries,
    };
    serde_json::to_string_pretty(&file).expect("matrix file serializes")
}

pub fn matrix_to_json(m: &DynMatrix) -> String {
    match m {
        DynMatrix::Exact(m) => exact_matrix_to_json(m),
        DynMatrix::Float(m) => float_matrix_to_json(m),
    }
}
