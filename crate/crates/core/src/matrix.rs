//! Dense row-major matrices with value semantics.
//!
//! Every operation returns a fresh matrix; nothing here mutates shared state,
//! so all of it is safe to call concurrently. Checked entry points return
//! `Result` for the documented error cases; the operator impls (`+`, `-`,
//! `*`) panic on shape mismatch and are meant for internal code paths where
//! shapes are already established.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered, strictly increasing list of 1-based indices into `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::shape(format!(
                    "index set must be strictly increasing, got {indices:?}"
                )));
            }
        }
        if indices.first().is_some_and(|&i| i == 0) {
            return Err(Error::IndexOutOfRange("indices are 1-based".into()));
        }
        Ok(IndexSet(indices))
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    fn check_bound(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last > n => Err(Error::IndexOutOfRange(format!(
                "index {last} exceeds bound {n}"
            ))),
            _ => Ok(()),
        }
    }
}

/// All `r`-element subsets of `{1, ..., n}` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<IndexSet> {
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=r).collect();
    loop {
        out.push(IndexSet(cur.clone()));
        // advance to the next combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (r - 1 - i) {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Clone)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("inconsistent row lengths"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
        .expect("literal rows are rectangular")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Column vector from a slice of scalars.
    pub fn col_vector(entries: Vec<S>) -> Self {
        let rows = entries.len();
        Matrix {
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.approx_eq(&S::zero()))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "sub: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "mul: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Matrix<S> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j).add(&aik.mul(rhs.get(k, j)));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose: `(a*)_{ij} = conj(a_{ji})`.
    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn trace(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::shape("trace of a non-square matrix"));
        }
        let mut t = S::zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        Ok(t)
    }

    /// `A^p` by repeated squaring; `A^0 = I`.
    pub fn matrix_power(&self, p: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("power of a non-square matrix"));
        }
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Submatrix `A[rows|cols]` with 1-based index sets.
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        rows.check_bound(self.rows)?;
        cols.check_bound(self.cols)?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.iter() {
            for j in cols.iter() {
                data.push(self.get(i - 1, j - 1).clone());
            }
        }
        Matrix::new(rows.len(), cols.len(), data)
    }

    /// `A(i -> b)`: replace 1-based column `i` with the column vector `b`.
    pub fn replace_column(&self, i: usize, b: &Matrix<S>) -> Result<Self> {
        if i == 0 || i > self.cols {
            return Err(Error::IndexOutOfRange(format!(
                "column {i} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if b.rows != self.rows || b.cols != 1 {
            return Err(Error::shape(format!(
                "replacement column must be {}x1, got {}x{}",
                self.rows, b.rows, b.cols
            )));
        }
        let mut out = self.clone();
        for r in 0..self.rows {
            out.set(r, i - 1, b.get(r, 0).clone());
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Self {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::shape(format!(
                "hstack: {} vs {} rows",
                self.rows, rhs.rows
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "vstack: {} vs {} cols",
                self.cols, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                rhs.get(i - self.rows, j).clone()
            }
        }))
    }

    /// `[[a, b], [c, d]]` from conformable blocks.
    pub fn block_2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// Equality of two products up to the float tolerance scaled by the
    /// operand magnitudes (the backward-error bound for matrix products);
    /// coincides with `==` on exact backends. Verification guards use it to
    /// separate rank faults, whose residuals are of operand scale, from
    /// rounding noise on correct results.
    pub fn approx_eq_at_scale(&self, other: &Self, operand_scale: f64) -> bool {
        if S::EXACT {
            return self == other;
        }
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let bound = crate::scalar::float_tolerance() * operand_scale.max(1.0);
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.sub(b).magnitude() <= bound)
    }

    /// Largest entry magnitude, used to derive float rank thresholds.
    pub fn scale_estimate(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.magnitude())
            .fold(0.0, f64::max)
            .max(1.0)
    }

    /// Stable content hash of the dimensions and entry rendering.
    pub fn content_hash(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.rows.to_string().as_bytes());
        eat(b"x");
        eat(self.cols.to_string().as_bytes());
        for v in &self.data {
            eat(b";");
            eat(v.to_string().as_bytes());
        }
        format!("{h:016x}")
    }
}

/// Backend equality: entrywise exact for the exact backend; for the float
/// backend, normwise with the tolerance scaled by the larger matrix
/// magnitude, `|a_ij - b_ij| <= tol * max(1, |A|_max, |B|_max)`.
impl<S: Scalar> PartialEq for Matrix<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        if S::EXACT {
            return self.data.iter().zip(&other.data).all(|(a, b)| a == b);
        }
        let bound = crate::scalar::float_tolerance()
            * self.scale_estimate().max(other.scale_estimate());
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.sub(b).magnitude() <= bound)
    }
}

fn fmt_matrix<S: Scalar>(m: &Matrix<S>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "[{}x{}]", m.rows, m.cols)?;
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        writeln!(f, "[{}]", row.join(", "))?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matrix(self, f)
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matrix(self, f)
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        self.checked_add(rhs).expect("matrix addition shape")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        self.checked_sub(rhs).expect("matrix subtraction shape")
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.checked_mul(rhs).expect("matrix multiplication shape")
    }
}
