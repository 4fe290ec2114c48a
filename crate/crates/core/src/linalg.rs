//! Elimination-based kernels: reduced row echelon form, rank, determinant,
//! inversion, linear solves and null-space bases.
//!
//! Pivoting policy is backend-specific: the exact backend takes the first
//! nonzero pivot in a column, the float backend takes the largest-magnitude
//! candidate and checks it against the rank threshold `tol * scale`, failing
//! with `RankAmbiguity` when a winning pivot falls inside `[t/8, 8t]`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{PivotClass, Scalar};

/// Result of a full Gauss-Jordan reduction.
pub struct Echelon<S: Scalar> {
    pub reduced: Matrix<S>,
    /// Zero-based pivot column per pivot row, in order.
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn select_pivot<S: Scalar>(
    m: &Matrix<S>,
    col: usize,
    start_row: usize,
    threshold: f64,
) -> Result<Option<usize>> {
    if S::EXACT {
        for i in start_row..m.rows() {
            if !m.get(i, col).is_zero() {
                return Ok(Some(i));
            }
        }
        return Ok(None);
    }
    let mut best: Option<(usize, f64)> = None;
    for i in start_row..m.rows() {
        let mag = m.get(i, col).magnitude();
        if best.is_none_or(|(_, b)| mag > b) {
            best = Some((i, mag));
        }
    }
    match best {
        None => Ok(None),
        Some((i, _)) => match m.get(i, col).classify_pivot(threshold) {
            PivotClass::NonZero => Ok(Some(i)),
            PivotClass::Zero => Ok(None),
            PivotClass::Ambiguous => Err(Error::RankAmbiguity {
                pivot: m.get(i, col).magnitude(),
                low: threshold / 8.0,
                high: threshold * 8.0,
            }),
        },
    }
}

fn swap_rows<S: Scalar>(m: &mut Matrix<S>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let va = m.get(a, j).clone();
        let vb = m.get(b, j).clone();
        m.set(a, j, vb);
        m.set(b, j, va);
    }
}

/// Reduced row echelon form with full pivot bookkeeping.
pub fn rref<S: Scalar>(input: &Matrix<S>) -> Result<Echelon<S>> {
    let mut m = input.clone();
    let threshold = crate::scalar::float_pivot_tolerance() * input.scale_estimate();
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = select_pivot(&m, col, row, threshold)? else {
            // clear the negligible tail so float callers see a clean column
            if !S::EXACT {
                for i in row..m.rows() {
                    m.set(i, col, S::zero());
                }
            }
            continue;
        };
        swap_rows(&mut m, row, p);
        let inv = m
            .get(row, col)
            .inv()
            .expect("selected pivot must be invertible");
        for j in col..m.cols() {
            let v = m.get(row, j).mul(&inv);
            m.set(row, j, v);
        }
        m.set(row, col, S::one());
        for i in 0..m.rows() {
            if i == row || m.get(i, col).is_zero() {
                continue;
            }
            let factor = m.get(i, col).clone();
            for j in col..m.cols() {
                let v = m.get(i, j).sub(&factor.mul(m.get(row, j)));
                m.set(i, j, v);
            }
            m.set(i, col, S::zero());
        }
        pivots.push(col);
        row += 1;
    }
    Ok(Echelon { reduced: m, pivots })
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> Result<usize> {
    Ok(rref(m)?.rank())
}

/// Determinant: single-step fraction-free (Bareiss) elimination on the exact
/// backend, partially pivoted LU on the float backend.
pub fn det<S: Scalar>(input: &Matrix<S>) -> Result<S> {
    if !input.is_square() {
        return Err(Error::shape(format!(
            "determinant of a {}x{} matrix",
            input.rows(),
            input.cols()
        )));
    }
    let n = input.rows();
    if n == 0 {
        return Ok(S::one());
    }
    let mut m = input.clone();
    let threshold = crate::scalar::float_pivot_tolerance() * input.scale_estimate();
    let mut negate = false;

    if S::EXACT {
        // Bareiss: divisions by the previous pivot are exact.
        let mut prev = S::one();
        for k in 0..n - 1 {
            let Some(p) = select_pivot(&m, k, k, threshold)? else {
                return Ok(S::zero());
            };
            if p != k {
                swap_rows(&mut m, k, p);
                negate = !negate;
            }
            let pivot = m.get(k, k).clone();
            let prev_inv = prev.inv().expect("previous pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = pivot
                        .mul(m.get(i, j))
                        .sub(&m.get(i, k).mul(m.get(k, j)));
                    m.set(i, j, num.mul(&prev_inv));
                }
                m.set(i, k, S::zero());
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        return Ok(if negate { d.neg() } else { d });
    }

    // LU with partial pivoting; the determinant is the pivot product.
    let mut acc = S::one();
    for k in 0..n {
        let Some(p) = select_pivot(&m, k, k, threshold)? else {
            return Ok(S::zero());
        };
        if p != k {
            swap_rows(&mut m, k, p);
            negate = !negate;
        }
        let pivot = m.get(k, k).clone();
        acc = acc.mul(&pivot);
        let inv = pivot.inv().expect("selected pivot must be invertible");
        for i in k + 1..n {
            let factor = m.get(i, k).mul(&inv);
            for j in k..n {
                let v = m.get(i, j).sub(&factor.mul(m.get(k, j)));
                m.set(i, j, v);
            }
        }
    }
    Ok(if negate { acc.neg() } else { acc })
}

pub fn inverse<S: Scalar>(input: &Matrix<S>) -> Result<Matrix<S>> {
    if !input.is_square() {
        return Err(Error::shape(format!(
            "inverse of a {}x{} matrix",
            input.rows(),
            input.cols()
        )));
    }
    let n = input.rows();
    let aug = input.hstack(&Matrix::identity(n))?;
    let ech = rref(&aug)?;
    let expected: Vec<usize> = (0..n).collect();
    if ech.pivots != expected {
        return Err(Error::Singular(format!(
            "{n}x{n} matrix has rank {}",
            ech.pivots.iter().filter(|&&c| c < n).count()
        )));
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        ech.reduced.get(i, n + j).clone()
    }))
}

/// A particular solution of `A X = B`, or `None` when inconsistent.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Option<Matrix<S>>> {
    if a.rows() != b.rows() {
        return Err(Error::shape(format!(
            "solve: {} vs {} rows",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let aug = a.hstack(b)?;
    let ech = rref(&aug)?;
    if ech.pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (row, &pc) in ech.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, ech.reduced.get(row, n + j).clone());
        }
    }
    Ok(Some(x))
}

/// `b in R(m)` via the rank test `rank([m | b]) == rank(m)`.
pub fn in_column_space<S: Scalar>(m: &Matrix<S>, b: &Matrix<S>) -> Result<bool> {
    Ok(solve(m, b)?.is_some())
}

/// Orthonormalize the columns of a full-column-rank matrix by modified
/// Gram-Schmidt with a reorthogonalization pass. Float backends only: the
/// normalization leaves the rational field.
pub fn orthonormal_columns<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let mut q = m.clone();
    let rows = q.rows();
    for j in 0..q.cols() {
        for _ in 0..2 {
            for i in 0..j {
                let mut c = S::zero();
                for r in 0..rows {
                    c = c.add(&q.get(r, i).conj().mul(q.get(r, j)));
                }
                for r in 0..rows {
                    let v = q.get(r, j).sub(&c.mul(q.get(r, i)));
                    q.set(r, j, v);
                }
            }
        }
        let norm = (0..rows)
            .map(|r| {
                let m = q.get(r, j).magnitude();
                m * m
            })
            .sum::<f64>()
            .sqrt();
        let inv = S::from_f64(1.0 / norm);
        for r in 0..rows {
            let v = q.get(r, j).mul(&inv);
            q.set(r, j, v);
        }
    }
    q
}

/// Basis of the kernel as the columns of an `n x (n - r)` matrix.
pub fn null_space_basis<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let n = m.cols();
    let ech = rref(m)?;
    let pivot_cols = &ech.pivots;
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Matrix::zeros(n, free_cols.len());
    for (k, &fc) in free_cols.iter().enumerate() {
        basis.set(fc, k, S::one());
        for (row, &pc) in pivot_cols.iter().enumerate() {
            basis.set(pc, k, ech.reduced.get(row, fc).neg());
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{set_float_tolerance, GaussQ, C64};

    fn m(rows: &[&[i64]]) -> Matrix<GaussQ> {
        Matrix::from_i64_rows(rows)
    }

    // the 4x4 instance with a zero fourth row used across the crate
    fn sample_a() -> Matrix<GaussQ> {
        m(&[&[3, 3, 3, 2], &[1, 2, 2, 3], &[2, 1, 1, 3], &[0, 0, 0, 0]])
    }

    /// Independent rank oracle: largest order of a nonvanishing minor,
    /// with minors expanded by Laplace recursion.
    fn laplace_det(mm: &Vec<Vec<GaussQ>>) -> GaussQ {
        let n = mm.len();
        if n == 0 {
            return GaussQ::one();
        }
        let mut acc = GaussQ::zero();
        for j in 0..n {
            if mm[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<GaussQ>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| mm[i][c].clone())
                        .collect()
                })
                .collect();
            let term = mm[0][j].mul(&laplace_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    fn minor_rank(a: &Matrix<GaussQ>) -> usize {
        let n = a.rows().min(a.cols());
        for order in (1..=n).rev() {
            for rs in crate::matrix::combinations(a.rows(), order) {
                for cs in crate::matrix::combinations(a.cols(), order) {
                    let sub = a.submatrix(&rs, &cs).unwrap();
                    let rows: Vec<Vec<GaussQ>> = (0..order)
                        .map(|i| (0..order).map(|j| sub.get(i, j).clone()).collect())
                        .collect();
                    if !laplace_det(&rows).is_zero() {
                        return order;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_of_identity() {
        for n in 1..=5 {
            let i: Matrix<GaussQ> = Matrix::identity(n);
            assert_eq!(rank(&i).unwrap(), n);
        }
    }

    #[test]
    fn rank_of_sample_a() {
        // frozen from the minor-enumeration oracle below
        let a = sample_a();
        assert_eq!(minor_rank(&a), 3);
        assert_eq!(rank(&a).unwrap(), 3);
        // compressing to the first three coordinates drops the rank to 2
        let p = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 0]]);
        let compressed = p.checked_mul(&a).unwrap().checked_mul(&p).unwrap();
        assert_eq!(minor_rank(&compressed), 2);
        assert_eq!(rank(&compressed).unwrap(), 2);
    }

    #[test]
    fn det_examples() {
        let i: Matrix<GaussQ> = Matrix::identity(3);
        assert_eq!(det(&i).unwrap(), GaussQ::one());
        assert_eq!(det(&m(&[&[1, 1], &[0, 1]])).unwrap(), GaussQ::one());
        assert!(det(&m(&[&[1, 2, 3], &[4, 5, 6]])).is_err());
        // cross-check against the Laplace oracle on a dense instance
        let a = m(&[&[2, -1, 3], &[0, 4, 1], &[-2, 5, 2]]);
        let rows: Vec<Vec<GaussQ>> = (0..3)
            .map(|i| (0..3).map(|j| a.get(i, j).clone()).collect())
            .collect();
        assert_eq!(det(&a).unwrap(), laplace_det(&rows));
    }

    #[test]
    fn inverse_examples() {
        let i: Matrix<GaussQ> = Matrix::identity(4);
        assert_eq!(inverse(&i).unwrap(), i);
        let u = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(inverse(&u).unwrap(), m(&[&[1, -1], &[0, 1]]));
        assert!(inverse(&sample_a()).is_err());
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(
            a.checked_mul(&inverse(&a).unwrap()).unwrap(),
            Matrix::identity(2)
        );
    }

    #[test]
    fn solve_and_membership() {
        let a = sample_a();
        let b = a.column(0);
        let x = solve(&a, &b).unwrap().expect("consistent");
        assert_eq!(a.checked_mul(&x).unwrap(), b);
        assert!(in_column_space(&a, &b).unwrap());
        let e4 = Matrix::col_vector(vec![
            GaussQ::zero(),
            GaussQ::zero(),
            GaussQ::zero(),
            GaussQ::one(),
        ]);
        assert!(!in_column_space(&a, &e4).unwrap());
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = sample_a();
        let ns = null_space_basis(&a).unwrap();
        assert_eq!(ns.cols(), 1);
        let prod = a.checked_mul(&ns).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn float_rank_with_threshold() {
        let old = set_float_tolerance(1e-10);
        let a: Matrix<C64> = Matrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&a).unwrap(), 1);
        let mut b = a.clone();
        b.set(1, 1, C64::new(4.0 + 1e-10, 0.0));
        // the residual pivot after elimination sits in the ambiguous band
        assert!(matches!(rank(&b), Err(Error::RankAmbiguity { .. })));
        let mut c = a.clone();
        c.set(1, 1, C64::new(4.5, 0.0));
        assert_eq!(rank(&c).unwrap(), 2);
        set_float_tolerance(old);
    }
}
