//! Subspaces of C^n with canonical bases, orthogonal projectors, and oblique
//! projectors for complementary pairs.
//!
//! A subspace keeps a full-column-rank basis together with a canonical
//! column-reduced echelon basis of the same span; two subspaces are equal iff
//! their canonical matrices are equal. Orthonormal bases are never formed:
//! projector math stays inside the scalar field via `B (B* B)^{-1} B*`.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone)]
pub struct Subspace<S: Scalar> {
    ambient: usize,
    basis: Matrix<S>,
    canonical: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Span of the columns of `span`; zero or dependent columns are dropped.
    pub fn from_span(span: &Matrix<S>) -> Result<Self> {
        let ech = linalg::rref(&span.transpose())?;
        // Nonzero rows of the reduced transpose, written back as columns,
        // give the canonical column-echelon basis of the span.
        let d = ech.rank();
        let canonical = Matrix::from_fn(span.rows(), d, |i, j| ech.reduced.get(j, i).clone());
        // Prefer the original pivot columns as the working basis.
        let col_ech = linalg::rref(span)?;
        let basis = if col_ech.rank() == d {
            Matrix::from_fn(span.rows(), d, |i, j| {
                span.get(i, col_ech.pivots[j]).clone()
            })
        } else {
            canonical.clone()
        };
        Ok(Subspace {
            ambient: span.rows(),
            basis,
            canonical,
        })
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::identity(n),
            canonical: Matrix::identity(n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::zeros(n, 0),
            canonical: Matrix::zeros(n, 0),
        }
    }

    /// Span of the standard basis vectors `e_i` for 1-based `axes`.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        let mut b = Matrix::zeros(n, axes.len());
        for (j, &ax) in axes.iter().enumerate() {
            if ax == 0 || ax > n {
                return Err(Error::IndexOutOfRange(format!("axis {ax} of {n}")));
            }
            b.set(ax - 1, j, S::one());
        }
        Subspace::from_span(&b)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn canonical(&self) -> &Matrix<S> {
        &self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains(&self, v: &Matrix<S>) -> Result<bool> {
        if v.rows() != self.ambient || v.cols() != 1 {
            return Err(Error::shape(format!(
                "membership test needs a {}x1 vector",
                self.ambient
            )));
        }
        linalg::in_column_space(&self.basis, v)
    }

    /// Orthogonal complement, via `R(B)^perp = N(B*)`.
    pub fn perp(&self) -> Result<Self> {
        Subspace::from_span(&linalg::null_space_basis(&self.basis.conj_transpose())?)
    }
}

impl<S: Scalar> PartialEq for Subspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical == other.canonical
    }
}

impl<S: Scalar> std::fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of C^{}, canonical = {:?})",
            self.dim(),
            self.ambient,
            self.canonical
        )
    }
}

/// Column space `R(a)`.
pub fn column_space<S: Scalar>(a: &Matrix<S>) -> Result<Subspace<S>> {
    Subspace::from_span(a)
}

/// Null space `N(a)`.
pub fn null_space<S: Scalar>(a: &Matrix<S>) -> Result<Subspace<S>> {
    Subspace::from_span(&linalg::null_space_basis(a)?)
}

/// Orthogonal projector `P_L = B (B* B)^{-1} B*` for any basis `B` of `l`.
pub fn orthogonal_projector<S: Scalar>(l: &Subspace<S>) -> Result<Matrix<S>> {
    let b = l.basis();
    if l.is_zero() {
        return Ok(Matrix::zeros(l.ambient_dim(), l.ambient_dim()));
    }
    let bs = b.conj_transpose();
    let gram = bs.checked_mul(b)?;
    let gram_inv = linalg::inverse(&gram)?;
    b.checked_mul(&gram_inv)?.checked_mul(&bs)
}

/// Oblique projector `P_{s,t}` onto `s` along `t` for a complementary pair,
/// computed as `[B_s | 0] [B_s | B_t]^{-1}`.
pub fn oblique_projector<S: Scalar>(s: &Subspace<S>, t: &Subspace<S>) -> Result<Matrix<S>> {
    let n = s.ambient_dim();
    if t.ambient_dim() != n {
        return Err(Error::shape("projector subspaces in different ambients"));
    }
    if s.dim() + t.dim() != n {
        return Err(Error::NotComplementary(format!(
            "dim {} + dim {} != {n}",
            s.dim(),
            t.dim()
        )));
    }
    let stacked = s.basis().hstack(t.basis())?;
    let inv = linalg::inverse(&stacked)
        .map_err(|_| Error::NotComplementary("s + t does not span, or s and t overlap".into()))?;
    let left = s.basis().hstack(&Matrix::zeros(n, t.dim()))?;
    left.checked_mul(&inv)
}

/// `P^2 = P`?
pub fn is_projector<S: Scalar>(p: &Matrix<S>) -> Result<bool> {
    if !p.is_square() {
        return Err(Error::shape("projector test needs a square matrix"));
    }
    Ok(p.checked_mul(p)? == *p)
}

/// `P^2 = P` and `P = P*`?
pub fn is_orthogonal_projector<S: Scalar>(p: &Matrix<S>) -> Result<bool> {
    Ok(is_projector(p)? && p.is_hermitian())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussQ;

    fn m(rows: &[&[i64]]) -> Matrix<GaussQ> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn column_space_of_identity_and_zero() {
        let full = column_space(&Matrix::<GaussQ>::identity(3)).unwrap();
        assert_eq!(full, Subspace::full(3));
        let z = column_space(&Matrix::<GaussQ>::zeros(3, 3)).unwrap();
        assert_eq!(z, Subspace::zero(3));
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn null_space_of_identity_and_zero() {
        assert_eq!(
            null_space(&Matrix::<GaussQ>::identity(4)).unwrap(),
            Subspace::zero(4)
        );
        assert_eq!(
            null_space(&Matrix::<GaussQ>::zeros(3, 3)).unwrap(),
            Subspace::full(3)
        );
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let b1 = m(&[&[1, 0], &[1, 1], &[0, 2]]);
        // same span, different generators (columns mixed and scaled)
        let b2 = m(&[&[2, 1, 3], &[4, 1, 5], &[4, 0, 4]]);
        let s1 = Subspace::from_span(&b1).unwrap();
        let s2 = Subspace::from_span(&b2).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(
            orthogonal_projector(&s1).unwrap(),
            orthogonal_projector(&s2).unwrap()
        );
    }

    #[test]
    fn zero_and_dependent_columns_are_dropped() {
        let span = m(&[&[1, 0, 2, 1], &[0, 0, 0, 1], &[2, 0, 4, 0]]);
        let s = Subspace::from_span(&span).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s, Subspace::from_span(&m(&[&[1, 1], &[0, 1], &[2, 0]])).unwrap());
    }

    #[test]
    fn coordinate_projector_is_diagonal() {
        let l = Subspace::<GaussQ>::coordinate(4, &[1, 2, 3]).unwrap();
        let p = orthogonal_projector(&l).unwrap();
        assert_eq!(p, m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 0]]));
        assert_eq!(
            orthogonal_projector(&Subspace::<GaussQ>::zero(3)).unwrap(),
            Matrix::zeros(3, 3)
        );
    }

    #[test]
    fn diagonal_line_projector() {
        let l = Subspace::from_span(&m(&[&[1], &[1]])).unwrap();
        let p = orthogonal_projector(&l).unwrap();
        let half = GaussQ::ratio(1, 2);
        let expected = Matrix::from_fn(2, 2, |_, _| half.clone());
        assert_eq!(p, expected);
        assert!(is_orthogonal_projector(&p).unwrap());
    }

    #[test]
    fn oblique_projector_contract() {
        // orthogonal complementary pair reduces to the orthogonal projector
        let s = Subspace::from_span(&m(&[&[1], &[1]])).unwrap();
        let t = s.perp().unwrap();
        let p = oblique_projector(&s, &t).unwrap();
        assert_eq!(p, orthogonal_projector(&s).unwrap());

        // complementary but oblique
        let s = Subspace::from_span(&m(&[&[1], &[0]])).unwrap();
        let t = Subspace::from_span(&m(&[&[1], &[1]])).unwrap();
        let p = oblique_projector(&s, &t).unwrap();
        assert!(is_projector(&p).unwrap());
        assert!(!is_orthogonal_projector(&p).unwrap());
        for j in 0..1 {
            let v = s.basis().column(j);
            assert_eq!(p.checked_mul(&v).unwrap(), v);
            let w = t.basis().column(j);
            assert!(p.checked_mul(&w).unwrap().is_zero());
        }
        let q = oblique_projector(&t, &s).unwrap();
        assert_eq!(p.checked_add(&q).unwrap(), Matrix::identity(2));

        // non-complementary pair is rejected
        let overlap = Subspace::from_span(&m(&[&[1], &[0]])).unwrap();
        assert!(oblique_projector(&s, &overlap).is_err());
    }

    #[test]
    fn projector_predicates() {
        let d = m(&[&[1, 0], &[0, 0]]);
        assert!(is_projector(&d).unwrap());
        assert!(is_orthogonal_projector(&d).unwrap());
        let idem = m(&[&[1, 1], &[0, 0]]);
        assert!(is_projector(&idem).unwrap());
        assert!(!is_orthogonal_projector(&idem).unwrap());
        assert!(is_projector(&m(&[&[1, 2, 3], &[4, 5, 6]])).is_err());
    }

    #[test]
    fn perp_of_column_space_is_null_of_adjoint() {
        let a = m(&[&[1, 2], &[0, 1], &[1, 0]]);
        let lhs = column_space(&a).unwrap().perp().unwrap();
        let rhs = null_space(&a.conj_transpose()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
