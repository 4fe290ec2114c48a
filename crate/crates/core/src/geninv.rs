//! Classical generalized inverses: Moore-Penrose, Drazin with index, and the
//! outer inverse with prescribed range and null space, plus block-matrix
//! Drazin identities used as independent oracles by the test suites.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Drazin inverse together with the index and eigenprojection `I - A A^D`.
#[derive(Clone, Debug)]
pub struct DrazinResult<S: Scalar> {
    pub d_inverse: Matrix<S>,
    pub index: usize,
    pub eigenprojection: Matrix<S>,
}

/// Smallest `k >= 0` with `rank(a^k) = rank(a^{k+1})`.
pub fn index<S: Scalar>(a: &Matrix<S>) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::shape("index of a non-square matrix"));
    }
    let n = a.rows();
    let mut prev_rank = n; // rank(a^0)
    let mut power = a.clone();
    for k in 0..=n {
        let r = linalg::rank(&power)?;
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
        power = power.checked_mul(a)?;
    }
    // the rank chain n = r_0 > r_1 > ... must stabilize within n steps
    Err(Error::Verification("rank chain failed to stabilize".into()))
}

/// Full-rank factorization `a = f g` with `f` of full column rank (the pivot
/// columns of `a`) and `g` of full row rank (the nonzero reduced rows).
pub fn full_rank_factorization<S: Scalar>(a: &Matrix<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    let ech = linalg::rref(a)?;
    let r = ech.rank();
    let f = Matrix::from_fn(a.rows(), r, |i, j| a.get(i, ech.pivots[j]).clone());
    let g = Matrix::from_fn(r, a.cols(), |i, j| ech.reduced.get(i, j).clone());
    Ok((f, g))
}

/// Moore-Penrose inverse via full-rank factorization. The exact backend
/// evaluates `a^+ = g* (g g*)^{-1} (f* f)^{-1} f*` in rational arithmetic;
/// the float backend orthonormalizes both factors first, which avoids the
/// squared conditioning of the Gram matrices.
pub fn moore_penrose<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let (f, g) = full_rank_factorization(a)?;
    if f.cols() == 0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    if S::EXACT {
        let gs = g.conj_transpose();
        let fs = f.conj_transpose();
        let ggs_inv = linalg::inverse(&g.checked_mul(&gs)?)?;
        let fsf_inv = linalg::inverse(&fs.checked_mul(&f)?)?;
        return gs
            .checked_mul(&ggs_inv)?
            .checked_mul(&fsf_inv)?
            .checked_mul(&fs);
    }
    let qf = linalg::orthonormal_columns(&f);
    let qg = linalg::orthonormal_columns(&g.conj_transpose());
    // a = qf (qf* a qg) qg*, so inverting the middle factor inverts a on
    // its column/row spaces
    let mid = qf.conj_transpose().checked_mul(a)?.checked_mul(&qg)?;
    let mid_inv = linalg::inverse(&mid)?;
    qg.checked_mul(&mid_inv)?
        .checked_mul(&qf.conj_transpose())
}

/// Drazin inverse as `a^k (a^{2k+1})^+ a^k` with `k = index(a)`, verified
/// against the three defining equations before returning.
pub fn drazin<S: Scalar>(a: &Matrix<S>) -> Result<DrazinResult<S>> {
    let k = index(a)?;
    let n = a.rows();
    let d_inverse = if k == 0 {
        linalg::inverse(a)?
    } else {
        let ak = a.matrix_power(k)?;
        let mid = moore_penrose(&a.matrix_power(2 * k + 1)?)?;
        ak.checked_mul(&mid)?.checked_mul(&ak)?
    };
    let ad = &d_inverse * a;
    let da = a * &d_inverse;
    let sa = a.scale_estimate();
    let sd = d_inverse.scale_estimate();
    let a_next = a.matrix_power(k + 1)?;
    let commute_ok = ad.approx_eq_at_scale(&da, sd * sa);
    let outer_ok = (&ad * &d_inverse).approx_eq_at_scale(&d_inverse, sd * sa * sd);
    let ladder_ok = (&d_inverse * &a_next)
        .approx_eq_at_scale(&a.matrix_power(k)?, sd * a_next.scale_estimate());
    if !(commute_ok && outer_ok && ladder_ok) {
        return Err(Error::Verification(
            "computed Drazin inverse violates its defining equations".into(),
        ));
    }
    let eigenprojection = &Matrix::identity(n) - &da;
    Ok(DrazinResult {
        d_inverse,
        index: k,
        eigenprojection,
    })
}

/// Outer inverse `X` with `X a X = X`, `R(X) = s`, `N(X) = t`, computed as
/// `B (C a B)^{-1} C` for `s = R(B)`, `t = N(C)`.
pub fn outer_inverse_st<S: Scalar>(
    a: &Matrix<S>,
    s: &Subspace<S>,
    t: &Subspace<S>,
) -> Result<Matrix<S>> {
    if !a.is_square() || s.ambient_dim() != a.cols() || t.ambient_dim() != a.rows() {
        return Err(Error::shape(
            "outer inverse subspaces do not match the matrix shape",
        ));
    }
    if s.dim() + t.dim() != a.rows() {
        return Err(Error::OuterInverseNonexistent);
    }
    let b = s.basis();
    let c = t.perp()?.basis().conj_transpose();
    let w = c.checked_mul(a)?.checked_mul(b)?;
    let w_inv = linalg::inverse(&w).map_err(|_| Error::OuterInverseNonexistent)?;
    b.checked_mul(&w_inv)?.checked_mul(&c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockOrientation {
    /// `[[a, b], [0, e]]`
    Upper,
    /// `[[e, 0], [b, a]]`
    Lower,
}

/// Drazin inverse of a block-triangular matrix assembled from the closed
/// formula; an independent oracle for [`drazin`] on the assembled matrix.
pub fn drazin_block_triangular<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    e: &Matrix<S>,
    orientation: BlockOrientation,
) -> Result<Matrix<S>> {
    if !a.is_square() || !e.is_square() {
        return Err(Error::shape("diagonal blocks must be square"));
    }
    if b.rows() != a.rows() || b.cols() != e.cols() {
        return Err(Error::shape(format!(
            "off-diagonal block must be {}x{}, got {}x{}",
            a.rows(),
            e.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let da = drazin(a)?;
    let de = drazin(e)?;
    let r = da.index;
    let s = de.index;
    let p = a.rows();
    let q = e.rows();

    // X = sum_{i=0}^{s-1} (a^D)^{i+2} b e^i e^pi
    //   + a^pi sum_{i=0}^{r-1} a^i b (e^D)^{i+2}  -  a^D b e^D
    let mut x = Matrix::zeros(p, q);
    for i in 0..s {
        let term = da
            .d_inverse
            .matrix_power(i + 2)?
            .checked_mul(b)?
            .checked_mul(&e.matrix_power(i)?)?
            .checked_mul(&de.eigenprojection)?;
        x = x.checked_add(&term)?;
    }
    for i in 0..r {
        let term = da
            .eigenprojection
            .checked_mul(&a.matrix_power(i)?)?
            .checked_mul(b)?
            .checked_mul(&de.d_inverse.matrix_power(i + 2)?)?;
        x = x.checked_add(&term)?;
    }
    x = x.checked_sub(
        &da.d_inverse
            .checked_mul(b)?
            .checked_mul(&de.d_inverse)?,
    )?;

    match orientation {
        BlockOrientation::Upper => Matrix::block_2x2(
            &da.d_inverse,
            &x,
            &Matrix::zeros(q, p),
            &de.d_inverse,
        ),
        BlockOrientation::Lower => Matrix::block_2x2(
            &de.d_inverse,
            &Matrix::zeros(q, p),
            &x,
            &da.d_inverse,
        ),
    }
}

/// Drazin inverse of `[[a, 0], [c, 0]]`, namely `[[a^D, 0], [c (a^D)^2, 0]]`.
pub fn drazin_column_bordered<S: Scalar>(a: &Matrix<S>, c: &Matrix<S>) -> Result<Matrix<S>> {
    if !a.is_square() {
        return Err(Error::shape("leading block must be square"));
    }
    if c.cols() != a.cols() {
        return Err(Error::shape(format!(
            "bordering block must have {} columns, got {}",
            a.cols(),
            c.cols()
        )));
    }
    let da = drazin(a)?;
    let lower = c.checked_mul(&da.d_inverse.matrix_power(2)?)?;
    Matrix::block_2x2(
        &da.d_inverse,
        &Matrix::zeros(a.rows(), c.rows()),
        &lower,
        &Matrix::zeros(c.rows(), c.rows()),
    )
}

/// `(m + n)^D = m^D + n^D` whenever `m n = n m = 0`.
pub fn drazin_orthogonal_sum_check<S: Scalar>(m: &Matrix<S>, n: &Matrix<S>) -> Result<bool> {
    if !m.is_square() || m.rows() != n.rows() || m.cols() != n.cols() {
        return Err(Error::shape("orthogonal-sum check needs equal square matrices"));
    }
    if !(m * n).is_zero() || !(n * m).is_zero() {
        return Err(Error::shape("precondition m n = n m = 0 violated"));
    }
    let sum = drazin(&(m + n))?.d_inverse;
    let parts = &drazin(m)?.d_inverse + &drazin(n)?.d_inverse;
    Ok(sum == parts)
}

/// `(m n)^D = m ((n m)^2)^D n`.
pub fn drazin_product_check<S: Scalar>(m: &Matrix<S>, n: &Matrix<S>) -> Result<bool> {
    if !m.is_square() || m.rows() != n.rows() || m.cols() != n.cols() {
        return Err(Error::shape("product check needs equal square matrices"));
    }
    let lhs = drazin(&(m * n))?.d_inverse;
    // the float backend evaluates ((n m)^2)^D through (B^2)^D = (B^D)^2 to
    // avoid inverting at the squared condition number
    let nm2_d = if S::EXACT {
        drazin(&(n * m).matrix_power(2)?)?.d_inverse
    } else {
        drazin(&(n * m))?.d_inverse.matrix_power(2)?
    };
    let rhs = &(m * &nm2_d) * n;
    Ok(lhs == rhs)
}

/// `rank([[a, a d], [e a, b]]) = rank(a) + rank(b - e a d)`.
pub fn bordered_rank_check<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    d: &Matrix<S>,
    e: &Matrix<S>,
) -> Result<bool> {
    let ad = a.checked_mul(d)?;
    let ea = e.checked_mul(a)?;
    if ea.cols() != a.cols() || ad.rows() != a.rows() || b.rows() != ea.rows() || b.cols() != ad.cols() {
        return Err(Error::shape("bordered blocks are not conformable"));
    }
    let m = Matrix::block_2x2(a, &ad, &ea, b)?;
    let lhs = linalg::rank(&m)?;
    let rhs = linalg::rank(a)? + linalg::rank(&b.checked_sub(&ea.checked_mul(d)?)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussQ;
    use crate::subspace;

    fn m(rows: &[&[i64]]) -> Matrix<GaussQ> {
        Matrix::from_i64_rows(rows)
    }

    fn penrose_equations_hold(a: &Matrix<GaussQ>, x: &Matrix<GaussQ>) -> bool {
        let axa = &(a * x) * a;
        let xax = &(x * a) * x;
        let ax = a * x;
        let xa = x * a;
        axa == *a && xax == *x && ax == ax.conj_transpose() && xa == xa.conj_transpose()
    }

    #[test]
    fn index_examples() {
        assert_eq!(index(&m(&[&[2, 1], &[1, 1]])).unwrap(), 0);
        assert_eq!(index(&m(&[&[0, 1], &[0, 0]])).unwrap(), 2);
        assert_eq!(index(&Matrix::<GaussQ>::zeros(3, 3)).unwrap(), 1);
        assert!(index(&m(&[&[1, 2, 3], &[4, 5, 6]])).is_err());
    }

    #[test]
    fn moore_penrose_examples() {
        let i: Matrix<GaussQ> = Matrix::identity(3);
        assert_eq!(moore_penrose(&i).unwrap(), i);
        assert_eq!(
            moore_penrose(&Matrix::<GaussQ>::zeros(2, 3)).unwrap(),
            Matrix::zeros(3, 2)
        );
        let ones = m(&[&[1, 1], &[1, 1]]);
        let mp = moore_penrose(&ones).unwrap();
        let quarter = Matrix::from_fn(2, 2, |_, _| GaussQ::ratio(1, 4));
        assert_eq!(mp, quarter);
        assert!(penrose_equations_hold(&ones, &mp));
        // rectangular case
        let r = m(&[&[1, 0, 2], &[0, 1, 1]]);
        assert!(penrose_equations_hold(&r, &moore_penrose(&r).unwrap()));
    }

    #[test]
    fn drazin_examples() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let d = drazin(&a).unwrap();
        assert_eq!(d.index, 0);
        assert_eq!(d.d_inverse, linalg::inverse(&a).unwrap());
        assert!(d.eigenprojection.is_zero());

        let nil = m(&[&[0, 1], &[0, 0]]);
        let d = drazin(&nil).unwrap();
        assert_eq!(d.index, 2);
        assert!(d.d_inverse.is_zero());
        assert_eq!(d.eigenprojection, Matrix::identity(2));
    }

    #[test]
    fn drazin_defining_equations_on_dense_instance() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let d = drazin(&a).unwrap();
        let x = &d.d_inverse;
        assert_eq!(&(x * &a) * x, *x);
        assert_eq!(&a * x, x * &a);
        assert_eq!(
            x * &a.matrix_power(d.index + 1).unwrap(),
            a.matrix_power(d.index).unwrap()
        );
        // eigenprojection is idempotent and annihilates the inverse
        let pi = &d.eigenprojection;
        assert_eq!(pi * pi, *pi);
        assert!((pi * x).is_zero());
    }

    #[test]
    fn outer_inverse_reproduces_drazin_and_inverse() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let d = drazin(&a).unwrap();
        let ak = a.matrix_power(d.index).unwrap();
        let s = subspace::column_space(&ak).unwrap();
        let t = subspace::null_space(&ak).unwrap();
        assert_eq!(outer_inverse_st(&a, &s, &t).unwrap(), d.d_inverse);

        let inv_case = m(&[&[2, 1], &[1, 1]]);
        let x = outer_inverse_st(&inv_case, &Subspace::full(2), &Subspace::zero(2)).unwrap();
        assert_eq!(x, linalg::inverse(&inv_case).unwrap());
    }

    #[test]
    fn outer_inverse_nonexistence_is_reported() {
        // rank(C A B) < dim s: take a nilpotent a and s = t = complementary
        // spaces chosen so C a B is singular.
        let a = m(&[&[0, 1], &[0, 0]]);
        let s = Subspace::from_span(&m(&[&[1], &[0]])).unwrap();
        let t = Subspace::from_span(&m(&[&[1], &[0]])).unwrap();
        assert!(matches!(
            outer_inverse_st(&a, &s, &t),
            Err(Error::OuterInverseNonexistent)
        ));
    }

    #[test]
    fn block_triangular_oracle_edges() {
        // b = 0 gives the block diagonal of the Drazin inverses
        let a = m(&[&[2, 0], &[0, 3]]);
        let e = m(&[&[0, 1], &[0, 0]]);
        let zero_b = Matrix::zeros(2, 2);
        let x = drazin_block_triangular(&a, &zero_b, &e, BlockOrientation::Upper).unwrap();
        let expected = Matrix::block_2x2(
            &drazin(&a).unwrap().d_inverse,
            &Matrix::zeros(2, 2),
            &Matrix::zeros(2, 2),
            &drazin(&e).unwrap().d_inverse,
        )
        .unwrap();
        assert_eq!(x, expected);

        // invertible a with scalar e = 0: the i = 0 term gives a^{-2} b
        let a = m(&[&[2, 1], &[1, 1]]);
        let b = m(&[&[1], &[2]]);
        let e = Matrix::zeros(1, 1);
        let x = drazin_block_triangular(&a, &b, &e, BlockOrientation::Upper).unwrap();
        let a_inv_sq = linalg::inverse(&a).unwrap().matrix_power(2).unwrap();
        let expected_corner = a_inv_sq.checked_mul(&b).unwrap();
        for i in 0..2 {
            assert_eq!(x.get(i, 2), expected_corner.get(i, 0));
        }
        // and it agrees with drazin() on the assembled matrix
        let assembled = Matrix::block_2x2(&a, &b, &Matrix::zeros(1, 2), &e).unwrap();
        assert_eq!(x, drazin(&assembled).unwrap().d_inverse);
    }

    #[test]
    fn block_triangular_lower_matches_assembled() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let e = m(&[&[0, 0], &[1, 0]]);
        let b = m(&[&[1, 2], &[3, 4]]);
        let x = drazin_block_triangular(&a, &b, &e, BlockOrientation::Lower).unwrap();
        let assembled = Matrix::block_2x2(&e, &Matrix::zeros(2, 2), &b, &a).unwrap();
        assert_eq!(x, drazin(&assembled).unwrap().d_inverse);
    }

    #[test]
    fn column_bordered_oracle() {
        // c = 0: block diagonal of a^D and 0
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = drazin_column_bordered(&a, &Matrix::zeros(1, 2)).unwrap();
        let assembled = Matrix::block_2x2(
            &a,
            &Matrix::zeros(2, 1),
            &Matrix::zeros(1, 2),
            &Matrix::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(x, drazin(&assembled).unwrap().d_inverse);

        // a = I: the corner is c itself
        let i2: Matrix<GaussQ> = Matrix::identity(2);
        let c = m(&[&[5, -3]]);
        let x = drazin_column_bordered(&i2, &c).unwrap();
        assert_eq!(x.get(2, 0), c.get(0, 0));
        assert_eq!(x.get(2, 1), c.get(0, 1));
        let assembled =
            Matrix::block_2x2(&i2, &Matrix::zeros(2, 1), &c, &Matrix::zeros(1, 1)).unwrap();
        assert_eq!(x, drazin(&assembled).unwrap().d_inverse);
    }

    #[test]
    fn orthogonal_sum_and_product_checks() {
        let p = m(&[&[1, 0], &[0, 0]]);
        let q = m(&[&[0, 0], &[0, 2]]);
        assert!(drazin_orthogonal_sum_check(&p, &q).unwrap());
        assert!(drazin_orthogonal_sum_check(&Matrix::zeros(2, 2), &q).unwrap());
        // precondition violation
        let r = m(&[&[0, 1], &[0, 0]]);
        assert!(drazin_orthogonal_sum_check(&p, &r).is_err());

        let any = m(&[&[1, 2], &[3, 4]]);
        let i2: Matrix<GaussQ> = Matrix::identity(2);
        assert!(drazin_product_check(&any, &i2).unwrap());
        assert!(drazin_product_check(&r, &any).unwrap());
    }

    #[test]
    fn bordered_rank_identity() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let b = m(&[&[1, 0], &[0, 1]]);
        let zero = Matrix::zeros(2, 2);
        // d = e = 0: rank diag(a, b) = rank a + rank b
        assert!(bordered_rank_check(&a, &b, &zero, &zero).unwrap());
        // b = e a d: rank of the bordered matrix collapses to rank(a)
        let d = m(&[&[1, 1], &[0, 1]]);
        let e = m(&[&[2, 0], &[1, 1]]);
        let b = &(&e * &a) * &d;
        assert!(bordered_rank_check(&a, &b, &d, &e).unwrap());
        let big = Matrix::block_2x2(&a, &(&a * &d), &(&e * &a), &b).unwrap();
        assert_eq!(linalg::rank(&big).unwrap(), linalg::rank(&a).unwrap());
    }
}
