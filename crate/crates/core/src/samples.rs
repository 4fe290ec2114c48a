//! Two worked 4x4 instances with known closed-form results, kept as fixtures
//! for the verification suites, the CLI, and the acceptance tests.
//!
//! Both use `L = span(e1, e2, e3)` inside C^4 and have index-2 compressions.
//! Sample A additionally ships a near-miss candidate `X` that reproduces the
//! `AX`/`XA` projector pair without being the constrained inverse, the
//! right-hand side with its known minimum-norm solution, an explicit
//! bordering pair `(F, G)`, and a Jordan basis of `P_L A P_L`.

use crate::matrix::Matrix;
use crate::scalar::GaussQ;
use crate::subspace::Subspace;

pub struct SampleA {
    pub a: Matrix<GaussQ>,
    pub l: Subspace<GaussQ>,
    /// The constrained inverse of `(a, l)`.
    pub inverse: Matrix<GaussQ>,
    /// Near-miss candidate: satisfies both projector equations, yet differs
    /// from the inverse in its fourth column.
    pub candidate: Matrix<GaussQ>,
    /// `A X` for the inverse (and for the candidate).
    pub a_times_inverse: Matrix<GaussQ>,
    /// `X A` for the inverse (and for the candidate).
    pub inverse_times_a: Matrix<GaussQ>,
    /// Consistent right-hand side for the constrained system.
    pub rhs: Matrix<GaussQ>,
    /// Minimum-norm solution of `P_L A x = rhs`.
    pub x_min: Matrix<GaussQ>,
    /// Bordering blocks with `R(f) = T` and `N(g) = S`.
    pub f: Matrix<GaussQ>,
    pub g: Matrix<GaussQ>,
    /// Columns form a Jordan basis of `P_L A P_L` (one eigenvector for 6,
    /// a length-2 chain for 0, one extra kernel vector).
    pub jordan_p: Matrix<GaussQ>,
}

pub struct SampleB {
    pub a: Matrix<GaussQ>,
    pub l: Subspace<GaussQ>,
    pub inverse: Matrix<GaussQ>,
    /// `A X = I - W2`.
    pub a_times_inverse: Matrix<GaussQ>,
    /// `X A = I - W1`.
    pub inverse_times_a: Matrix<GaussQ>,
    /// `A[{1,2}|{1,2}]`.
    pub block_12: Matrix<GaussQ>,
    /// `(I - W1)[N|{1,2}]`.
    pub iw1_cols_12: Matrix<GaussQ>,
    /// `(I - W2)[{1,2}|N]`.
    pub iw2_rows_12: Matrix<GaussQ>,
    /// Basis vector of `S`.
    pub s_basis: Matrix<GaussQ>,
}

fn q(p: i64, d: i64) -> GaussQ {
    GaussQ::ratio(p, d)
}

fn z() -> GaussQ {
    GaussQ::from_int(0)
}

fn rational_rows(rows: &[&[(i64, i64)]]) -> Matrix<GaussQ> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(p, d)| q(p, d)).collect())
            .collect(),
    )
    .expect("literal rows are rectangular")
}

fn first_three_axes() -> Subspace<GaussQ> {
    Subspace::coordinate(4, &[1, 2, 3]).expect("axes in range")
}

pub fn sample_a() -> SampleA {
    let a = Matrix::from_i64_rows(&[
        &[3, 3, 3, 2],
        &[1, 2, 2, 3],
        &[2, 1, 1, 3],
        &[0, 0, 0, 0],
    ]);
    let inverse = rational_rows(&[
        &[(1, 12), (1, 12), (1, 12), (0, 1)],
        &[(1, 24), (1, 24), (1, 24), (0, 1)],
        &[(1, 24), (1, 24), (1, 24), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1)],
    ]);
    let mut candidate = inverse.clone();
    candidate.set(1, 3, GaussQ::from_int(1));
    candidate.set(2, 3, GaussQ::from_int(-1));
    let a_times_inverse = rational_rows(&[
        &[(1, 2), (1, 2), (1, 2), (0, 1)],
        &[(1, 4), (1, 4), (1, 4), (0, 1)],
        &[(1, 4), (1, 4), (1, 4), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1)],
    ]);
    let inverse_times_a = rational_rows(&[
        &[(1, 2), (1, 2), (1, 2), (2, 3)],
        &[(1, 4), (1, 4), (1, 4), (1, 3)],
        &[(1, 4), (1, 4), (1, 4), (1, 3)],
        &[(0, 1), (0, 1), (0, 1), (0, 1)],
    ]);
    let rhs = Matrix::col_vector(vec![
        GaussQ::from_int(6),
        GaussQ::from_int(3),
        GaussQ::from_int(3),
        z(),
    ]);
    let x_min = Matrix::col_vector(vec![GaussQ::from_int(1), q(1, 2), q(1, 2), z()]);
    let f = Matrix::from_i64_rows(&[&[0, 0, -1], &[0, -1, 1], &[0, 1, 0], &[-1, 0, 0]]);
    let g = Matrix::from_i64_rows(&[&[0, 0, 0, -1], &[0, -1, 1, 0], &[-1, 2, 0, 0]]);
    let jordan_p = Matrix::from_i64_rows(&[
        &[2, 0, 1, 0],
        &[1, -1, -1, 0],
        &[1, 1, 0, 0],
        &[0, 0, 0, 1],
    ]);
    SampleA {
        a,
        l: first_three_axes(),
        inverse,
        candidate,
        a_times_inverse,
        inverse_times_a,
        rhs,
        x_min,
        f,
        g,
        jordan_p,
    }
}

pub fn sample_b() -> SampleB {
    let a = Matrix::from_i64_rows(&[
        &[1, 1, 1, 1],
        &[0, 1, 2, 3],
        &[1, 1, 1, 1],
        &[1, 1, 1, 1],
    ]);
    let inv_row = [(2, 27), (1, 9), (4, 27), (0, 1)];
    let inverse = rational_rows(&[&inv_row, &inv_row, &inv_row, &[(0, 1); 4]]);
    let ai_row = [(2, 9), (1, 3), (4, 9), (0, 1)];
    let a_times_inverse = rational_rows(&[&ai_row, &ai_row, &ai_row, &ai_row]);
    let ia_row = [(2, 9), (1, 3), (4, 9), (5, 9)];
    let inverse_times_a = rational_rows(&[&ia_row, &ia_row, &ia_row, &[(0, 1); 4]]);
    let block_12 = Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
    let iw1_cols_12 = rational_rows(&[
        &[(2, 9), (1, 3)],
        &[(2, 9), (1, 3)],
        &[(2, 9), (1, 3)],
        &[(0, 1), (0, 1)],
    ]);
    let iw2_rows_12 = rational_rows(&[&ai_row, &ai_row]);
    let s_basis = Matrix::col_vector(vec![
        GaussQ::from_int(1),
        GaussQ::from_int(1),
        GaussQ::from_int(1),
        z(),
    ]);
    SampleB {
        a,
        l: first_three_axes(),
        inverse,
        a_times_inverse,
        inverse_times_a,
        block_12,
        iw1_cols_12,
        iw2_rows_12,
        s_basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdd::{self, BddContext};
    use crate::geninv;
    use crate::linalg;
    use crate::matrix::IndexSet;
    use crate::scalar::Scalar;
    use crate::subspace;

    #[test]
    fn sample_a_reproduces_known_matrices() {
        let s = sample_a();
        let computed = bdd::bdd_inverse(&s.a, &s.l).unwrap();
        assert_eq!(computed, s.inverse);
        assert_eq!(&s.a * &s.inverse, s.a_times_inverse);
        assert_eq!(&s.inverse * &s.a, s.inverse_times_a);
        // the candidate reproduces the same products
        assert_eq!(&s.a * &s.candidate, s.a_times_inverse);
        assert_eq!(&s.candidate * &s.a, s.inverse_times_a);
        assert!(s.candidate != s.inverse);
    }

    #[test]
    fn projector_zeroes_the_fourth_column() {
        // frozen from multiplying by hand: compressing onto the first three
        // axes wipes column four and keeps the rest
        let s = sample_a();
        let p_l = subspace::orthogonal_projector(&s.l).unwrap();
        let compressed = &s.a * &p_l;
        let mut expected = s.a.clone();
        for i in 0..4 {
            expected.set(i, 3, GaussQ::from_int(0));
        }
        assert_eq!(compressed, expected);
    }

    #[test]
    fn sample_a_index_chain() {
        let s = sample_a();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        assert_eq!(linalg::rank(ctx.core()).unwrap(), 2);
        assert_eq!(ctx.core_index(), 2);
        assert_eq!(ctx.k(), 2);
        let eq = bdd::index_equivalences(&s.a, &s.l).unwrap();
        assert!(eq.all_equal());
        assert_eq!(eq.core, 2);
    }

    #[test]
    fn sample_a_candidate_passes_projectors_fails_characterizations() {
        let s = sample_a();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        assert_eq!(ctx.projector_range(), &s.a_times_inverse);
        assert_eq!(ctx.projector_null(), &s.inverse_times_a);
        for v in ctx.characterize(&s.candidate).unwrap() {
            assert!(!v.holds, "{} unexpectedly held for the near-miss", v.id);
        }
        for v in ctx.characterize(&s.inverse).unwrap() {
            assert!(v.holds, "{} failed for the inverse: {:?}", v.id, v.witness);
        }
    }

    #[test]
    fn sample_a_bordering_pair_spans_the_right_spaces() {
        let s = sample_a();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        assert_eq!(subspace::column_space(&s.f).unwrap(), *ctx.t());
        assert_eq!(linalg::rank(&s.f).unwrap(), 3);
        assert_eq!(linalg::rank(&s.g).unwrap(), 3);
        assert_eq!(subspace::null_space(&s.g).unwrap(), *ctx.s());
    }

    #[test]
    fn sample_a_jordan_basis_block_structure() {
        let s = sample_a();
        let p = &s.jordan_p;
        let core = {
            let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
            ctx.core().clone()
        };
        let p_inv = linalg::inverse(p).unwrap();
        let j = &(&p_inv * &core) * p;
        let expected = {
            let mut e: Matrix<GaussQ> = Matrix::zeros(4, 4);
            e.set(0, 0, GaussQ::from_int(6));
            e.set(1, 2, GaussQ::from_int(1));
            e
        };
        assert_eq!(j, expected);
    }

    #[test]
    fn sample_b_reproduces_known_matrices() {
        let s = sample_b();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        assert_eq!(ctx.inverse(), &s.inverse);
        assert_eq!(ctx.core_index(), 2);
        let id: Matrix<GaussQ> = Matrix::identity(4);
        assert_eq!(&id - ctx.w1(), s.inverse_times_a);
        assert_eq!(&id - ctx.w2(), s.a_times_inverse);
        assert_eq!(*ctx.s(), subspace::column_space(&s.s_basis).unwrap());
        assert_eq!(ctx.t().dim(), 3);
        // each null basis vector is annihilated by the squared core
        let core_sq = ctx.core().matrix_power(2).unwrap();
        for j in 0..3 {
            let v = ctx.t().basis().column(j);
            assert!((&core_sq * &v).is_zero());
        }
    }

    #[test]
    fn sample_b_squared_core_from_brute_force() {
        // frozen from a direct triple-loop multiplication oracle
        let s = sample_b();
        let p = Matrix::<GaussQ>::from_i64_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 0],
        ]);
        let core = &(&p * &s.a) * &p;
        let mut brute: Matrix<GaussQ> = Matrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = GaussQ::from_int(0);
                for t in 0..4 {
                    acc = acc.add(&core.get(i, t).mul(core.get(t, j)));
                }
                brute.set(i, j, acc);
            }
        }
        let expected = Matrix::<GaussQ>::from_i64_rows(&[
            &[2, 3, 4, 0],
            &[2, 3, 4, 0],
            &[2, 3, 4, 0],
            &[0, 0, 0, 0],
        ]);
        assert_eq!(brute, expected);
        assert_eq!(core.matrix_power(2).unwrap(), expected);
    }

    #[test]
    fn sample_b_submatrix_blocks_and_route() {
        let s = sample_b();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        let alpha = IndexSet::new(vec![1, 2]).unwrap();
        let beta = IndexSet::new(vec![1, 2]).unwrap();
        assert_eq!(s.a.submatrix(&alpha, &beta).unwrap(), s.block_12);
        assert_eq!(linalg::det(&s.block_12).unwrap(), GaussQ::from_int(1));
        assert_eq!(
            linalg::inverse(&s.block_12).unwrap(),
            Matrix::from_i64_rows(&[&[1, -1], &[0, 1]])
        );
        let id: Matrix<GaussQ> = Matrix::identity(4);
        let iw1 = &id - ctx.w1();
        let iw2 = &id - ctx.w2();
        assert_eq!(
            iw1.submatrix(&IndexSet::full(4), &beta).unwrap(),
            s.iw1_cols_12
        );
        assert_eq!(
            iw2.submatrix(&alpha, &IndexSet::full(4)).unwrap(),
            s.iw2_rows_12
        );
        assert_eq!(
            ctx.submatrix_representation(&alpha, &beta).unwrap(),
            s.inverse
        );
        assert_eq!(
            ctx.auto_select_submatrix().unwrap(),
            (alpha.clone(), beta.clone())
        );
        // every other valid block found by enumeration gives the same matrix
        let mut found_alternative = false;
        for a2 in crate::matrix::combinations(4, 2) {
            for b2 in crate::matrix::combinations(4, 2) {
                if (a2.clone(), b2.clone()) == (alpha.clone(), beta.clone()) {
                    continue;
                }
                let block = s.a.submatrix(&a2, &b2).unwrap();
                if linalg::det(&block).unwrap().is_zero() {
                    continue;
                }
                found_alternative = true;
                assert_eq!(
                    ctx.submatrix_representation(&a2, &b2).unwrap(),
                    s.inverse,
                    "blocks {:?} {:?}",
                    a2.as_slice(),
                    b2.as_slice()
                );
            }
        }
        assert!(found_alternative);
    }

    #[test]
    fn sample_b_all_representations_agree() {
        let s = sample_b();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        for (name, rep) in ctx.all_representations().unwrap() {
            assert_eq!(rep, s.inverse, "representation {name}");
        }
        for (name, rep) in ctx.projector_mp_representations().unwrap() {
            assert_eq!(rep, s.inverse, "representation {name}");
        }
        assert_eq!(ctx.restriction_representation().unwrap(), s.inverse);
        assert!(ctx.rank_equation_holds(&s.inverse).unwrap());
        let perturbed = {
            let mut p = s.inverse.clone();
            p.set(0, 0, p.get(0, 0).add(&GaussQ::from_int(1)));
            p
        };
        assert!(!ctx.rank_equation_holds(&perturbed).unwrap());
    }

    #[test]
    fn sample_a_restriction_route() {
        let s = sample_a();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        assert_eq!(ctx.restriction_representation().unwrap(), s.inverse);
    }

    #[test]
    fn sample_b_oblique_projector_matches_product() {
        let s = sample_b();
        let ctx = BddContext::new(s.a.clone(), s.l.clone()).unwrap();
        let expected = ctx.p_l() * &(&s.a * &s.inverse);
        assert_eq!(ctx.projector_st(), &expected);
        assert!(subspace::is_projector(ctx.projector_st()).unwrap());
        assert!(!subspace::is_orthogonal_projector(&s.a_times_inverse).unwrap());
        assert!(subspace::is_projector(&s.a_times_inverse).unwrap());
    }

    #[test]
    fn sample_b_drazin_pin() {
        // the compressed 3x3 block determines the inverse entries
        let s = sample_b();
        let a_l: Matrix<GaussQ> = Matrix::from_i64_rows(&[&[1, 1, 1], &[0, 1, 2], &[1, 1, 1]]);
        let d = geninv::drazin(&a_l).unwrap();
        assert_eq!(d.index, 2);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.d_inverse.get(i, j), s.inverse.get(i, j));
            }
        }
    }
}
