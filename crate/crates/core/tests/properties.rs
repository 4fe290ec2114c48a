//! Property tests over randomly generated exact matrices: field/rank
//! invariants, adjoint algebra, projector laws, generalized-inverse defining
//! equations, and serialization round-trips.

use proptest::prelude::*;

use ginv_core::geninv;
use ginv_core::io;
use ginv_core::linalg;
use ginv_core::matrix::Matrix;
use ginv_core::scalar::{GaussQ, Scalar};
use ginv_core::subspace::{self, Subspace};

fn mat_strategy(max_n: usize) -> impl Strategy<Value = Matrix<GaussQ>> {
    (1..=max_n)
        .prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)
                .prop_map(move |rows| {
                    Matrix::from_rows(
                        rows.into_iter()
                            .map(|r| r.into_iter().map(GaussQ::from_int).collect())
                            .collect(),
                    )
                    .unwrap()
                })
        })
}

fn complex_mat_strategy(n: usize) -> impl Strategy<Value = Matrix<GaussQ>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3, -3i64..=3), n), n).prop_map(
        move |rows| {
            Matrix::from_rows(
                rows.into_iter()
                    .map(|r| {
                        r.into_iter()
                            .map(|(re, im)| GaussQ::complex_ratio(re, 1, im, 1))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap()
        },
    )
}

/// Multiplication oracle independent of `Matrix::checked_mul`: plain
/// index-summed products over cloned scalars.
fn naive_mul(a: &Matrix<GaussQ>, b: &Matrix<GaussQ>) -> Matrix<GaussQ> {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = GaussQ::from_int(0);
        for t in 0..a.cols() {
            acc = acc.add(&a.get(i, t).mul(b.get(t, j)));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity_is_width(a in mat_strategy(5)) {
        let rank = linalg::rank(&a).unwrap();
        let nullity = subspace::null_space(&a).unwrap().dim();
        prop_assert_eq!(rank + nullity, a.cols());
    }

    #[test]
    fn det_of_inverse_is_reciprocal(a in mat_strategy(4)) {
        let d = linalg::det(&a).unwrap();
        if let Ok(inv) = linalg::inverse(&a) {
            prop_assert!(!d.is_zero());
            prop_assert_eq!(d.mul(&linalg::det(&inv).unwrap()), GaussQ::from_int(1));
        } else {
            prop_assert!(d.is_zero());
        }
    }

    #[test]
    fn rank_chain_stabilizes_at_index(a in mat_strategy(5)) {
        let n = a.rows();
        let k = geninv::index(&a).unwrap();
        let mut prev = n;
        let mut stabilized_at = None;
        let mut power = Matrix::identity(n);
        for j in 1..=n + 1 {
            power = power.checked_mul(&a).unwrap();
            let r = linalg::rank(&power).unwrap();
            prop_assert!(r <= prev);
            if r == prev && stabilized_at.is_none() {
                stabilized_at = Some(j - 1);
            }
            prev = r;
        }
        prop_assert_eq!(stabilized_at.unwrap_or(n), k);
    }

    #[test]
    fn adjoint_is_involutive_antihomomorphism(a in complex_mat_strategy(3), b in complex_mat_strategy(3)) {
        prop_assert_eq!(a.conj_transpose().conj_transpose(), a.clone());
        let lhs = naive_mul(&a, &b).conj_transpose();
        let rhs = naive_mul(&b.conj_transpose(), &a.conj_transpose());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projector_is_basis_independent(a in mat_strategy(4), t in mat_strategy(4)) {
        let s = subspace::column_space(&a).unwrap();
        if s.dim() == 0 {
            return Ok(());
        }
        // multiply the basis by a random invertible mixing matrix
        let d = s.dim();
        let mix = Matrix::from_fn(d, d, |i, j| t.get(i % t.rows(), j % t.cols()).clone());
        if linalg::inverse(&mix).is_err() {
            return Ok(());
        }
        let remixed = Subspace::from_span(&s.basis().checked_mul(&mix).unwrap()).unwrap();
        prop_assert_eq!(&remixed, &s);
        prop_assert_eq!(
            subspace::orthogonal_projector(&remixed).unwrap(),
            subspace::orthogonal_projector(&s).unwrap()
        );
    }

    #[test]
    fn oblique_projector_splits_basis_vectors(a in mat_strategy(4)) {
        let s = subspace::column_space(&a).unwrap();
        let t = s.perp().unwrap();
        let p = subspace::oblique_projector(&s, &t).unwrap();
        for j in 0..s.dim() {
            let v = s.basis().column(j);
            prop_assert_eq!(p.checked_mul(&v).unwrap(), v);
        }
        for j in 0..t.dim() {
            let w = t.basis().column(j);
            prop_assert!(p.checked_mul(&w).unwrap().is_zero());
        }
        let q = subspace::oblique_projector(&t, &s).unwrap();
        let n = a.rows();
        prop_assert_eq!(p.checked_add(&q).unwrap(), Matrix::identity(n));
    }

    #[test]
    fn range_perp_is_null_of_adjoint(a in complex_mat_strategy(4)) {
        let lhs = subspace::column_space(&a).unwrap().perp().unwrap();
        let rhs = subspace::null_space(&a.conj_transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn penrose_and_drazin_equations(a in mat_strategy(4)) {
        let mp = geninv::moore_penrose(&a).unwrap();
        let ax = a.checked_mul(&mp).unwrap();
        let xa = mp.checked_mul(&a).unwrap();
        prop_assert_eq!(ax.checked_mul(&a).unwrap(), a.clone());
        prop_assert_eq!(xa.checked_mul(&mp).unwrap(), mp.clone());
        prop_assert!(ax.is_hermitian());
        prop_assert!(xa.is_hermitian());

        let d = geninv::drazin(&a).unwrap();
        let x = &d.d_inverse;
        prop_assert_eq!(&(x * &a) * x, x.clone());
        prop_assert_eq!(&a * x, x * &a);
        prop_assert_eq!(
            x * &a.matrix_power(d.index + 1).unwrap(),
            a.matrix_power(d.index).unwrap()
        );
        prop_assert!(d.index <= a.rows());
        // eigenprojection laws
        let pi = &d.eigenprojection;
        prop_assert_eq!(pi * pi, pi.clone());
        prop_assert!((pi * x).is_zero());
    }

    #[test]
    fn drazin_is_outer_inverse_on_core_spaces(a in mat_strategy(4)) {
        let d = geninv::drazin(&a).unwrap();
        let ak = a.matrix_power(d.index).unwrap();
        let s = subspace::column_space(&ak).unwrap();
        let t = subspace::null_space(&ak).unwrap();
        let outer = geninv::outer_inverse_st(&a, &s, &t).unwrap();
        prop_assert_eq!(outer, d.d_inverse);
    }

    #[test]
    fn exact_json_roundtrip(a in complex_mat_strategy(3)) {
        let text = io::exact_matrix_to_json(&a);
        let io::DynMatrix::Exact(back) = io::parse_matrix_str(&text).unwrap() else {
            panic!("expected exact backend");
        };
        prop_assert_eq!(back, a);
    }
}
