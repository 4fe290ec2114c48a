//! Seeded random instance generation for the verification corpora.
//!
//! Instances are always generated on the exact backend with small integer
//! (or Gaussian-integer) data, so the float corpus sees bit-identical inputs
//! after conversion. Instance `i` of seed `s` uses stream `i` of a ChaCha
//! generator seeded with `s`, so corpora are reproducible and instances are
//! independent, which keeps parallel evaluation deterministic.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::scalar::{GaussQ, C64};
use crate::subspace::Subspace;

#[derive(Clone)]
pub struct RandomInstance {
    pub n: usize,
    pub a: Matrix<GaussQ>,
    pub l: Subspace<GaussQ>,
    pub complex: bool,
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn small_entry(rng: &mut ChaCha8Rng, complex: bool) -> GaussQ {
    let re = rng.random_range(-3..=3);
    if complex {
        let im = rng.random_range(-3..=3);
        GaussQ::complex_ratio(re, 1, im, 1)
    } else {
        GaussQ::from_int(re)
    }
}

pub fn random_square(rng: &mut ChaCha8Rng, n: usize, complex: bool) -> Matrix<GaussQ> {
    Matrix::from_fn(n, n, |_, _| small_entry(rng, complex))
}

fn random_subspace(rng: &mut ChaCha8Rng, n: usize, complex: bool) -> Subspace<GaussQ> {
    if rng.random_bool(0.5) {
        // coordinate subspace spanned by a nonempty subset of axes
        let mut axes: Vec<usize> = Vec::new();
        while axes.is_empty() {
            axes = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
        }
        Subspace::coordinate(n, &axes).expect("axes in range")
    } else {
        let d = rng.random_range(1..=n);
        let span = Matrix::from_fn(n, d, |_, _| small_entry(rng, complex));
        Subspace::from_span(&span).expect("span construction")
    }
}

/// Deterministic instance `index` of the corpus with the given seed:
/// `n` in `2..=6`, entries in `{-3..3}`, every third instance complex.
pub fn random_instance(seed: u64, index: u64) -> RandomInstance {
    let mut rng = instance_rng(seed, index);
    let n = rng.random_range(2..=6);
    let complex = index % 3 == 2;
    let a = random_square(&mut rng, n, complex);
    let l = random_subspace(&mut rng, n, complex);
    RandomInstance { n, a, l, complex }
}

/// Nonzero rank-one integer update, used to falsify uniqueness statements.
pub fn rank_one_perturbation(rng: &mut ChaCha8Rng, n: usize) -> Matrix<GaussQ> {
    loop {
        let u = Matrix::from_fn(n, 1, |_, _| GaussQ::from_int(rng.random_range(-2..=2)));
        let v = Matrix::from_fn(1, n, |_, _| GaussQ::from_int(rng.random_range(-2..=2)));
        let e = &u * &v;
        if !e.is_zero() {
            return e;
        }
    }
}

/// The same instance on the float backend (entries are small integers, so
/// the conversion is exact).
pub fn float_instance(inst: &RandomInstance) -> (Matrix<C64>, Subspace<C64>) {
    let a = crate::io::to_float(&inst.a);
    let span = crate::io::to_float(inst.l.basis());
    let l = Subspace::from_span(&span).expect("float span construction");
    (a, l)
}
