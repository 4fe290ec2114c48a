//! Solvers for the restricted network equation `A x + y = beta` (with
//! `x in L`, `y in Lperp`) and the constrained system `P_L A x = b`,
//! including the minimum P-norm solution and its determinant-ratio form on a
//! bordered matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bdd::BddContext;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::{GaussQ, Scalar};
use crate::subspace;

/// Solution family of `A x + y = beta`, `x in L`, `y in Lperp`.
///
/// Members are `x(u) = x + family_generator u` and `y(u) = beta - A x(u)`;
/// the particular pair is the member at `u = 0` and is the unique solution
/// once `x + y` is constrained to `R((A P_L + P_Lperp)^k)`.
#[derive(Clone, Debug)]
pub struct RestrictedSolution<S: Scalar> {
    pub x: Matrix<S>,
    pub y: Matrix<S>,
    pub family_generator: Matrix<S>,
    pub unique: bool,
}

impl<S: Scalar> RestrictedSolution<S> {
    pub fn member(&self, ctx: &BddContext<S>, beta: &Matrix<S>, u: &Matrix<S>) -> (Matrix<S>, Matrix<S>) {
        let x = &self.x + &(&self.family_generator * u);
        let y = beta - &(ctx.a() * &x);
        (x, y)
    }
}

/// Solve `A x + y = beta` for `beta in R((A P_L + P_Lperp)^k)`.
///
/// With `enforce_core` the solution is additionally constrained to
/// `x + y in R((A P_L + P_Lperp)^k)`, which collapses the family to the
/// particular pair.
pub fn solve_restricted<S: Scalar>(
    ctx: &BddContext<S>,
    beta: &Matrix<S>,
    enforce_core: bool,
) -> Result<RestrictedSolution<S>> {
    let n = ctx.a().rows();
    if beta.rows() != n || beta.cols() != 1 {
        return Err(Error::shape(format!("right-hand side must be {n}x1")));
    }
    let k = ctx.k();
    let m_pow = ctx.shifted().matrix_power(k)?;
    if !linalg::in_column_space(&m_pow, beta)? {
        return Err(Error::Inconsistent(
            "beta is outside the range of the k-th shifted power".into(),
        ));
    }
    let x = ctx.inverse() * beta;
    let y = beta - &(ctx.a() * &x);
    let family_generator = if enforce_core || k == 0 {
        Matrix::zeros(n, n)
    } else {
        // P_L M^{k-1} (I - M^D M); the leading projector keeps the increment
        // inside L for k = 1 as well, and is absorbed by M^{k-1} for k >= 2.
        let md_m = &ctx.drazin_of_shifted().d_inverse * ctx.shifted();
        let free = &Matrix::identity(n) - &md_m;
        &(ctx.p_l() * &ctx.shifted().matrix_power(k - 1)?) * &free
    };
    let unique = enforce_core || family_generator.is_zero();
    Ok(RestrictedSolution {
        x,
        y,
        family_generator,
        unique,
    })
}

/// Solution family of `P_L A x = b`.
#[derive(Clone, Debug)]
pub struct ConstrainedSolution<S: Scalar> {
    /// `x` of least P-norm, for every Jordan-adapted `P`.
    pub x_min: Matrix<S>,
    pub family_generator: Matrix<S>,
}

impl<S: Scalar> ConstrainedSolution<S> {
    pub fn member(&self, z: &Matrix<S>) -> Matrix<S> {
        &self.x_min + &(&self.family_generator * z)
    }
}

/// Solve `P_L A x = b` for `b in R((P_L A P_L)^kc)`.
pub fn solve_constrained<S: Scalar>(
    ctx: &BddContext<S>,
    b: &Matrix<S>,
) -> Result<ConstrainedSolution<S>> {
    let n = ctx.a().rows();
    if b.rows() != n || b.cols() != 1 {
        return Err(Error::shape(format!("right-hand side must be {n}x1")));
    }
    if !ctx.s().contains(b)? {
        return Err(Error::Inconsistent(
            "b is outside the range of the kc-th core power".into(),
        ));
    }
    let x_min = ctx.inverse() * b;
    let kc = ctx.core_index();
    let family_generator = if kc == 0 {
        Matrix::zeros(n, n)
    } else {
        let reach = &(ctx.inverse() * ctx.a()) * ctx.p_l();
        let free = &Matrix::identity(n) - &reach;
        // as above, the projector only matters at kc = 1
        &(ctx.p_l() * &ctx.core().matrix_power(kc - 1)?) * &free
    };
    Ok(ConstrainedSolution {
        x_min,
        family_generator,
    })
}

/// Norm `|x|_P = |P^{-1} x|_2` induced by a nonsingular basis matrix.
#[derive(Clone, Debug)]
pub struct PNorm<S: Scalar> {
    p: Matrix<S>,
    p_inv: Matrix<S>,
}

impl<S: Scalar> PNorm<S> {
    pub fn new(p: Matrix<S>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::shape("norm basis must be square"));
        }
        let p_inv = linalg::inverse(&p)?;
        Ok(PNorm { p, p_inv })
    }

    /// Basis adapted to the core/null split of the context: columns are a
    /// basis of `S` followed by a basis of `T`. Minimality of the
    /// constrained solution holds for any such split basis.
    pub fn split_basis(ctx: &BddContext<S>) -> Result<Self> {
        PNorm::new(ctx.s().basis().hstack(ctx.t().basis())?)
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.p
    }

    pub fn basis_inverse(&self) -> &Matrix<S> {
        &self.p_inv
    }

    /// `|x|_P^2` as a scalar with zero imaginary part (rational on the exact
    /// backend, so comparisons stay exact).
    pub fn norm_sq(&self, x: &Matrix<S>) -> Result<S> {
        if x.rows() != self.p.rows() || x.cols() != 1 {
            return Err(Error::shape("norm of a non-conforming vector"));
        }
        let coords = &self.p_inv * x;
        let mut acc = S::zero();
        for i in 0..coords.rows() {
            acc = acc.add(&coords.get(i, 0).abs_sq());
        }
        Ok(acc)
    }
}

/// Sampling certificate for minimality of `x_min` in the P-norm.
#[derive(Debug, Clone, Copy)]
pub struct CertifyReport {
    pub samples: usize,
    /// Family members whose P-norm fell below the candidate minimum.
    pub norm_violations: usize,
    /// Family members that failed to solve the system (always zero; counted
    /// separately so a generator fault cannot masquerade as minimality).
    pub residual_violations: usize,
}

impl CertifyReport {
    pub fn is_clean(&self) -> bool {
        self.norm_violations == 0 && self.residual_violations == 0
    }
}

/// Check `|x_min|_P <= |x_min + family(z)|_P` over seeded random `z`, also
/// verifying each sampled member solves `P_L A x = b`.
pub fn min_p_norm_certify<S: Scalar>(
    ctx: &BddContext<S>,
    b: &Matrix<S>,
    pnorm: &PNorm<S>,
    samples: usize,
    seed: u64,
) -> Result<CertifyReport> {
    let sol = solve_constrained(ctx, b)?;
    let base = pnorm.norm_sq(&sol.x_min)?;
    let n = ctx.a().rows();
    let pla = ctx.p_l() * ctx.a();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norm_violations = 0;
    let mut residual_violations = 0;
    for _ in 0..samples {
        let z = Matrix::from_fn(n, 1, |_, _| S::from_i64(rng.random_range(-3..=3)));
        let member = sol.member(&z);
        if &(&pla * &member) != b {
            residual_violations += 1;
        }
        let norm = pnorm.norm_sq(&member)?;
        if !base.real_le(&norm) {
            norm_violations += 1;
        }
    }
    Ok(CertifyReport {
        samples,
        norm_violations,
        residual_violations,
    })
}

/// Determinant-ratio form of the minimum P-norm solution, built on the
/// bordered matrix `[[P_L A P_L, F], [G, 0]]` with `R(F) = T`, `N(G) = S`.
pub fn cramer_min_p_norm<S: Scalar>(ctx: &BddContext<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    let f = ctx.t().basis().clone();
    let g = ctx.s().perp()?.basis().conj_transpose();
    cramer_bordered(ctx, b, &f, &g)
}

/// Same determinant-ratio computation with caller-supplied borders; `f` must
/// span `T` column-wise and `g` must annihilate exactly `S`.
pub fn cramer_bordered<S: Scalar>(
    ctx: &BddContext<S>,
    b: &Matrix<S>,
    f: &Matrix<S>,
    g: &Matrix<S>,
) -> Result<Matrix<S>> {
    let n = ctx.a().rows();
    if b.rows() != n || b.cols() != 1 {
        return Err(Error::shape(format!("right-hand side must be {n}x1")));
    }
    if !ctx.s().contains(b)? {
        return Err(Error::Inconsistent(
            "b is outside the range of the kc-th core power".into(),
        ));
    }
    let p = ctx.t().dim();
    if f.rows() != n || f.cols() != p || g.rows() != p || g.cols() != n {
        return Err(Error::shape(format!(
            "borders must be {n}x{p} and {p}x{n}"
        )));
    }
    if subspace::column_space(f)? != *ctx.t() {
        return Err(Error::shape("columns of f must span the null pair"));
    }
    if subspace::null_space(g)? != *ctx.s() {
        return Err(Error::shape("kernel of g must equal the core pair"));
    }
    let bordered = Matrix::block_2x2(ctx.core(), f, g, &Matrix::zeros(p, p))?;
    let denom = linalg::det(&bordered)?;
    let denom_inv = denom.inv().ok_or_else(|| {
        Error::Verification("bordered matrix is singular; border construction fault".into())
    })?;
    let rhs = b.vstack(&Matrix::zeros(p, 1))?;
    let mut x = Matrix::zeros(n, 1);
    for i in 1..=n {
        let numer = linalg::det(&bordered.replace_column(i, &rhs)?)?;
        x.set(i - 1, 0, numer.mul(&denom_inv));
    }
    Ok(x)
}

/// Jordan basis of an exactly diagonalizable matrix with rational spectrum.
///
/// The search factors the characteristic polynomial over the rationals; any
/// defect, irrational eigenvalue, or complex coefficient reports
/// `JordanUnavailable` so the caller can supply `P` explicitly.
pub fn jordan_basis_diagonalizable(m: &Matrix<GaussQ>) -> Result<PNorm<GaussQ>> {
    if !m.is_square() {
        return Err(Error::shape("Jordan basis of a non-square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::shape("empty matrix"));
    }
    let coeffs = characteristic_polynomial(m)?;
    let mut real: Vec<BigRational> = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.im().is_zero() {
            return Err(Error::JordanUnavailable(
                "characteristic polynomial has complex coefficients".into(),
            ));
        }
        real.push(c.re().clone());
    }
    let eigenvalues = rational_roots(&real)?;
    let total: usize = eigenvalues.iter().map(|(_, mult)| mult).sum();
    if total != n {
        return Err(Error::JordanUnavailable(
            "irrational eigenvalues remain after rational factorization".into(),
        ));
    }
    let mut columns: Option<Matrix<GaussQ>> = None;
    for (lambda, mult) in &eigenvalues {
        let shift = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                m.get(i, j).sub(&GaussQ::new(lambda.clone(), BigRational::zero()))
            } else {
                m.get(i, j).clone()
            }
        });
        let eigvecs = linalg::null_space_basis(&shift)?;
        if eigvecs.cols() != *mult {
            return Err(Error::JordanUnavailable(format!(
                "defective matrix: eigenvalue {} has geometric multiplicity {} < {}",
                GaussQ::format_rational(lambda),
                eigvecs.cols(),
                mult
            )));
        }
        columns = Some(match columns {
            None => eigvecs,
            Some(c) => c.hstack(&eigvecs)?,
        });
    }
    let p = columns.expect("n >= 1 yields at least one eigenvalue block");
    let pnorm = PNorm::new(p)?;
    // structural check: the conjugated matrix must be diagonal
    let j = &(pnorm.basis_inverse() * m) * pnorm.basis();
    for i in 0..n {
        for jj in 0..n {
            if i != jj && !j.get(i, jj).is_zero() {
                return Err(Error::JordanUnavailable(
                    "conjugation failed to diagonalize".into(),
                ));
            }
        }
    }
    Ok(pnorm)
}

/// Monic characteristic polynomial coefficients `[c_1, ..., c_n]` of
/// `x^n + c_1 x^{n-1} + ... + c_n`, by the trace recursion.
fn characteristic_polynomial(m: &Matrix<GaussQ>) -> Result<Vec<GaussQ>> {
    let n = m.rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = m.clone();
    for j in 1..=n {
        let cj = mk
            .trace()?
            .mul(&GaussQ::ratio(-1, j as i64));
        coeffs.push(cj.clone());
        if j < n {
            let shifted = mk.checked_add(&Matrix::identity(n).scale(&cj))?;
            mk = m.checked_mul(&shifted)?;
        }
    }
    Ok(coeffs)
}

/// All rational roots with multiplicity of the monic polynomial
/// `x^d + coeffs[0] x^{d-1} + ... + coeffs[d-1]`.
fn rational_roots(coeffs: &[BigRational]) -> Result<Vec<(BigRational, usize)>> {
    let mut poly: Vec<BigRational> = Vec::with_capacity(coeffs.len() + 1);
    poly.push(BigRational::from_integer(BigInt::from(1)));
    poly.extend(coeffs.iter().cloned());
    let mut roots: Vec<(BigRational, usize)> = Vec::new();

    // strip zero roots first
    let mut zero_mult = 0;
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigRational::zero(), zero_mult));
    }
    if poly.len() == 1 {
        return Ok(roots);
    }

    // clear denominators to apply the rational-root bound
    let mut denom_lcm = BigInt::from(1);
    for c in &poly {
        let d = c.denom().clone();
        let g = num_integer_gcd(&denom_lcm, &d);
        denom_lcm = &denom_lcm / &g * &d;
    }
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let lead = ints.first().expect("monic scaled").clone();
    let tail = ints.last().expect("nonzero constant term").clone();
    let p_divs = small_divisors(&tail)?;
    let q_divs = small_divisors(&lead)?;

    let mut candidates: Vec<BigRational> = Vec::new();
    for p in &p_divs {
        for qd in &q_divs {
            let c = BigRational::new(BigInt::from(*p), BigInt::from(*qd));
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }

    for cand in candidates {
        loop {
            if poly.len() == 1 {
                break;
            }
            let (value, quotient) = horner(&poly, &cand);
            if value.is_zero() {
                match roots.iter_mut().find(|(r, _)| *r == cand) {
                    Some((_, mult)) => *mult += 1,
                    None => roots.push((cand.clone(), 1)),
                }
                poly = quotient;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

fn horner(poly: &[BigRational], at: &BigRational) -> (BigRational, Vec<BigRational>) {
    let mut quotient = Vec::with_capacity(poly.len() - 1);
    let mut acc = BigRational::zero();
    for c in poly {
        acc = &acc * at + c;
        quotient.push(acc.clone());
    }
    let value = quotient.pop().expect("nonempty polynomial");
    (value, quotient)
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Positive divisors via trial division; bails out when the magnitude is too
/// large for an exact search.
fn small_divisors(v: &BigInt) -> Result<Vec<i64>> {
    let mag = v.abs();
    let Some(m) = mag.to_i64() else {
        return Err(Error::JordanUnavailable(
            "characteristic coefficients too large for rational root search".into(),
        ));
    };
    if m == 0 {
        return Err(Error::JordanUnavailable("zero leading/constant term".into()));
    }
    if m > 1_000_000_000_000 {
        return Err(Error::JordanUnavailable(
            "characteristic coefficients too large for rational root search".into(),
        ));
    }
    let mut divs = Vec::new();
    let mut d = 1i64;
    while d * d <= m {
        if m % d == 0 {
            divs.push(d);
            divs.push(m / d);
        }
        d += 1;
    }
    divs.sort_unstable();
    divs.dedup();
    Ok(divs)
}
