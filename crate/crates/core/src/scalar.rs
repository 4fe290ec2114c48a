//! Scalar fields backing the matrix kernel.
//!
//! Two backends implement [`Scalar`]: [`GaussQ`], an exact Gaussian rational
//! (arbitrary-precision rational real and imaginary parts), and [`C64`], a
//! complex double. All higher layers are generic over the backend; the exact
//! backend decides equality structurally, the float backend uses the relative
//! tolerance `|a - b| <= tol * max(1, |a|, |b|)` with a module-level,
//! thread-local tolerance (default `1e-10`).

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

thread_local! {
    static FLOAT_TOL: Cell<f64> = const { Cell::new(1e-10) };
    static FLOAT_PIVOT_TOL: Cell<f64> = const { Cell::new(1e-10) };
}

/// Current float-backend equality tolerance for this thread.
pub fn float_tolerance() -> f64 {
    FLOAT_TOL.with(|t| t.get())
}

/// Set the float-backend equality tolerance for this thread. Returns the
/// old value.
pub fn set_float_tolerance(tol: f64) -> f64 {
    FLOAT_TOL.with(|t| t.replace(tol))
}

/// Current float-backend pivot/rank threshold (relative to matrix scale).
pub fn float_pivot_tolerance() -> f64 {
    FLOAT_PIVOT_TOL.with(|t| t.get())
}

/// Set the float-backend pivot/rank threshold for this thread. Returns the
/// old value.
pub fn set_float_pivot_tolerance(tol: f64) -> f64 {
    FLOAT_PIVOT_TOL.with(|t| t.replace(tol))
}

/// Classification of a candidate pivot against the rank threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotClass {
    NonZero,
    Zero,
    /// Float backend only: magnitude falls in the ambiguous band
    /// `[threshold/8, 8*threshold]`.
    Ambiguous,
}

/// A field element of C usable as a dense-matrix entry.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Sized + 'static
{
    /// True for backends where equality and zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Closest representable scalar to a real double; used by float-only
    /// kernels for normalization factors.
    fn from_f64(v: f64) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// `|x|^2` as a scalar with zero imaginary part.
    fn abs_sq(&self) -> Self;
    /// Magnitude estimate used for float pivot selection and scaling.
    fn magnitude(&self) -> f64;

    /// Backend equality: structural for exact, relative-tolerance for float.
    fn approx_eq(&self, rhs: &Self) -> bool;

    /// Ordering of real parts (both operands assumed real, e.g. squared
    /// norms). The float backend grants a tolerance slack.
    fn real_le(&self, rhs: &Self) -> bool;

    /// Classify a candidate pivot with respect to `threshold` (which the
    /// caller derives from the matrix scale; ignored by exact backends).
    fn classify_pivot(&self, threshold: f64) -> PivotClass;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
}

/// Exact Gaussian rational: `re + im*i` with arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussQ {
    re: BigRational,
    im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussQ::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    /// `p/q` as a real rational. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        GaussQ::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )
    }

    /// `(rp/rq) + (ip/iq) i`. Panics on zero denominators.
    pub fn complex_ratio(rp: i64, rq: i64, ip: i64, iq: i64) -> Self {
        assert!(rq != 0 && iq != 0, "zero denominator");
        GaussQ::new(
            BigRational::new(BigInt::from(rp), BigInt::from(rq)),
            BigRational::new(BigInt::from(ip), BigInt::from(iq)),
        )
    }

    pub fn i() -> Self {
        GaussQ::new(BigRational::zero(), BigRational::from_integer(BigInt::from(1)))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Parse a rational written as `p` or `p/q`.
    pub fn parse_rational(s: &str) -> Result<BigRational> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty rational".into()));
        }
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s)
                    .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))?;
                Ok(BigRational::from_integer(n))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim())
                    .map_err(|e| Error::Parse(format!("bad numerator {p:?}: {e}")))?;
                let q = BigInt::from_str(q.trim())
                    .map_err(|e| Error::Parse(format!("bad denominator {q:?}: {e}")))?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(p, q))
            }
        }
    }

    pub fn format_rational(r: &BigRational) -> String {
        if r.denom() == &BigInt::from(1) {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

impl fmt::Debug for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", Self::format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", Self::format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}{}i",
                Self::format_rational(&self.re),
                Self::format_rational(&self.im)
            )
        } else {
            write!(
                f,
                "{}+{}i",
                Self::format_rational(&self.re),
                Self::format_rational(&self.im)
            )
        }
    }
}

impl Scalar for GaussQ {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussQ::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        GaussQ::from_int(1)
    }

    fn from_i64(v: i64) -> Self {
        GaussQ::from_int(v)
    }

    fn from_f64(v: f64) -> Self {
        let re = BigRational::from_float(v).unwrap_or_else(BigRational::zero);
        GaussQ::new(re, BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussQ::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussQ::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussQ::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    fn neg(&self) -> Self {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }

    fn conj(&self) -> Self {
        GaussQ::new(self.re.clone(), -self.im.clone())
    }

    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussQ::new(&self.re / &n, -(&self.im / &n)))
    }

    fn abs_sq(&self) -> Self {
        GaussQ::new(&self.re * &self.re + &self.im * &self.im, BigRational::zero())
    }

    fn magnitude(&self) -> f64 {
        let r = self.re.to_f64().unwrap_or(0.0);
        let i = self.im.to_f64().unwrap_or(0.0);
        (r * r + i * i).sqrt()
    }

    fn approx_eq(&self, rhs: &Self) -> bool {
        self == rhs
    }

    fn real_le(&self, rhs: &Self) -> bool {
        self.re <= rhs.re
    }

    fn classify_pivot(&self, _threshold: f64) -> PivotClass {
        if Scalar::is_zero(self) {
            PivotClass::Zero
        } else {
            PivotClass::NonZero
        }
    }
}

/// Complex double-precision scalar.
#[derive(Clone, Copy, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl fmt::Debug for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }

    fn one() -> Self {
        C64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_f64(v: f64) -> Self {
        C64::new(v, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        C64::new(self.re + rhs.re, self.im + rhs.im)
    }

    fn sub(&self, rhs: &Self) -> Self {
        C64::new(self.re - rhs.re, self.im - rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        C64::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }

    fn neg(&self) -> Self {
        C64::new(-self.re, -self.im)
    }

    fn conj(&self) -> Self {
        C64::new(self.re, -self.im)
    }

    fn inv(&self) -> Option<Self> {
        // Smith's scaled division, denominator = self.
        if Scalar::is_zero(self) {
            return None;
        }
        if self.re.abs() >= self.im.abs() {
            let r = self.im / self.re;
            let d = self.re + self.im * r;
            Some(C64::new(1.0 / d, -r / d))
        } else {
            let r = self.re / self.im;
            let d = self.re * r + self.im;
            Some(C64::new(r / d, -1.0 / d))
        }
    }

    fn abs_sq(&self) -> Self {
        C64::new(self.re * self.re + self.im * self.im, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn approx_eq(&self, rhs: &Self) -> bool {
        let tol = float_tolerance();
        let diff = self.sub(rhs).abs();
        diff <= tol * 1.0f64.max(self.abs()).max(rhs.abs())
    }

    fn real_le(&self, rhs: &Self) -> bool {
        let tol = float_tolerance();
        self.re <= rhs.re + tol * 1.0f64.max(self.re.abs()).max(rhs.re.abs())
    }

    fn classify_pivot(&self, threshold: f64) -> PivotClass {
        let m = self.abs();
        if m > 8.0 * threshold {
            PivotClass::NonZero
        } else if m < threshold / 8.0 {
            PivotClass::Zero
        } else {
            PivotClass::Ambiguous
        }
    }
}
