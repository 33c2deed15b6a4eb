//! Scalar coefficients: exact Gaussian rationals and double-precision complex
//! numbers.
//!
//! Exactness is a type-level property here. `Exact` arithmetic never rounds;
//! `C64` is IEEE double precision. Conversion is one-way (`exact_to_c64`):
//! nothing in this crate converts floats back into exact values.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact complex scalar: rational real and imaginary part.
pub type Exact = Complex<BigRational>;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Coefficient field shared by the exact and floating-point scalars.
///
/// `Num` gives the ring operations and equality; the extra methods are the
/// small surface the matrix and series code actually needs.
pub trait Scalar: Num + Clone + std::ops::Neg<Output = Self> + fmt::Debug + fmt::Display {
    fn conjugate(&self) -> Self;

    fn from_i64(n: i64) -> Self;

    /// Approximate magnitude, used for pivot selection and diagnostics only.
    /// Never feeds back into exact arithmetic.
    fn magnitude(&self) -> f64;

    /// False for NaN or infinite floats; always true for exact values.
    fn is_finite_value(&self) -> bool;
}

impl Scalar for Exact {
    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY).abs();
        let im = self.im.to_f64().unwrap_or(f64::INFINITY).abs();
        re + im
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for C64 {
    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }

    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Real rational `n/d` as an exact complex scalar.
pub fn crat(n: i64, d: i64) -> Exact {
    Complex::new(rat(n, d), BigRational::zero())
}

/// Exact complex scalar with rational real and imaginary parts.
pub fn cq(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Exact {
    Complex::new(rat(re_n, re_d), rat(im_n, im_d))
}

/// Lossless conversion of an exact scalar to double precision
/// (lossless up to the usual f64 rounding of the rational parts).
pub fn exact_to_c64(x: &Exact) -> C64 {
    Complex::new(
        x.re.to_f64().unwrap_or(f64::INFINITY),
        x.im.to_f64().unwrap_or(f64::INFINITY),
    )
}

/// True when the exact value is a rational integer: zero imaginary part and
/// denominator one.
pub fn is_rational_integer(x: &Exact) -> bool {
    x.im.is_zero() && x.re.denom().is_one()
}

/// The rational integer carried by `x`, when `is_rational_integer(x)` holds.
pub fn as_rational_integer(x: &Exact) -> Option<BigInt> {
    if is_rational_integer(x) {
        Some(x.re.numer().clone())
    } else {
        None
    }
}

/// True when `x` is real and strictly positive.
pub fn is_positive_real(x: &Exact) -> bool {
    x.im.is_zero() && x.re.is_positive()
}
