//! Truncated matrix power series.
//!
//! A `SeriesMatrix` stores coefficients up to an explicit truncation order.
//! Coefficients beyond the order are unknown, not zero: binary operations
//! truncate to the joint order of their operands and never fabricate data
//! beyond it.

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::poly::PolyMatrix;
use crate::scalar::{Exact, Scalar, C64};

#[derive(Clone, PartialEq, Debug)]
pub struct SeriesMatrix<T> {
    // coefficient k of z^k for k = 0..=order; len == order + 1
    coeffs: Vec<Matrix<T>>,
}

impl<T: Scalar> SeriesMatrix<T> {
    pub fn from_coeffs(coeffs: Vec<Matrix<T>>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "series needs at least the constant term"
        );
        let dim = coeffs[0].dim();
        assert!(
            coeffs.iter().all(|c| c.dim() == dim),
            "coefficient dimensions differ"
        );
        SeriesMatrix { coeffs }
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        SeriesMatrix {
            coeffs: vec![Matrix::zero(dim); order + 1],
        }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut s = Self::zero(dim, order);
        s.coeffs[0] = Matrix::identity(dim);
        s
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Matrix<T> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, m: Matrix<T>) {
        assert_eq!(m.dim(), self.dim());
        self.coeffs[k] = m;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        SeriesMatrix {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// True when every known coefficient vanishes (a statement valid only up
    /// to the truncation order, like everything else about a series).
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_coeffs(
            (0..=order)
                .map(|k| self.coeff(k) + other.coeff(k))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_coeffs(
            (0..=order)
                .map(|k| self.coeff(k) - other.coeff(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let dim = self.dim();
        let mut coeffs = vec![Matrix::zero(dim); order + 1];
        for i in 0..=order {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if other.coeff(j).is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(self.coeff(i) * other.coeff(j));
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|m| -m).collect())
    }

    pub fn mul_matrix_left(&self, m: &Matrix<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| m * c).collect())
    }

    pub fn mul_matrix_right(&self, m: &Matrix<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * m).collect())
    }

    /// Two-sided inverse through the truncation order. Requires an invertible
    /// constant term.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let q0 = self
            .coeff(0)
            .inverse()
            .ok_or(AlgebraError::SingularConstantTerm)?;
        let order = self.order();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(q0.clone());
        for k in 1..=order {
            let mut acc = Matrix::zero(self.dim());
            for j in 1..=k {
                if self.coeff(j).is_zero() {
                    continue;
                }
                acc = &acc + &(self.coeff(j) * &coeffs[k - j]);
            }
            coeffs.push(-&(&q0 * &acc));
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// The series `z^2 d/dz (self)`. The result is known through order
    /// `order + 1`: the unknown tail of `self` only affects higher orders.
    pub fn z2_derivative(&self) -> Self {
        let dim = self.dim();
        let mut coeffs = vec![Matrix::zero(dim); self.order() + 2];
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            coeffs[k + 1] = c.scale(&T::from_i64(k as i64));
        }
        Self::from_coeffs(coeffs)
    }

    /// The series `z d/dz (self)`, known through the same order.
    pub fn z_derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&T::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, z: &T) -> Matrix<T> {
        let mut acc = Matrix::zero(self.dim());
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(z) + c;
        }
        acc
    }
}

impl SeriesMatrix<Exact> {
    pub fn to_c64(&self) -> SeriesMatrix<C64> {
        SeriesMatrix {
            coeffs: self.coeffs.iter().map(|c| c.to_c64()).collect(),
        }
    }
}

/// Coefficient source for a system matrix: either a polynomial (all
/// coefficients known, zero beyond the degree) or a hard-truncated series.
#[derive(Clone, PartialEq, Debug)]
pub enum SystemCoeffs<T> {
    Poly(PolyMatrix<T>),
    Series(SeriesMatrix<T>),
}

impl<T: Scalar> SystemCoeffs<T> {
    pub fn dim(&self) -> usize {
        match self {
            SystemCoeffs::Poly(p) => p.dim(),
            SystemCoeffs::Series(s) => s.dim(),
        }
    }

    pub fn leading(&self) -> Matrix<T> {
        match self {
            SystemCoeffs::Poly(p) => p.coeff(0),
            SystemCoeffs::Series(s) => s.coeff(0).clone(),
        }
    }

    /// Largest order through which coefficients are available when the caller
    /// asks for `requested`.
    pub fn available_order(&self, requested: usize) -> usize {
        match self {
            SystemCoeffs::Poly(_) => requested,
            SystemCoeffs::Series(s) => s.order().min(requested),
        }
    }

    /// The coefficients through `order` as a series. For a polynomial source
    /// this may exceed the degree (the tail is genuinely zero); for a series
    /// source the order must not exceed the truncation order.
    pub fn coeffs_to(&self, order: usize) -> SeriesMatrix<T> {
        match self {
            SystemCoeffs::Poly(p) => p.to_series(order),
            SystemCoeffs::Series(s) => s.truncate(order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::crat;

    fn e12(dim: usize) -> Matrix<Exact> {
        let mut m = Matrix::zero(dim);
        m.set(0, 1, crat(1, 1));
        m
    }

    #[test]
    fn invert_identity() {
        let s: SeriesMatrix<Exact> = SeriesMatrix::identity(3, 5);
        assert_eq!(s.invert().unwrap(), s);
    }

    #[test]
    fn invert_nilpotent_correction_terminates() {
        // (Id + z E12)^{-1} = Id - z E12
        let mut s: SeriesMatrix<Exact> = SeriesMatrix::identity(2, 3);
        s.set_coeff(1, e12(2));
        let inv = s.invert().unwrap();
        assert_eq!(inv.coeff(0), &Matrix::identity(2));
        assert_eq!(inv.coeff(1), &-&e12(2));
        assert!(inv.coeff(2).is_zero());
        assert!(inv.coeff(3).is_zero());
    }

    #[test]
    fn invert_is_two_sided() {
        // pseudo-random exact coefficients
        let mut seed = 9u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        for _ in 0..5 {
            let mut s: SeriesMatrix<Exact> = SeriesMatrix::identity(3, 8);
            for k in 1..=8 {
                let m = Matrix::from_fn(3, |_, _| crat(next(), 1));
                s.set_coeff(k, m);
            }
            let inv = s.invert().unwrap();
            assert!(s.mul(&inv).sub(&SeriesMatrix::identity(3, 8)).is_zero());
            assert!(inv.mul(&s).sub(&SeriesMatrix::identity(3, 8)).is_zero());
        }
    }

    #[test]
    fn singular_constant_term_is_rejected() {
        let s: SeriesMatrix<Exact> = SeriesMatrix::zero(2, 2);
        assert_eq!(s.invert(), Err(AlgebraError::SingularConstantTerm));
    }

    #[test]
    fn binary_ops_truncate_to_joint_order() {
        let a: SeriesMatrix<Exact> = SeriesMatrix::identity(2, 6);
        let b: SeriesMatrix<Exact> = SeriesMatrix::identity(2, 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }
}
