//! Polynomial matrices: finite matrix-valued polynomials in one variable.
//!
//! Unlike `SeriesMatrix`, a `PolyMatrix` is fully known: coefficients beyond
//! the degree are exactly zero, so a polynomial may be promoted to a series of
//! any truncation order without fabricating data.

use crate::cpoly::{interpolate, CPoly};
use crate::matrix::Matrix;
use crate::scalar::{Exact, Scalar, C64};
use crate::series::SeriesMatrix;

#[derive(Clone, PartialEq, Debug)]
pub struct PolyMatrix<T> {
    // ascending coefficients; len >= 1; trailing coefficient nonzero unless
    // this is the zero polynomial (len == 1)
    coeffs: Vec<Matrix<T>>,
}

impl<T: Scalar> PolyMatrix<T> {
    pub fn zero(dim: usize) -> Self {
        PolyMatrix {
            coeffs: vec![Matrix::zero(dim)],
        }
    }

    pub fn identity(dim: usize) -> Self {
        PolyMatrix {
            coeffs: vec![Matrix::identity(dim)],
        }
    }

    pub fn constant(m: Matrix<T>) -> Self {
        PolyMatrix { coeffs: vec![m] }
    }

    pub fn from_coeffs(coeffs: Vec<Matrix<T>>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "polynomial needs at least one coefficient"
        );
        let dim = coeffs[0].dim();
        assert!(
            coeffs.iter().all(|c| c.dim() == dim),
            "coefficient dimensions differ"
        );
        let mut p = PolyMatrix { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Coefficient of `z^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Matrix<T> {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim()))
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let dim = self.dim();
        let n = self.degree() + other.degree() + 1;
        let mut coeffs = vec![Matrix::zero(dim); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    pub fn mul_matrix_left(&self, m: &Matrix<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| m * c).collect())
    }

    pub fn mul_matrix_right(&self, m: &Matrix<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * m).collect())
    }

    /// Coefficientwise commutator `[m, self]`.
    pub fn commutator_left(&self, m: &Matrix<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| &(m * c) - &(c * m)).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.dim());
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&T::from_i64(k as i64)))
                .collect(),
        )
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Matrix::zero(self.dim()); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, z: &T) -> Matrix<T> {
        let mut acc = Matrix::zero(self.dim());
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(z) + c;
        }
        acc
    }

    /// Promote to a truncated series of the requested order. Legitimate for
    /// polynomials: every higher coefficient is known to be zero.
    pub fn to_series(&self, order: usize) -> SeriesMatrix<T> {
        let mut coeffs: Vec<Matrix<T>> = (0..=order).map(|k| self.coeff(k)).collect();
        if coeffs.is_empty() {
            coeffs.push(Matrix::zero(self.dim()));
        }
        SeriesMatrix::from_coeffs(coeffs)
    }
}

impl PolyMatrix<Exact> {
    pub fn to_c64(&self) -> PolyMatrix<C64> {
        PolyMatrix {
            coeffs: self.coeffs.iter().map(|c| c.to_c64()).collect(),
        }
    }

    pub fn eval_c64(&self, z: C64) -> Matrix<C64> {
        self.to_c64().eval(&z)
    }

    /// Determinant as an exact scalar polynomial, by evaluation at
    /// `m * deg + 1` integer points and Lagrange interpolation.
    pub fn det_poly(&self) -> CPoly {
        let bound = self.dim() * self.degree();
        let points: Vec<(Exact, Exact)> = (0..=bound as i64)
            .map(|k| {
                let z = Exact::from_i64(k);
                (z.clone(), self.eval(&z).det())
            })
            .collect();
        interpolate(&points)
    }
}
