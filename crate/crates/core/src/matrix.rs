//! Dense square matrices over an exact or floating-point scalar.
//!
//! All matrices are square with `dim >= 1` and every entry shares the scalar
//! type of the matrix. Elimination-based routines (determinant, inverse, rank,
//! kernel) run over whichever field the entries live in; in exact mode they
//! are error-free.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::scalar::{exact_to_c64, Exact, Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    entries: Vec<T>, // row-major, dim * dim
}

impl<T: Scalar> Matrix<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Matrix {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::NonSquare);
        }
        let entries: Vec<T> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !e.is_finite_value()) {
            return Err(AlgebraError::NonFiniteEntry);
        }
        Ok(Matrix { dim, entries })
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self, AlgebraError> {
        let dim = cols.len();
        if dim == 0 || cols.iter().any(|c| c.len() != dim) {
            return Err(AlgebraError::NonSquare);
        }
        let mut m = Self::zero(dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|e| e.conjugate())
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.dim {
            t = t + self.at(i, i).clone();
        }
        t
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|e| e.clone() * c.clone())
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.at(i, i).clone()).collect()
    }

    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if i == j {
                self.at(i, j).clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn off_diagonal_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if i == j {
                T::zero()
            } else {
                self.at(i, j).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_part().is_zero()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.at(i, i).is_zero())
    }

    /// Diagonal with pairwise distinct entries: the shape every reduction
    /// requires of the leading coefficient.
    pub fn is_regular_diagonal(&self) -> bool {
        if !self.is_diagonal() {
            return false;
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.at(i, i) == self.at(j, j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Determinant by Gaussian elimination over the scalar field.
    pub fn det(&self) -> T {
        let mut a = self.clone();
        let n = self.dim;
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.at(r, col).is_zero())
                .max_by(|&r, &s| {
                    a.at(r, col)
                        .magnitude()
                        .partial_cmp(&a.at(s, col).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot else {
                return T::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pv = a.at(col, col).clone();
            det = det * pv.clone();
            for r in (col + 1)..n {
                if a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone() / pv.clone();
                for c in col..n {
                    let v = a.at(r, c).clone() - factor.clone() * a.at(col, c).clone();
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.at(r, col).is_zero())
                .max_by(|&r, &s| {
                    a.at(r, col)
                        .magnitude()
                        .partial_cmp(&a.at(s, col).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pv = a.at(col, col).clone();
            for c in 0..n {
                let v = a.at(col, c).clone() / pv.clone();
                a.set(col, c, v);
                let w = inv.at(col, c).clone() / pv.clone();
                inv.set(col, c, w);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for c in 0..n {
                    let v = a.at(r, c).clone() - factor.clone() * a.at(col, c).clone();
                    a.set(r, c, v);
                    let w = inv.at(r, c).clone() - factor.clone() * inv.at(col, c).clone();
                    inv.set(r, c, w);
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let (reduced, _) = self.rref();
        (0..self.dim)
            .filter(|&r| (0..self.dim).any(|c| !reduced.at(r, c).is_zero()))
            .count()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let n = self.dim;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let pivot = (row..n)
                .filter(|&r| !a.at(r, col).is_zero())
                .max_by(|&r, &s| {
                    a.at(r, col)
                        .magnitude()
                        .partial_cmp(&a.at(s, col).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot else { continue };
            a.swap_rows(p, row);
            let pv = a.at(row, col).clone();
            for c in 0..n {
                let v = a.at(row, c).clone() / pv.clone();
                a.set(row, c, v);
            }
            for r in 0..n {
                if r == row || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for c in 0..n {
                    let v = a.at(r, c).clone() - factor.clone() * a.at(row, c).clone();
                    a.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Basis of the kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let n = self.dim;
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); n];
                v[fc] = T::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -reduced.at(r, fc).clone();
                }
                v
            })
            .collect()
    }

    pub fn max_entry_magnitude(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.magnitude())
            .fold(0.0, f64::max)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.dim {
            self.entries.swap(r1 * self.dim + c, r2 * self.dim + c);
        }
    }
}

impl Matrix<Exact> {
    /// Explicit exact-to-float conversion (the only direction provided).
    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(exact_to_c64)
    }
}

impl Matrix<C64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum column sum of absolute values (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.at(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite_value())
    }
}

/// Frobenius distance between two float matrices.
pub fn frobenius_distance(a: &Matrix<C64>, b: &Matrix<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    (a - b).frobenius_norm()
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        Matrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                if self.at(i, k).is_zero() || rhs.at(k, j).is_zero() {
                    continue;
                }
                acc = acc + self.at(i, k).clone() * rhs.at(k, j).clone();
            }
            acc
        })
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|e| -e.clone())
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.entries[i * self.dim + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::crat;
    use num_traits::Zero;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Matrix<Exact> {
        Matrix::from_rows(vec![
            vec![crat(a, 1), crat(b, 1)],
            vec![crat(c, 1), crat(d, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_multiplication() {
        let a = m2(1, 2, 3, 4);
        let id = Matrix::identity(2);
        assert_eq!(&a * &id, a);
        assert_eq!(&id * &a, a);
    }

    #[test]
    fn exact_determinant_and_inverse() {
        let a = m2(1, 2, 3, 4);
        assert_eq!(a.det(), crat(-2, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(&inv * &a, Matrix::identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = m2(1, 2, 2, 4);
        assert!(a.inverse().is_none());
        assert!(a.det().is_zero());
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m2(1, 2, 2, 4);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        // A v = 0
        let av0 = a.at(0, 0).clone() * v[0].clone() + a.at(0, 1).clone() * v[1].clone();
        let av1 = a.at(1, 0).clone() * v[0].clone() + a.at(1, 1).clone() * v[1].clone();
        assert!(av0.is_zero() && av1.is_zero());
    }

    #[test]
    fn regular_diagonal_detection() {
        assert!(Matrix::from_diag(&[crat(0, 1), crat(1, 1)]).is_regular_diagonal());
        assert!(!Matrix::from_diag(&[crat(1, 1), crat(1, 1)]).is_regular_diagonal());
        assert!(!m2(0, 1, 0, 2).is_regular_diagonal());
    }

    #[test]
    fn from_rows_rejects_ragged_input() {
        let r = Matrix::from_rows(vec![vec![crat(1, 1)], vec![crat(1, 1), crat(2, 1)]]);
        assert!(r.is_err());
    }

    #[test]
    fn float_conversion_is_explicit() {
        let a = m2(1, 2, 3, 4);
        let f = a.to_c64();
        assert_eq!(f.at(1, 0).re, 3.0);
        assert!((f.frobenius_norm() - (30.0f64).sqrt()).abs() < 1e-15);
    }
}
