//! Exact spectral checks: characteristic and minimal polynomials, and the
//! semi-simple-with-integer-eigenvalues verdict.
//!
//! Eigenvalue integrality is decided symbolically, by integer root extraction
//! from the characteristic polynomial; semi-simplicity by squarefreeness of
//! the minimal polynomial. No floating eigensolver is involved anywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cpoly::{integer_roots, CPoly};
use crate::matrix::Matrix;
use crate::scalar::{Exact, Scalar};

/// Monic characteristic polynomial by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Matrix<Exact>) -> CPoly {
    let m = a.dim();
    let mut coeffs = vec![Exact::zero(); m + 1];
    coeffs[m] = Exact::one();
    let mut n = a.clone();
    for k in 1..=m {
        let ck = -(n.trace() / Exact::from_i64(k as i64));
        coeffs[m - k] = ck.clone();
        if k < m {
            let shifted = &n + &Matrix::identity(m).scale(&ck);
            n = a * &shifted;
        }
    }
    CPoly::from_coeffs(coeffs)
}

/// Monic minimal polynomial: the first linear dependence among the powers
/// `Id, A, A^2, ...` viewed as vectors of length `m^2`.
pub fn min_poly(a: &Matrix<Exact>) -> CPoly {
    let m = a.dim();
    let len = m * m;
    let mut pivots: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Exact>> = Vec::new();
    // combos[r] expresses basis[r] as a combination of the original powers;
    // the same invariant is maintained for the vector being reduced
    let mut combos: Vec<Vec<Exact>> = Vec::new();
    let mut power: Matrix<Exact> = Matrix::identity(m);
    for k in 0..=m {
        let mut vec: Vec<Exact> = (0..len).map(|i| power.at(i / m, i % m).clone()).collect();
        let mut combo = vec![Exact::zero(); m + 1];
        combo[k] = Exact::one();
        for ((&pivot, row), row_combo) in pivots.iter().zip(&basis).zip(&combos) {
            let factor = vec[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, r) in vec.iter_mut().zip(row) {
                *v = v.clone() - factor.clone() * r.clone();
            }
            for (c, rc) in combo.iter_mut().zip(row_combo) {
                *c = c.clone() - factor.clone() * rc.clone();
            }
        }
        match vec.iter().position(|v| !v.is_zero()) {
            Some(p) => {
                let lead = vec[p].clone();
                for v in vec.iter_mut() {
                    *v = v.clone() / lead.clone();
                }
                for c in combo.iter_mut() {
                    *c = c.clone() / lead.clone();
                }
                pivots.push(p);
                basis.push(vec);
                combos.push(combo);
            }
            None => {
                // sum_j combo[j] A^j = 0 with combo[k] = 1: monic by construction
                let mut poly = combo;
                poly.truncate(k + 1);
                return CPoly::from_coeffs(poly);
            }
        }
        power = &power * a;
    }
    unreachable!("the minimal polynomial divides the characteristic polynomial");
}

/// Verdict of the exact spectral check.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCheck {
    pub semisimple: bool,
    pub integer_eigenvalues: bool,
    /// Eigenvalues with multiplicity, sorted descending; present exactly when
    /// both flags hold.
    pub eigenvalues: Option<Vec<BigInt>>,
}

impl SpectralCheck {
    pub fn passes(&self) -> bool {
        self.semisimple && self.integer_eigenvalues
    }
}

/// Decide, exactly, whether `v` is semi-simple with integer eigenvalues.
pub fn integer_semisimple_check(v: &Matrix<Exact>) -> SpectralCheck {
    let semisimple = min_poly(v).is_squarefree();
    let roots = integer_roots(&char_poly(v));
    let integer_eigenvalues = roots.is_some();
    SpectralCheck {
        semisimple,
        integer_eigenvalues,
        eigenvalues: if semisimple { roots } else { None },
    }
}

/// True when `exp(-2 pi i B) = Id` exactly, i.e. `B` is semi-simple with
/// integer eigenvalues.
pub fn exp_two_pi_i_is_identity(b: &Matrix<Exact>) -> bool {
    integer_semisimple_check(b).passes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::crat;

    fn sym(c: i64, d: i64) -> Matrix<Exact> {
        Matrix::from_rows(vec![
            vec![crat(0, 1), crat(c, d)],
            vec![crat(c, d), crat(0, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn char_poly_of_scaled_involution() {
        // 2*[[0,1],[1,0]] has characteristic polynomial x^2 - 4
        let p = char_poly(&sym(2, 1));
        assert_eq!(p.coeff(0), crat(-4, 1));
        assert_eq!(p.coeff(1), crat(0, 1));
        assert_eq!(p.coeff(2), crat(1, 1));
    }

    #[test]
    fn integer_semisimple_examples() {
        let check = integer_semisimple_check(&sym(2, 1));
        assert!(check.semisimple && check.integer_eigenvalues);
        assert_eq!(
            check.eigenvalues,
            Some(vec![BigInt::from(2), BigInt::from(-2)])
        );

        // nilpotent Jordan block: not semi-simple
        let nilp = Matrix::from_rows(vec![
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(0, 1), crat(0, 1)],
        ])
        .unwrap();
        let check = integer_semisimple_check(&nilp);
        assert!(!check.semisimple);

        // eigenvalues +-1/2: semi-simple, not integral
        let check = integer_semisimple_check(&sym(1, 2));
        assert!(check.semisimple);
        assert!(!check.integer_eigenvalues);
        assert_eq!(check.eigenvalues, None);
    }

    #[test]
    fn min_poly_of_identity_is_linear() {
        let p = min_poly(&Matrix::identity(3));
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff(0), crat(-1, 1));
        // identity is semi-simple despite the squared characteristic factor
        assert!(integer_semisimple_check(&Matrix::identity(3)).passes());
    }

    #[test]
    fn similarity_invariance() {
        let v = sym(3, 1);
        let s = Matrix::from_rows(vec![
            vec![crat(1, 1), crat(2, 1)],
            vec![crat(0, 1), crat(1, 1)],
        ])
        .unwrap();
        let conj = &(&s * &v) * &s.inverse().unwrap();
        assert_eq!(
            integer_semisimple_check(&v),
            integer_semisimple_check(&conj)
        );
    }
}
