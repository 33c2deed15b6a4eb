//! Commutator and Sylvester solvers.
//!
//! `sylvester_offdiag_solve` is the kernel of every gauge recursion in this
//! crate: for diagonal `U` with pairwise distinct entries, `ad(U)` is
//! invertible on matrices with zero diagonal, entrywise.

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::scalar::{Exact, Scalar};

/// Solve `U P - P U = M` for the unique `P` with zero diagonal, where `U` is
/// diagonal with pairwise distinct entries and `diag(M) = 0`.
///
/// Entrywise, `P_ij = M_ij / (u_i - u_j)`.
pub fn sylvester_offdiag_solve<T: Scalar>(
    u: &Matrix<T>,
    m: &Matrix<T>,
) -> Result<Matrix<T>, AlgebraError> {
    if !u.is_regular_diagonal() {
        return Err(AlgebraError::NonRegularU);
    }
    if !m.has_zero_diagonal() {
        return Err(AlgebraError::NonzeroDiagonal);
    }
    let n = u.dim();
    assert_eq!(m.dim(), n, "dimension mismatch");
    Ok(Matrix::from_fn(n, |i, j| {
        if i == j {
            T::zero()
        } else {
            m.at(i, j).clone() / (u.at(i, i).clone() - u.at(j, j).clone())
        }
    }))
}

/// Solve the general Sylvester equation `A X - X B = C` over the exact
/// scalars by vectorisation; `None` when the operator is singular (that is,
/// when `A` and `B` share an eigenvalue).
pub fn sylvester_solve(
    a: &Matrix<Exact>,
    b: &Matrix<Exact>,
    c: &Matrix<Exact>,
) -> Option<Matrix<Exact>> {
    let n = a.dim();
    let size = n * n;
    let mut system = vectorized_system(a, b, c);
    let (solution, free) = solve_dense(&mut system, size)?;
    if free > 0 {
        return None;
    }
    Some(Matrix::from_fn(n, |i, j| solution[i * n + j].clone()))
}

/// Like [`sylvester_solve`], but tolerates a singular operator: returns a
/// particular solution (free variables set to zero) whenever the system is
/// consistent, `None` only when it is genuinely obstructed.
pub fn sylvester_solve_any(
    a: &Matrix<Exact>,
    b: &Matrix<Exact>,
    c: &Matrix<Exact>,
) -> Option<Matrix<Exact>> {
    let n = a.dim();
    let size = n * n;
    let mut system = vectorized_system(a, b, c);
    let (solution, _) = solve_dense(&mut system, size)?;
    Some(Matrix::from_fn(n, |i, j| solution[i * n + j].clone()))
}

/// The operator `X -> A X - X A` on row-major vectorised matrices, as an
/// `n^2 x n^2` matrix. Its eigenvalues are the differences of eigenvalues of
/// `A`, which is what resonance detection needs.
pub fn ad_operator_matrix(a: &Matrix<Exact>) -> Matrix<Exact> {
    let n = a.dim();
    Matrix::from_fn(n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (l, jj) = (col / n, col % n);
        let mut v = Exact::zero();
        if j == jj {
            v += a.at(i, l).clone();
        }
        if i == l {
            v -= a.at(jj, j).clone();
        }
        v
    })
}

fn vectorized_system(a: &Matrix<Exact>, b: &Matrix<Exact>, c: &Matrix<Exact>) -> Vec<Vec<Exact>> {
    let n = a.dim();
    assert_eq!(b.dim(), n);
    assert_eq!(c.dim(), n);
    let size = n * n;
    // unknowns x_{ij} indexed by i * n + j
    let mut system = vec![vec![Exact::zero(); size + 1]; size];
    for i in 0..n {
        for j in 0..n {
            let row = &mut system[i * n + j];
            for l in 0..n {
                // A_{il} x_{lj}
                row[l * n + j] = row[l * n + j].clone() + a.at(i, l).clone();
                // -x_{il} B_{lj}
                row[i * n + l] = row[i * n + l].clone() - b.at(l, j).clone();
            }
            row[size] = c.at(i, j).clone();
        }
    }
    system
}

/// Row reduction of an augmented system. Returns the particular solution
/// with free variables zero and the number of free variables; `None` when
/// the system is inconsistent.
fn solve_dense(system: &mut [Vec<Exact>], size: usize) -> Option<(Vec<Exact>, usize)> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..size {
        if row == size {
            break;
        }
        let Some(p) = (row..size).find(|&r| !system[r][col].is_zero()) else {
            continue;
        };
        system.swap(p, row);
        let pv = system[row][col].clone();
        for v in system[row][col..=size].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        for r in 0..size {
            if r == row || system[r][col].is_zero() {
                continue;
            }
            let factor = system[r][col].clone();
            let pivot_row = system[row][col..=size].to_vec();
            for (v, pr) in system[r][col..=size].iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * pr.clone();
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if system[row..size].iter().any(|r| !r[size].is_zero()) {
        return None;
    }
    let mut solution = vec![Exact::zero(); size];
    for (r, c) in &pivots {
        solution[*c] = system[*r][size].clone();
    }
    Some((solution, size - pivots.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::crat;

    #[test]
    fn two_by_two_example() {
        let u = Matrix::from_diag(&[crat(0, 1), crat(1, 1)]);
        let m = Matrix::from_rows(vec![
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(-1, 1), crat(0, 1)],
        ])
        .unwrap();
        let p = sylvester_offdiag_solve(&u, &m).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![crat(0, 1), crat(-1, 1)],
            vec![crat(-1, 1), crat(0, 1)],
        ])
        .unwrap();
        assert_eq!(p, expected);
        assert_eq!(u.commutator(&p), m);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let u = Matrix::from_diag(&[crat(0, 1), crat(1, 1)]);
        let p = sylvester_offdiag_solve(&u, &Matrix::zero(2)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn three_by_three_entrywise_formula() {
        let u = Matrix::from_diag(&[crat(1, 1), crat(2, 1), crat(3, 1)]);
        let m = Matrix::from_fn(3, |i, j| if i == j { crat(0, 1) } else { crat(1, 1) });
        let p = sylvester_offdiag_solve(&u, &m).unwrap();
        assert_eq!(p.at(0, 2), &crat(-1, 2)); // 1 / (u1 - u3) = -1/2
        assert_eq!(u.commutator(&p), m);
    }

    #[test]
    fn coincident_diagonal_is_rejected() {
        let u = Matrix::from_diag(&[crat(1, 1), crat(1, 1)]);
        let r = sylvester_offdiag_solve(&u, &Matrix::zero(2));
        assert_eq!(r, Err(AlgebraError::NonRegularU));
    }

    #[test]
    fn nonzero_diagonal_is_rejected() {
        let u = Matrix::from_diag(&[crat(0, 1), crat(1, 1)]);
        let r = sylvester_offdiag_solve(&u, &Matrix::identity(2));
        assert_eq!(r, Err(AlgebraError::NonzeroDiagonal));
    }

    #[test]
    fn general_sylvester_roundtrip() {
        let a = Matrix::from_rows(vec![
            vec![crat(2, 1), crat(1, 1)],
            vec![crat(0, 1), crat(3, 1)],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![
            vec![crat(-1, 1), crat(1, 2)],
            vec![crat(1, 1), crat(0, 1)],
        ])
        .unwrap();
        let c = Matrix::from_fn(2, |i, j| crat((i + 2 * j) as i64 + 1, 1));
        let x = sylvester_solve(&a, &b, &c).unwrap();
        assert_eq!(&(&a * &x) - &(&x * &b), c);
    }

    #[test]
    fn general_sylvester_detects_shared_spectrum() {
        // A and B both have eigenvalue 1: ad is singular
        let a = Matrix::identity(2);
        let b = Matrix::from_diag(&[crat(1, 1), crat(5, 1)]);
        assert!(sylvester_solve(&a, &b, &Matrix::identity(2)).is_none());
    }

    #[test]
    fn ad_operator_eigenvalues_are_differences() {
        use crate::cpoly::positive_integer_roots;
        use crate::spectral::char_poly;
        // spec(A) = {0, 1, 3}: positive differences {1, 2, 3}
        let a = Matrix::from_diag(&[crat(0, 1), crat(1, 1), crat(3, 1)]);
        let ad = ad_operator_matrix(&a);
        let roots = positive_integer_roots(&char_poly(&ad));
        let as_i64: Vec<i64> = roots.iter().map(|r| i64::try_from(r).unwrap()).collect();
        assert_eq!(as_i64, vec![1, 2, 3]);
    }

    #[test]
    fn ad_operator_matches_direct_commutator() {
        let a = Matrix::from_rows(vec![
            vec![crat(1, 2), crat(-1, 1)],
            vec![crat(2, 1), crat(0, 1)],
        ])
        .unwrap();
        let x = Matrix::from_fn(2, |i, j| crat((2 * i + j) as i64, 3));
        let ad = ad_operator_matrix(&a);
        let direct = a.commutator(&x);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = crat(0, 1);
                for l in 0..2 {
                    for jj in 0..2 {
                        acc += ad.at(i * 2 + j, l * 2 + jj).clone() * x.at(l, jj).clone();
                    }
                }
                assert_eq!(&acc, direct.at(i, j));
            }
        }
    }

    #[test]
    fn singular_but_consistent_system_has_a_particular_solution() {
        // A = B = diag(0, 1): ad is singular; C with zero diagonal entries
        // in the shared eigenspace positions is still reachable
        let a = Matrix::from_diag(&[crat(0, 1), crat(1, 1)]);
        let c = Matrix::from_rows(vec![
            vec![crat(0, 1), crat(2, 1)],
            vec![crat(3, 1), crat(0, 1)],
        ])
        .unwrap();
        assert!(sylvester_solve(&a, &a, &c).is_none());
        let x = sylvester_solve_any(&a, &a, &c).unwrap();
        assert_eq!(&(&a * &x) - &(&x * &a), c);
        // an unreachable right-hand side stays unreachable
        assert!(sylvester_solve_any(&a, &a, &Matrix::identity(2)).is_none());
    }
}
