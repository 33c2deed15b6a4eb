//! The polynomial potentiality solver.
//!
//! Solves, in invertible polynomial matrices with `psi_0 = Id`, the equation
//!
//! ```text
//! z^2 psi'(z) = [U, psi(z)] - z V psi(z)
//! ```
//!
//! by the forward recursion `[U, psi_{k+1}] = (k Id + V) psi_k`: the
//! off-diagonal part of each coefficient comes from the `ad(U)` solve, the
//! diagonal part is forced by solvability of the next order, and the
//! recursion succeeds exactly when some tail `(K Id + V) psi_K` vanishes
//! identically. The 2x2 closed form and the assembled factorization
//! `phi(z) = psi(z) diag(exp(z conj(u^i)))` live here as well.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::poly::PolyMatrix;
use crate::scalar::{exact_to_c64, Exact, Scalar, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialityError {
    #[error("U must be diagonal with pairwise distinct diagonal entries")]
    NonRegularU,
    #[error("closed form needs n != 0 (n = 0 has the identity solution)")]
    ZeroN,
    #[error("closed form needs x = u^1 - u^2 != 0")]
    ZeroX,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Why the recursion produced no polynomial solution.
#[derive(Debug, Clone, PartialEq)]
pub enum NoSolutionReason {
    /// The tail never vanished up to the degree cap.
    DegreeExceeded { k_max: usize },
    /// Diagonal solvability fails at step 0, i.e. `diag(V) != 0`.
    NonzeroDiagonalV,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoSolution {
    pub reason: NoSolutionReason,
    pub step: usize,
}

/// A solution of the potentiality equation together with the data needed to
/// assemble the isomorphism factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySolution {
    pub psi: PolyMatrix<Exact>,
    pub degree: usize,
    pub u: Vec<Exact>,
    /// `conj(u)`, the diagonal of `U^dag` in the Tate canonical frame.
    pub ubar: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Solution(PolySolution),
    NoSolution(NoSolution),
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&PolySolution> {
        match self {
            SolveOutcome::Solution(s) => Some(s),
            SolveOutcome::NoSolution(_) => None,
        }
    }

    pub fn is_solution(&self) -> bool {
        self.solution().is_some()
    }
}

/// Run the forward recursion with `psi_0 = Id` up to degree `k_max`.
///
/// Both solution invariants are verified before returning: the polynomial
/// identity holds exactly and `det psi` is the constant 1.
pub fn solve_potentiality(
    u: &Matrix<Exact>,
    v: &Matrix<Exact>,
    k_max: usize,
) -> Result<SolveOutcome, PotentialityError> {
    if !u.is_regular_diagonal() {
        return Err(PotentialityError::NonRegularU);
    }
    let m = u.dim();
    assert_eq!(v.dim(), m, "dimension mismatch");
    if !v.has_zero_diagonal() {
        return Ok(SolveOutcome::NoSolution(NoSolution {
            reason: NoSolutionReason::NonzeroDiagonalV,
            step: 0,
        }));
    }

    let mut coeffs: Vec<Matrix<Exact>> = vec![Matrix::identity(m)];
    for k in 0.. {
        // tail of the recursion: (k Id + V) psi_k
        let psi_k = &coeffs[k];
        let tail = &psi_k.scale(&Exact::from_i64(k as i64)) + &(v * psi_k);
        if tail.is_zero() {
            let psi = PolyMatrix::from_coeffs(coeffs);
            let degree = psi.degree();
            verify_solution_invariants(&psi, u, v);
            let u_diag = u.diag();
            let ubar = u_diag.iter().map(|x| x.conjugate()).collect();
            return Ok(SolveOutcome::Solution(PolySolution {
                psi,
                degree,
                u: u_diag,
                ubar,
            }));
        }
        if k == k_max {
            return Ok(SolveOutcome::NoSolution(NoSolution {
                reason: NoSolutionReason::DegreeExceeded { k_max },
                step: k,
            }));
        }
        debug_assert!(
            tail.has_zero_diagonal(),
            "diagonal solvability must hold for k >= 1"
        );
        let off = crate::sylvester::sylvester_offdiag_solve(u, &tail)?;
        // diag(psi_{k+1}) is forced by solvability at the next order:
        // (k+1) delta + diag(V psi_{k+1}^off) = 0
        let correction = v * &off;
        let delta = Matrix::from_diag(
            &correction
                .diag()
                .into_iter()
                .map(|c| -(c / Exact::from_i64((k + 1) as i64)))
                .collect::<Vec<_>>(),
        );
        coeffs.push(&off + &delta);
    }
    unreachable!("loop returns on termination or degree cap")
}

fn verify_solution_invariants(psi: &PolyMatrix<Exact>, u: &Matrix<Exact>, v: &Matrix<Exact>) {
    assert!(
        verify_cgf(psi, u, v).is_zero(),
        "solver output must satisfy the potentiality equation exactly"
    );
    // det psi(0) = 1; a degree-(m K) polynomial equal to 1 at m K + 1 points
    // is the constant 1
    let samples = psi.dim() * psi.degree() + 1;
    for t in 0..samples as i64 {
        let z = Exact::from_i64(t);
        assert!(
            psi.eval(&z).det() == Exact::one(),
            "det psi must be the constant 1"
        );
    }
}

/// The exact residual `z^2 psi' - [U, psi] + z V psi`: the zero polynomial
/// exactly when `psi` solves the potentiality equation.
pub fn verify_cgf(
    psi: &PolyMatrix<Exact>,
    u: &Matrix<Exact>,
    v: &Matrix<Exact>,
) -> PolyMatrix<Exact> {
    let z2_dpsi = psi.derivative().shift_up(2);
    let commutator = psi.commutator_left(u);
    let v_term = psi.mul_matrix_left(v).shift_up(1);
    z2_dpsi.sub(&commutator).add(&v_term)
}

/// The 2x2 closed form for `V = n [[0,1],[1,0]]` and `x = u^1 - u^2`:
///
/// ```text
/// psi_k = prod_{j=0}^{k-1} (j^2 - n^2) / (k! x^k) (Id - (k/n) A) D^k,
/// ```
///
/// for `1 <= k <= |n|`, with `A = [[0,1],[1,0]]`, `D = diag(-1,1)`, and
/// `psi_k = 0` beyond degree `|n|`.
pub fn closed_form_psi_2x2(n: i64, x: &Exact) -> Result<PolyMatrix<Exact>, PotentialityError> {
    if n == 0 {
        return Err(PotentialityError::ZeroN);
    }
    if x.is_zero() {
        return Err(PotentialityError::ZeroX);
    }
    let a = Matrix::from_rows(vec![
        vec![Exact::zero(), Exact::one()],
        vec![Exact::one(), Exact::zero()],
    ])
    .expect("square");
    let d = Matrix::from_diag(&[-Exact::one(), Exact::one()]);

    let mut coeffs = vec![Matrix::identity(2)];
    let mut scalar = Exact::one(); // prod (j^2 - n^2) / (k! x^k)
    let mut d_power = Matrix::identity(2);
    let n_exact = Exact::from_i64(n);
    for k in 1..=n.unsigned_abs() as usize {
        let j = (k - 1) as i64;
        scalar = scalar * (Exact::from_i64(j * j) - n_exact.clone() * n_exact.clone())
            / (Exact::from_i64(k as i64) * x.clone());
        d_power = &d_power * &d;
        let bracket =
            &Matrix::identity(2) - &a.scale(&(Exact::from_i64(k as i64) / n_exact.clone()));
        coeffs.push((&bracket * &d_power).scale(&scalar));
    }
    Ok(PolyMatrix::from_coeffs(coeffs))
}

/// The factorization `phi(z) = psi(z) diag(exp(z ubar_i))` of the
/// isomorphism at a point, with a float-mode evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiFactorization {
    pub psi: PolyMatrix<Exact>,
    pub ubar: Vec<Exact>,
}

impl PhiFactorization {
    /// `phi(z)`; `phi(0) = Id` since `psi_0 = Id`.
    pub fn eval(&self, z: C64) -> Matrix<C64> {
        &self.psi.eval_c64(z) * &self.exp_factor(z)
    }

    /// The diagonal factor `diag(exp(z ubar_i))`.
    pub fn exp_factor(&self, z: C64) -> Matrix<C64> {
        let entries: Vec<C64> = self
            .ubar
            .iter()
            .map(|ub| (z * exact_to_c64(ub)).exp())
            .collect();
        Matrix::from_diag(&entries)
    }

    /// The inverse diagonal factor `diag(exp(-z ubar_i))`.
    pub fn exp_factor_inverse(&self, z: C64) -> Matrix<C64> {
        let entries: Vec<C64> = self
            .ubar
            .iter()
            .map(|ub| (-z * exact_to_c64(ub)).exp())
            .collect();
        Matrix::from_diag(&entries)
    }
}

/// Assemble the isomorphism factorization from a solution.
pub fn assemble_phi(sol: &PolySolution) -> PhiFactorization {
    PhiFactorization {
        psi: sol.psi.clone(),
        ubar: sol.ubar.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::frobenius_distance;
    use crate::scalar::{cq, crat};
    use num_complex::Complex;

    fn diag01() -> Matrix<Exact> {
        Matrix::from_diag(&[crat(0, 1), crat(1, 1)])
    }

    fn involution(n: i64, d: i64) -> Matrix<Exact> {
        Matrix::from_rows(vec![
            vec![crat(0, 1), crat(n, d)],
            vec![crat(n, d), crat(0, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn zero_v_has_identity_solution() {
        let out = solve_potentiality(&diag01(), &Matrix::zero(2), 16).unwrap();
        let sol = out.solution().expect("V = 0 always solves");
        assert_eq!(sol.degree, 0);
        assert_eq!(sol.psi, PolyMatrix::identity(2));
        assert_eq!(sol.ubar, vec![crat(0, 1), crat(1, 1)]);
    }

    #[test]
    fn unit_involution_solution_is_degree_one() {
        let out = solve_potentiality(&diag01(), &involution(1, 1), 16).unwrap();
        let sol = out.solution().expect("n = 1 is strongly potential");
        assert_eq!(sol.degree, 1);
        let expected = Matrix::from_rows(vec![
            vec![crat(-1, 1), crat(-1, 1)],
            vec![crat(1, 1), crat(1, 1)],
        ])
        .unwrap();
        assert_eq!(sol.psi.coeff(1), expected);
        assert!(verify_cgf(&sol.psi, &diag01(), &involution(1, 1)).is_zero());
    }

    #[test]
    fn half_integer_v_never_terminates() {
        let out = solve_potentiality(&diag01(), &involution(1, 2), 64).unwrap();
        match out {
            SolveOutcome::NoSolution(ns) => {
                assert_eq!(ns.reason, NoSolutionReason::DegreeExceeded { k_max: 64 });
                assert_eq!(ns.step, 64);
            }
            SolveOutcome::Solution(_) => panic!("odd d must not be strongly potential"),
        }
    }

    #[test]
    fn nonzero_diagonal_v_is_rejected_as_unsolvable() {
        let out = solve_potentiality(&diag01(), &Matrix::identity(2), 8).unwrap();
        match out {
            SolveOutcome::NoSolution(ns) => {
                assert_eq!(ns.reason, NoSolutionReason::NonzeroDiagonalV);
                assert_eq!(ns.step, 0);
            }
            SolveOutcome::Solution(_) => panic!("diag(V) != 0 has no solution"),
        }
    }

    #[test]
    fn closed_form_examples() {
        // n = 1, x = 1: psi_1 = [[1,1],[-1,-1]]
        let psi = closed_form_psi_2x2(1, &crat(1, 1)).unwrap();
        assert_eq!(psi.degree(), 1);
        let expected = Matrix::from_rows(vec![
            vec![crat(1, 1), crat(1, 1)],
            vec![crat(-1, 1), crat(-1, 1)],
        ])
        .unwrap();
        assert_eq!(psi.coeff(1), expected);

        // n = 2, x = 1: psi_1 = [[4,2],[-2,-4]], psi_2 = 6 [[1,-1],[-1,1]]
        let psi = closed_form_psi_2x2(2, &crat(1, 1)).unwrap();
        assert_eq!(psi.degree(), 2);
        let psi1 = Matrix::from_rows(vec![
            vec![crat(4, 1), crat(2, 1)],
            vec![crat(-2, 1), crat(-4, 1)],
        ])
        .unwrap();
        let psi2 = Matrix::from_rows(vec![
            vec![crat(6, 1), crat(-6, 1)],
            vec![crat(-6, 1), crat(6, 1)],
        ])
        .unwrap();
        assert_eq!(psi.coeff(1), psi1);
        assert_eq!(psi.coeff(2), psi2);

        // the formula is homogeneous of degree -k in x
        let psi_x = closed_form_psi_2x2(1, &cq(2, 1, 1, 1)).unwrap();
        let expected = expected.scale(&(Exact::one() / cq(2, 1, 1, 1)));
        assert_eq!(psi_x.coeff(1), expected);
    }

    #[test]
    fn closed_form_rejects_degenerate_parameters() {
        assert!(matches!(
            closed_form_psi_2x2(0, &crat(1, 1)),
            Err(PotentialityError::ZeroN)
        ));
        assert!(matches!(
            closed_form_psi_2x2(1, &crat(0, 1)),
            Err(PotentialityError::ZeroX)
        ));
    }

    #[test]
    fn deeper_recursion_matches_the_closed_form() {
        let u = Matrix::from_diag(&[crat(1, 1), crat(0, 1)]);
        let v = involution(5, 1);
        let sol = solve_potentiality(&u, &v, 64)
            .unwrap()
            .solution()
            .cloned()
            .unwrap();
        assert_eq!(sol.degree, 5);
        assert_eq!(sol.psi, closed_form_psi_2x2(5, &crat(1, 1)).unwrap());
    }

    #[test]
    fn block_diagonal_system_solves_in_dimension_three() {
        // V couples only the first two coordinates; the recursion stays
        // block-diagonal and terminates at the 2x2 degree
        let u = Matrix::from_diag(&[crat(0, 1), crat(-1, 1), crat(5, 1)]);
        let mut v = Matrix::zero(3);
        v.set(0, 1, crat(2, 1));
        v.set(1, 0, crat(2, 1));
        let sol = solve_potentiality(&u, &v, 64)
            .unwrap()
            .solution()
            .cloned()
            .unwrap();
        assert_eq!(sol.degree, 2);
        assert!(verify_cgf(&sol.psi, &u, &v).is_zero());
        // third coordinate stays decoupled: psi_k e_3 = 0 for k >= 1
        for k in 1..=sol.degree {
            let c = sol.psi.coeff(k);
            for i in 0..3 {
                assert!(c.at(i, 2).is_zero() && c.at(2, i).is_zero());
            }
        }
        // the 2x2 block agrees with the closed form at x = u^1 - u^2 = 1
        let closed = closed_form_psi_2x2(2, &crat(1, 1)).unwrap();
        for k in 0..=2 {
            let full = sol.psi.coeff(k);
            let block = closed.coeff(k);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(full.at(i, j), block.at(i, j));
                }
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_recursion() {
        for n in [-3i64, -2, -1, 1, 2, 3] {
            for x in [crat(1, 1), crat(-1, 1), cq(2, 1, 1, 1)] {
                // u^1 - u^2 = x with u = diag(x, 0)
                let u = Matrix::from_diag(&[x.clone(), crat(0, 1)]);
                let v = involution(1, 1).scale(&Exact::from_i64(n));
                let sol = solve_potentiality(&u, &v, 64)
                    .unwrap()
                    .solution()
                    .cloned()
                    .expect("integer n is strongly potential");
                let closed = closed_form_psi_2x2(n, &x).unwrap();
                assert_eq!(sol.psi, closed, "n = {n}, x = {x}");
                assert_eq!(sol.degree, n.unsigned_abs() as usize);
            }
        }
    }

    #[test]
    fn solutions_are_stable_under_diagonal_rescaling() {
        let u = diag01();
        let v = involution(2, 1);
        let sol = solve_potentiality(&u, &v, 64)
            .unwrap()
            .solution()
            .cloned()
            .unwrap();
        let delta = Matrix::from_diag(&[crat(3, 1), cq(0, 1, -5, 1)]);
        let rescaled = sol.psi.mul_matrix_right(&delta);
        assert!(verify_cgf(&rescaled, &u, &v).is_zero());
    }

    #[test]
    fn solution_determinant_is_constant() {
        // det psi as a polynomial: all positive-degree coefficients vanish
        let u = diag01();
        let v = involution(3, 1);
        let sol = solve_potentiality(&u, &v, 64)
            .unwrap()
            .solution()
            .cloned()
            .unwrap();
        let det = sol.psi.det_poly();
        assert_eq!(det.degree(), Some(0));
        assert_eq!(det.coeff(0), Exact::one());
    }

    #[test]
    fn verify_cgf_flags_non_solutions() {
        let residual = verify_cgf(&PolyMatrix::identity(2), &diag01(), &involution(1, 1));
        // residual = z V
        assert_eq!(residual.degree(), 1);
        assert_eq!(residual.coeff(1), involution(1, 1));
    }

    #[test]
    fn assembled_phi_factorization() {
        let out = solve_potentiality(&diag01(), &involution(1, 1), 16).unwrap();
        let sol = out.solution().unwrap();
        let phi = assemble_phi(sol);
        // phi(0) = Id
        let at_zero = phi.eval(Complex::new(0.0, 0.0));
        assert!(frobenius_distance(&at_zero, &Matrix::identity(2)) < 1e-15);
        // phi(1) = psi(1) diag(1, e): |det phi(1)| = e since det psi = 1
        let at_one = phi.eval(Complex::new(1.0, 0.0));
        let det = at_one.det();
        assert!((det.norm() - 1.0f64.exp()).abs() < 1e-12);
        // phi(z) diag(exp(-z ubar)) recovers psi(z)
        for k in 0..10 {
            let z = Complex::new(0.3 * k as f64 - 1.2, 0.17 * k as f64);
            let recovered = &phi.eval(z) * &phi.exp_factor_inverse(z);
            assert!(frobenius_distance(&recovered, &sol.psi.eval_c64(z)) < 1e-12);
        }
    }
}
