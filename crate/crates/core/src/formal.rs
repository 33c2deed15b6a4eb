//! Formal gauge reduction of rank-one irregular systems to diagonal normal
//! form, and the explicit exponential gauge for the Tate case.
//!
//! Systems follow the crate-wide convention documented in [`crate::gauge`]:
//! `z^2 dPsi/dz = A(z) Psi` with `A_0` diagonal regular semi-simple. The
//! reduction produces a gauge `P` with `P_0 = Id` oriented from the normal
//! form `Lambda(z) = U + z diag(mu)` to the system, so it satisfies
//!
//! ```text
//! z^2 P'(z) = A(z) P(z) - P(z) Lambda(z)
//! ```
//!
//! coefficient by coefficient through the truncation order. Matching the
//! order-z coefficient forces `mu = diag(A_1)`; in particular `mu = 0`
//! whenever the order-z coefficient has zero diagonal, which is the case for
//! both `U - zV` and `U - zQ - z^2 U^dag` systems. Both then reduce to the
//! common normal form `U dz/z^2`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::AlgebraError;
use crate::gauge::GaugeSeries;
use crate::matrix::Matrix;
use crate::poly::PolyMatrix;
use crate::scalar::{Exact, Scalar};
use crate::series::{SeriesMatrix, SystemCoeffs};
use crate::sylvester::sylvester_offdiag_solve;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormalError {
    #[error("leading coefficient must be diagonal with pairwise distinct entries")]
    NonRegularLeading,
    #[error("both matrices must be diagonal")]
    NonDiagonal,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A system `z^2 dPsi/dz = A(z) Psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneSystem {
    a: SystemCoeffs<Exact>,
}

impl RankOneSystem {
    pub fn from_poly(a: PolyMatrix<Exact>) -> Self {
        RankOneSystem {
            a: SystemCoeffs::Poly(a),
        }
    }

    pub fn from_series(a: SeriesMatrix<Exact>) -> Self {
        RankOneSystem {
            a: SystemCoeffs::Series(a),
        }
    }

    /// The structure-connection instance `A = U - zV`.
    pub fn from_uv(u: &Matrix<Exact>, v: &Matrix<Exact>) -> Self {
        Self::from_poly(PolyMatrix::from_coeffs(vec![u.clone(), -v]))
    }

    /// The CV-structure instance `A = U - zQ - z^2 U^dag`.
    pub fn from_uq_udag(u: &Matrix<Exact>, q: &Matrix<Exact>, udag: &Matrix<Exact>) -> Self {
        Self::from_poly(PolyMatrix::from_coeffs(vec![u.clone(), -q, -udag]))
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn leading(&self) -> Matrix<Exact> {
        self.a.leading()
    }

    pub fn coeffs(&self) -> &SystemCoeffs<Exact> {
        &self.a
    }

    pub fn coeffs_to(&self, order: usize) -> SeriesMatrix<Exact> {
        self.a.coeffs_to(order)
    }
}

/// The diagonal normal form `diag(u_i + mu_i z) dz/z^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub exponents: Vec<Exact>,
    pub residues: Vec<Exact>,
}

impl NormalForm {
    /// As a degree-one polynomial matrix `U + z diag(mu)`.
    pub fn lambda(&self) -> PolyMatrix<Exact> {
        PolyMatrix::from_coeffs(vec![
            Matrix::from_diag(&self.exponents),
            Matrix::from_diag(&self.residues),
        ])
    }
}

/// Reduce a system with regular semi-simple diagonal leading term to its
/// diagonal normal form by a formal gauge with constant term `Id`.
///
/// The returned gauge satisfies the gauge equation through order
/// `min(n, available order of A)`. The residues are `diag(A_1)`; the
/// diagonal of each gauge coefficient is pinned by solvability of the next
/// order, and the top coefficient's free diagonal is set to zero.
pub fn formal_reduce(
    system: &RankOneSystem,
    n: usize,
) -> Result<(GaugeSeries<Exact>, NormalForm), FormalError> {
    let u = system.leading();
    if !u.is_regular_diagonal() {
        return Err(FormalError::NonRegularLeading);
    }
    let m = system.dim();
    let order = system.coeffs().available_order(n);
    let a = system.coeffs_to(order);

    let mu = if order >= 1 {
        a.coeff(1).diag()
    } else {
        vec![Exact::zero(); m]
    };
    let mu_matrix = Matrix::from_diag(&mu);

    // p[k] are the gauge coefficients; p[k] for k >= 1 starts as the
    // off-diagonal part and receives its diagonal when order k's
    // solvability constraint is processed.
    let mut p: Vec<Matrix<Exact>> = Vec::with_capacity(order + 1);
    p.push(Matrix::identity(m));

    for k in 0..order {
        // r_k = k p_k + p_k mu - sum_{j=1}^{k+1} a_j p_{k+1-j}
        let mut r = &p[k].scale(&Exact::from_i64(k as i64)) + &(&p[k] * &mu_matrix);
        for j in 1..=(k + 1) {
            let aj = a.coeff(j);
            if aj.is_zero() {
                continue;
            }
            r = &r - &(aj * &p[k + 1 - j]);
        }
        if k >= 1 {
            // fix diag(p_k) from the solvability constraint diag(r_k) = 0:
            // the mu-terms cancel, leaving k * delta_k = -diag(r_k |_{delta=0})
            let delta = Matrix::from_diag(
                &r.diag()
                    .into_iter()
                    .map(|v| -(v / Exact::from_i64(k as i64)))
                    .collect::<Vec<_>>(),
            );
            let updated = &p[k] + &delta;
            p[k] = updated;
            // update r for the new diagonal: k delta + delta mu - a_1 delta
            let a1 = a.coeff(1);
            r = &r + &delta.scale(&Exact::from_i64(k as i64));
            r = &r + &(&delta * &mu_matrix);
            r = &r - &(a1 * &delta);
        }
        debug_assert!(r.has_zero_diagonal(), "solvability constraint must hold");
        p.push(sylvester_offdiag_solve(&u, &r.off_diagonal_part())?);
    }

    let gauge = GaugeSeries::new(SeriesMatrix::from_coeffs(p))?;
    let nf = NormalForm {
        exponents: u.diag(),
        residues: mu,
    };
    Ok((gauge, nf))
}

/// Coefficients of `z^2 P' - A P + P Lambda` through the gauge's order: the
/// exact residual of the gauge equation, all zero for a valid reduction.
pub fn gauge_equation_residual(
    system: &RankOneSystem,
    gauge: &GaugeSeries<Exact>,
    nf: &NormalForm,
) -> Vec<Matrix<Exact>> {
    let order = gauge.order();
    let a = system.coeffs_to(order);
    let p = gauge.series();
    let lambda0 = Matrix::from_diag(&nf.exponents);
    let lambda1 = Matrix::from_diag(&nf.residues);
    (0..=order)
        .map(|t| {
            let mut res = if t >= 1 {
                p.coeff(t - 1).scale(&Exact::from_i64((t - 1) as i64))
            } else {
                Matrix::zero(p.dim())
            };
            for j in 0..=t {
                let aj = a.coeff(j);
                if aj.is_zero() {
                    continue;
                }
                res = &res - &(aj * p.coeff(t - j));
            }
            res = &res + &(p.coeff(t) * &lambda0);
            if t >= 1 {
                res = &res + &(p.coeff(t - 1) * &lambda1);
            }
            res
        })
        .collect()
}

/// The explicit gauge `g(z) = exp(-z U^dag)`, truncated to order `n`, which
/// carries the normal form `U` into the Tate system `U - z^2 U^dag`: since
/// `U^dag` is diagonal it commutes with `U`, and `z^2 g' = -z^2 U^dag g`
/// accounts exactly for the `-z^2 U^dag` term.
pub fn exp_gauge_reduce(
    u: &Matrix<Exact>,
    udag: &Matrix<Exact>,
    n: usize,
) -> Result<GaugeSeries<Exact>, FormalError> {
    if !u.is_diagonal() || !udag.is_diagonal() {
        return Err(FormalError::NonDiagonal);
    }
    assert_eq!(&(u * udag), &(udag * u), "diagonal matrices commute");
    let m = u.dim();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut current = Matrix::identity(m);
    coeffs.push(current.clone());
    for k in 1..=n {
        // g_k = g_{k-1} * (-udag) / k, so g_k = (-udag)^k / k!
        let factor = -Exact::one() / Exact::from_i64(k as i64);
        current = (&current * udag).scale(&factor);
        coeffs.push(current.clone());
    }
    Ok(GaugeSeries::new(SeriesMatrix::from_coeffs(coeffs))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq, crat};

    fn diag01() -> Matrix<Exact> {
        Matrix::from_diag(&[crat(0, 1), crat(1, 1)])
    }

    fn involution() -> Matrix<Exact> {
        Matrix::from_rows(vec![
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(1, 1), crat(0, 1)],
        ])
        .unwrap()
    }

    fn assert_gauge_equation_holds(system: &RankOneSystem, n: usize) -> NormalForm {
        let (gauge, nf) = formal_reduce(system, n).unwrap();
        for (t, res) in gauge_equation_residual(system, &gauge, &nf)
            .iter()
            .enumerate()
        {
            assert!(res.is_zero(), "nonzero residual at order {t}");
        }
        nf
    }

    #[test]
    fn bare_diagonal_system_is_already_reduced() {
        let system = RankOneSystem::from_poly(PolyMatrix::constant(diag01()));
        let (gauge, nf) = formal_reduce(&system, 6).unwrap();
        assert_eq!(gauge.series(), &SeriesMatrix::identity(2, 6));
        assert!(nf.residues.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn saito_example_gauge_coefficient() {
        // A = U - z [[0,1],[1,0]]: off-diagonal part of P_1 is [[0,-1],[1,0]]
        let system = RankOneSystem::from_uv(&diag01(), &involution());
        let (gauge, nf) = formal_reduce(&system, 8).unwrap();
        assert!(nf.residues.iter().all(|r| r.is_zero()));
        let p1 = gauge.series().coeff(1);
        assert_eq!(p1.at(0, 1), &crat(-1, 1));
        assert_eq!(p1.at(1, 0), &crat(1, 1));
        assert_gauge_equation_holds(&system, 8);
    }

    #[test]
    fn diagonal_order_z_term_becomes_the_residue() {
        let tail = Matrix::from_diag(&[crat(3, 1), crat(-5, 2)]);
        let a = PolyMatrix::from_coeffs(vec![diag01(), tail]);
        let system = RankOneSystem::from_poly(a);
        let nf = assert_gauge_equation_holds(&system, 6);
        assert_eq!(nf.residues, vec![crat(3, 1), crat(-5, 2)]);
    }

    #[test]
    fn saito_and_cv_systems_share_the_normal_form() {
        let u = diag01();
        let udag = u.conj();
        let v = involution();
        let q = Matrix::from_rows(vec![
            vec![crat(0, 1), cq(1, 2, 1, 3)],
            vec![crat(-2, 1), crat(0, 1)],
        ])
        .unwrap();
        let saito = RankOneSystem::from_uv(&u, &v);
        let cv = RankOneSystem::from_uq_udag(&u, &q, &udag);
        let nf1 = assert_gauge_equation_holds(&saito, 10);
        let nf2 = assert_gauge_equation_holds(&cv, 10);
        assert_eq!(nf1, nf2);
        assert!(nf1.residues.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn coincident_leading_eigenvalues_are_rejected() {
        let u = Matrix::from_diag(&[crat(1, 1), crat(1, 1)]);
        let system = RankOneSystem::from_uv(&u, &involution());
        assert!(matches!(
            formal_reduce(&system, 4),
            Err(FormalError::NonRegularLeading)
        ));
    }

    #[test]
    fn normal_form_is_gauge_invariant() {
        // conjugating the system by a random unit-constant gauge must not
        // change the computed normal form
        let u = diag01();
        let v = involution();
        let system = RankOneSystem::from_uv(&u, &v);
        let n = 8;
        let nf_base = assert_gauge_equation_holds(&system, n);

        let mut seed = 77u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 33) % 9) as i64 - 4
        };
        for _ in 0..3 {
            let mut g = SeriesMatrix::identity(2, n);
            for k in 1..=n {
                g.set_coeff(k, Matrix::from_fn(2, |_, _| crat(next(), 1)));
            }
            let gauge = GaugeSeries::new(g).unwrap();
            let perturbed = gauge.transform_rank_one(&system.coeffs_to(n));
            let perturbed_system = RankOneSystem::from_series(perturbed);
            let (_, nf) = formal_reduce(&perturbed_system, n).unwrap();
            assert_eq!(nf, nf_base);
        }
    }

    #[test]
    fn exp_gauge_carries_normal_form_into_tate_system() {
        let u = Matrix::from_diag(&[cq(0, 1, 1, 1), cq(1, 1, -2, 1)]);
        let udag = u.conj();
        let n = 9;
        let g = exp_gauge_reduce(&u, &udag, n).unwrap();
        // z^2 g' = A g - g U with A = U - z^2 udag, checked coefficientwise
        let system = RankOneSystem::from_uq_udag(&u, &Matrix::zero(2), &udag);
        let nf = NormalForm {
            exponents: u.diag(),
            residues: vec![Exact::zero(); 2],
        };
        for (t, res) in gauge_equation_residual(&system, &g, &nf).iter().enumerate() {
            assert!(res.is_zero(), "nonzero residual at order {t}");
        }
    }

    #[test]
    fn exp_gauge_of_zero_is_identity() {
        let u = diag01();
        let g = exp_gauge_reduce(&u, &Matrix::zero(2), 5).unwrap();
        assert_eq!(g.series(), &SeriesMatrix::identity(2, 5));
    }

    #[test]
    fn exp_gauge_rejects_non_diagonal_input() {
        assert!(matches!(
            exp_gauge_reduce(&involution(), &Matrix::zero(2), 3),
            Err(FormalError::NonDiagonal)
        ));
    }
}
