//! Semi-simple Frobenius/CDV point data in canonical coordinates, and the
//! matrices and Tate verdicts derived from it.
//!
//! A `FrobeniusPoint` carries the canonical coordinates `u^1..u^m`, the jets
//! `eta_i = d(eta)/d(u^i)` and `eta_ij` of the metric potential, the constant
//! `d`, and optionally the real-structure matrix `K`. All data is pointwise
//! and exact; nothing here integrates over the manifold.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::{is_positive_real, Exact};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrobeniusError {
    #[error("canonical coordinates must be pairwise distinct")]
    CoincidentCoordinates,
    #[error("metric potential derivative eta_{0} vanishes")]
    ZeroEta(usize),
    #[error("eta_second must be symmetric")]
    AsymmetricSecondJet,
    #[error("field lengths do not match the dimension")]
    DimensionMismatch,
    #[error("this check needs the kappa matrix")]
    MissingKappa,
    #[error("this criterion applies to dimension 2 only")]
    DimensionNotTwo,
    #[error("Tate hypothesis eta_2 = -eta_1 violated")]
    HypothesisViolated,
}

/// Point data of a semi-simple Frobenius manifold in canonical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusPoint {
    m: usize,
    u: Vec<Exact>,
    eta_first: Vec<Exact>,
    eta_second: Matrix<Exact>,
    d: BigRational,
    kappa: Option<Matrix<Exact>>,
}

impl FrobeniusPoint {
    pub fn new(
        u: Vec<Exact>,
        eta_first: Vec<Exact>,
        eta_second: Matrix<Exact>,
        d: BigRational,
        kappa: Option<Matrix<Exact>>,
    ) -> Result<Self, FrobeniusError> {
        let m = u.len();
        if m == 0 || eta_first.len() != m || eta_second.dim() != m {
            return Err(FrobeniusError::DimensionMismatch);
        }
        if let Some(k) = &kappa {
            if k.dim() != m {
                return Err(FrobeniusError::DimensionMismatch);
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if u[i] == u[j] {
                    return Err(FrobeniusError::CoincidentCoordinates);
                }
            }
        }
        if let Some(i) = eta_first.iter().position(|e| e.is_zero()) {
            return Err(FrobeniusError::ZeroEta(i + 1));
        }
        if eta_second != eta_second.transpose() {
            return Err(FrobeniusError::AsymmetricSecondJet);
        }
        Ok(FrobeniusPoint {
            m,
            u,
            eta_first,
            eta_second,
            d,
            kappa,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn u(&self) -> &[Exact] {
        &self.u
    }

    /// `U = diag(u^1, ..., u^m)`.
    pub fn u_matrix(&self) -> Matrix<Exact> {
        Matrix::from_diag(&self.u)
    }

    /// `U^dag = conj(U)`: in the Tate canonical frame the adjoint of `U` is
    /// the diagonal of conjugated coordinates, and it commutes with `U`.
    pub fn udag_matrix(&self) -> Matrix<Exact> {
        self.u_matrix().conj()
    }

    pub fn eta_first(&self) -> &[Exact] {
        &self.eta_first
    }

    pub fn d(&self) -> &BigRational {
        &self.d
    }

    pub fn kappa(&self) -> Option<&Matrix<Exact>> {
        self.kappa.as_ref()
    }
}

/// The `V` matrix from the metric-potential jets:
/// `V_ij = (u^j - u^i) eta_ij / (2 eta_j)` off the diagonal, zero on it.
pub fn v_from_potential(p: &FrobeniusPoint) -> Matrix<Exact> {
    let two = Exact::from(BigRational::from_integer(2.into()));
    Matrix::from_fn(p.m, |i, j| {
        if i == j {
            Exact::zero()
        } else {
            (p.u[j].clone() - p.u[i].clone()) * p.eta_second.at(i, j).clone()
                / (two.clone() * p.eta_first[j].clone())
        }
    })
}

/// The `Q` matrix from the Chern-connection forms evaluated on the Euler
/// field: `Q_ij = omega_i^j(E)` off the diagonal, zero on it.
pub fn q_from_connection_forms(omega_e: &Matrix<Exact>) -> Matrix<Exact> {
    omega_e.off_diagonal_part()
}

/// Pointwise witnesses for the equivalent Tate conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct TateReport {
    pub kappa_diagonal: bool,
    pub kappa_unimodular: bool,
    pub h_matches_abs_eta: bool,
    pub commutators_vanish: bool,
    pub overall: bool,
}

/// Check the diagonal/unimodular/positivity structure of `kappa` and the
/// vanishing of all commutators `[C^(i), conj(K) conj(C^(j)) K]`, where
/// `C^(i) = E_ii` are the canonical-frame structure constants.
pub fn tate_structure_check(p: &FrobeniusPoint) -> Result<TateReport, FrobeniusError> {
    let k = p.kappa().ok_or(FrobeniusError::MissingKappa)?;
    let m = p.m;

    let kappa_diagonal = k.is_diagonal();

    // |K_ii| = 1 tested exactly as K_ii * conj(K_ii) = 1
    let kappa_unimodular = (0..m).all(|i| {
        let kii = k.at(i, i);
        kii.clone() * kii.conj() == Exact::one()
    });

    // h_ii = K_ii eta_i must be positive real and equal |eta_i|, i.e.
    // h_ii > 0 and h_ii^2 = eta_i conj(eta_i)
    let h_matches_abs_eta = (0..m).all(|i| {
        let h = k.at(i, i).clone() * p.eta_first[i].clone();
        let eta = &p.eta_first[i];
        is_positive_real(&h) && h.clone() * h.clone() == eta.clone() * eta.conj()
    });

    let kbar = k.conj();
    let commutators_vanish = (0..m).all(|i| {
        let ci = unit_structure_constant(m, i);
        (0..m).all(|j| {
            let cj_tilde = &(&kbar * &unit_structure_constant(m, j)) * k;
            ci.commutator(&cj_tilde).is_zero()
        })
    });

    let overall = kappa_diagonal && kappa_unimodular && h_matches_abs_eta && commutators_vanish;
    Ok(TateReport {
        kappa_diagonal,
        kappa_unimodular,
        h_matches_abs_eta,
        commutators_vanish,
        overall,
    })
}

/// Canonical structure constants: multiplication by the idempotent `e_i` is
/// the elementary matrix `E_ii`.
pub fn unit_structure_constant(m: usize, i: usize) -> Matrix<Exact> {
    let mut c = Matrix::zero(m);
    c.set(i, i, Exact::one());
    c
}

/// The twisted structure constants `conj(K) conj(C^(i)) K`.
pub fn twisted_structure_constant(kappa: &Matrix<Exact>, i: usize) -> Matrix<Exact> {
    let m = kappa.dim();
    &(&kappa.conj() * &unit_structure_constant(m, i)) * kappa
}

/// Verdict of the explicit two-dimensional criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Dim2Criterion {
    pub strongly_potential: bool,
    /// `n = d/2`, integral exactly in the strongly potential case.
    pub n: BigRational,
    /// The `V` matrix the Tate family forces: `(d/2) [[0,1],[1,0]]`.
    pub predicted_v: Matrix<Exact>,
}

/// Two-dimensional criterion: with `g(e,e) = 0` the Tate family has
/// `eta_2 = -eta_1`, forcing `V = (d/2) [[0,1],[1,0]]`, and the structure is
/// strongly potential exactly when `d` is an even integer.
pub fn dim2_criterion(p: &FrobeniusPoint) -> Result<Dim2Criterion, FrobeniusError> {
    if p.m != 2 {
        return Err(FrobeniusError::DimensionNotTwo);
    }
    if p.eta_first[1] != -p.eta_first[0].clone() {
        return Err(FrobeniusError::HypothesisViolated);
    }
    let n = p.d.clone() / BigRational::from_integer(2.into());
    let strongly_potential = n.denom().is_one();
    let half_d = Exact::from(n.clone());
    let predicted_v = Matrix::from_rows(vec![
        vec![Exact::zero(), half_d.clone()],
        vec![half_d, Exact::zero()],
    ])
    .expect("square by construction");
    Ok(Dim2Criterion {
        strongly_potential,
        n,
        predicted_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq, crat, rat};

    /// eta = u^1 u^2: eta_1 = u^2, eta_2 = u^1, eta_12 = 1, at (2, 3).
    fn product_potential_point() -> FrobeniusPoint {
        let eta_second = Matrix::from_rows(vec![
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(1, 1), crat(0, 1)],
        ])
        .unwrap();
        FrobeniusPoint::new(
            vec![crat(2, 1), crat(3, 1)],
            vec![crat(3, 1), crat(2, 1)],
            eta_second,
            rat(0, 1),
            None,
        )
        .unwrap()
    }

    /// The 2x2 Tate family at (u1, u2) with homogeneity constant d: from
    /// g(e,e) = 0 and E(eta_1) = d eta_2 one gets eta_2 = -eta_1 and
    /// eta_12 = -eta_11 = d eta_1 / (u^1 - u^2).
    fn tate_family_point(d: (i64, i64), kappa: Option<Matrix<Exact>>) -> FrobeniusPoint {
        let u1 = crat(0, 1);
        let u2 = crat(1, 1);
        let eta1 = crat(5, 1);
        let dd = Exact::from(rat(d.0, d.1));
        let eta12 = dd * eta1.clone() / (u1.clone() - u2.clone());
        let eta_second = Matrix::from_rows(vec![
            vec![-eta12.clone(), eta12.clone()],
            vec![eta12.clone(), -eta12],
        ])
        .unwrap();
        FrobeniusPoint::new(
            vec![u1, u2],
            vec![eta1.clone(), -eta1],
            eta_second,
            rat(d.0, d.1),
            kappa,
        )
        .unwrap()
    }

    #[test]
    fn vanishing_second_jet_gives_zero_v() {
        let p = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1), crat(2, 1)],
            vec![crat(1, 1), crat(1, 1), crat(1, 1)],
            Matrix::zero(3),
            rat(0, 1),
            None,
        )
        .unwrap();
        assert!(v_from_potential(&p).is_zero());
    }

    #[test]
    fn product_potential_values() {
        let v = v_from_potential(&product_potential_point());
        // V_12 = (u2 - u1) eta_12 / (2 eta_2) = 1/4
        assert_eq!(v.at(0, 1), &crat(1, 4));
        // V_21 = (u1 - u2) eta_21 / (2 eta_1) = -1/6
        assert_eq!(v.at(1, 0), &crat(-1, 6));
        assert!(v.has_zero_diagonal());
    }

    #[test]
    fn tate_family_matches_predicted_v() {
        for d in [(-3i64, 1i64), (0, 1), (2, 1), (3, 1), (7, 2)] {
            let p = tate_family_point(d, None);
            let v = v_from_potential(&p);
            let half_d = Exact::from(rat(d.0, 2 * d.1));
            assert_eq!(v.at(0, 1), &half_d);
            assert_eq!(v.at(1, 0), &half_d);
            assert!(v.has_zero_diagonal());
        }
    }

    #[test]
    fn dim2_criterion_parity() {
        let even = dim2_criterion(&tate_family_point((2, 1), None)).unwrap();
        assert!(even.strongly_potential);
        assert_eq!(even.n, rat(1, 1));
        assert_eq!(
            even.predicted_v,
            v_from_potential(&tate_family_point((2, 1), None))
        );

        let odd = dim2_criterion(&tate_family_point((3, 1), None)).unwrap();
        assert!(!odd.strongly_potential);
        assert_eq!(odd.n, rat(3, 2));

        let zero = dim2_criterion(&tate_family_point((0, 1), None)).unwrap();
        assert!(zero.strongly_potential);
        assert_eq!(zero.n, rat(0, 1));
        assert!(zero.predicted_v.is_zero());
    }

    #[test]
    fn dim2_criterion_rejects_bad_hypotheses() {
        assert_eq!(
            dim2_criterion(&product_potential_point()),
            Err(FrobeniusError::HypothesisViolated)
        );
        let p3 = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1), crat(2, 1)],
            vec![crat(1, 1), crat(1, 1), crat(1, 1)],
            Matrix::zero(3),
            rat(2, 1),
            None,
        )
        .unwrap();
        assert_eq!(dim2_criterion(&p3), Err(FrobeniusError::DimensionNotTwo));
    }

    #[test]
    fn q_discards_the_diagonal() {
        let omega = Matrix::from_rows(vec![
            vec![crat(5, 1), crat(1, 1)],
            vec![crat(2, 1), crat(7, 1)],
        ])
        .unwrap();
        let q = q_from_connection_forms(&omega);
        assert_eq!(q.at(0, 1), &crat(1, 1));
        assert_eq!(q.at(1, 0), &crat(2, 1));
        assert!(q.has_zero_diagonal());
        assert!(q_from_connection_forms(&Matrix::zero(2)).is_zero());
    }

    #[test]
    fn tate_check_all_true_for_identity_kappa() {
        let p = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(2, 1), crat(3, 1)],
            Matrix::zero(2),
            rat(0, 1),
            Some(Matrix::identity(2)),
        )
        .unwrap();
        let report = tate_structure_check(&p).unwrap();
        assert!(report.overall);
    }

    #[test]
    fn tate_check_flags_offdiagonal_kappa() {
        let kappa = Matrix::from_rows(vec![
            vec![crat(1, 1), crat(1, 1)],
            vec![crat(0, 1), crat(1, 1)],
        ])
        .unwrap();
        let p = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(2, 1), crat(3, 1)],
            Matrix::zero(2),
            rat(0, 1),
            Some(kappa),
        )
        .unwrap();
        let report = tate_structure_check(&p).unwrap();
        assert!(!report.kappa_diagonal);
        assert!(!report.overall);
    }

    #[test]
    fn tate_check_negative_eta_with_sign_flip() {
        // eta_1 = -2 with K_11 = -1: h_11 = 2 = |eta_1|
        let kappa = Matrix::from_diag(&[crat(-1, 1), crat(1, 1)]);
        let p = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(-2, 1), crat(3, 1)],
            Matrix::zero(2),
            rat(0, 1),
            Some(kappa),
        )
        .unwrap();
        let report = tate_structure_check(&p).unwrap();
        assert!(report.kappa_diagonal);
        assert!(report.kappa_unimodular);
        assert!(report.h_matches_abs_eta);
        assert!(report.commutators_vanish);
        assert!(report.overall);
    }

    #[test]
    fn overall_true_implies_twisted_constants_are_canonical() {
        let kappa = Matrix::from_diag(&[crat(-1, 1), crat(1, 1)]);
        let p = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(-2, 1), crat(3, 1)],
            Matrix::zero(2),
            rat(0, 1),
            Some(kappa.clone()),
        )
        .unwrap();
        assert!(tate_structure_check(&p).unwrap().overall);
        for i in 0..2 {
            assert_eq!(
                twisted_structure_constant(&kappa, i),
                unit_structure_constant(2, i)
            );
        }
    }

    #[test]
    fn invariants_rejected_at_construction() {
        let r = FrobeniusPoint::new(
            vec![crat(1, 1), crat(1, 1)],
            vec![crat(1, 1), crat(1, 1)],
            Matrix::zero(2),
            rat(0, 1),
            None,
        );
        assert_eq!(r, Err(FrobeniusError::CoincidentCoordinates));

        let r = FrobeniusPoint::new(
            vec![crat(0, 1), crat(1, 1)],
            vec![crat(0, 1), crat(1, 1)],
            Matrix::zero(2),
            rat(0, 1),
            None,
        );
        assert_eq!(r, Err(FrobeniusError::ZeroEta(1)));
    }

    #[test]
    fn udag_is_conjugate_and_commutes() {
        let p = FrobeniusPoint::new(
            vec![cq(1, 1, 2, 1), cq(0, 1, -1, 3)],
            vec![crat(1, 1), crat(1, 1)],
            Matrix::zero(2),
            rat(0, 1),
            None,
        )
        .unwrap();
        let u = p.u_matrix();
        let udag = p.udag_matrix();
        assert_eq!(udag.at(0, 0), &cq(1, 1, -2, 1));
        assert_eq!(&(&u * &udag), &(&udag * &u));
    }
}
