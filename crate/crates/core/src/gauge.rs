//! Invertible truncated gauge transformations and their action on systems.
//!
//! Convention, fixed once for the whole crate: a "system with matrix A(z)
//! dz/z^2" means `z^2 dPsi/dz = A(z) Psi`, and a gauge `P` acts on solutions
//! by `Psi -> P Psi`, hence on matrices by
//!
//! ```text
//! A  ->  P A P^{-1} + z^2 P' P^{-1}.
//! ```
//!
//! For simple-pole systems `z dPsi/dz = B(z) Psi` the same action reads
//! `B -> P B P^{-1} + z P' P^{-1}`. Reduction routines return gauges oriented
//! from the normal form to the given system, so they satisfy the gauge
//! equation `z^2 P' = A P - P Lambda` coefficient by coefficient.

use crate::error::AlgebraError;
use crate::scalar::{Exact, Scalar, C64};
use crate::series::SeriesMatrix;

/// A truncated matrix power series with invertible constant term.
#[derive(Clone, PartialEq, Debug)]
pub struct GaugeSeries<T> {
    series: SeriesMatrix<T>,
}

impl<T: Scalar> GaugeSeries<T> {
    pub fn new(series: SeriesMatrix<T>) -> Result<Self, AlgebraError> {
        if series.coeff(0).inverse().is_none() {
            return Err(AlgebraError::SingularConstantTerm);
        }
        Ok(GaugeSeries { series })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        GaugeSeries {
            series: SeriesMatrix::identity(dim, order),
        }
    }

    pub fn series(&self) -> &SeriesMatrix<T> {
        &self.series
    }

    pub fn dim(&self) -> usize {
        self.series.dim()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Two-sided series inverse through the truncation order.
    pub fn invert(&self) -> SeriesMatrix<T> {
        self.series
            .invert()
            .expect("constant term checked at construction")
    }

    /// Gauge action on a rank-one system: `P A P^{-1} + z^2 P' P^{-1}`,
    /// truncated to the joint order.
    pub fn transform_rank_one(&self, a: &SeriesMatrix<T>) -> SeriesMatrix<T> {
        let inv = self.invert();
        let conjugated = self.series.mul(a).mul(&inv);
        let derivative_term = self.series.z2_derivative().mul(&inv);
        conjugated.add(&derivative_term)
    }

    /// Gauge action on a simple-pole system: `P B P^{-1} + z P' P^{-1}`.
    pub fn transform_simple_pole(&self, b: &SeriesMatrix<T>) -> SeriesMatrix<T> {
        let inv = self.invert();
        let conjugated = self.series.mul(b).mul(&inv);
        let derivative_term = self.series.z_derivative().mul(&inv);
        conjugated.add(&derivative_term)
    }
}

impl GaugeSeries<Exact> {
    pub fn to_c64(&self) -> GaugeSeries<C64> {
        GaugeSeries {
            series: self.series.to_c64(),
        }
    }
}
