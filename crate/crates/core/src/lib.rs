//! Computable criteria for strong potentiality of semi-simple (Tate)
//! CDV-structures.
//!
//! The crate provides four layers:
//!
//! * exact (Gaussian-rational) and floating-point linear algebra, including
//!   the `ad(U)` Sylvester solver, spectral integrality checks and a matrix
//!   exponential (`scalar`, `matrix`, `poly`, `series`, `sylvester`,
//!   `spectral`, `expm`);
//! * derivation of the `U`, `V`, `Q` matrices and Tate verdicts from
//!   Frobenius-manifold point data (`frobenius`);
//! * formal and holomorphic gauge reduction of rank-one irregular systems to
//!   diagonal normal form (`formal`), and monodromy of the regular-singular
//!   pullback at infinity with exact Levelt reduction plus a numerical
//!   transport oracle (`monodromy`);
//! * the polynomial potentiality solver, its 2x2 closed form, and the
//!   assembled isomorphism factorization (`potentiality`).
//!
//! Everything is a pure function over immutable values; each operation
//! declares which scalar mode it supports through its argument types.

pub mod cpoly;
pub mod error;
pub mod expm;
pub mod formal;
pub mod frobenius;
pub mod gauge;
pub mod matrix;
pub mod monodromy;
pub mod poly;
pub mod potentiality;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod sylvester;

pub use error::AlgebraError;
pub use matrix::{frobenius_distance, Matrix};
pub use poly::PolyMatrix;
pub use scalar::{Exact, Scalar, C64};
pub use series::{SeriesMatrix, SystemCoeffs};
