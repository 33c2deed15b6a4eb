//! Error types for the algebra layer.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("matrix is not square")]
    NonSquare,
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("U must be diagonal with pairwise distinct diagonal entries")]
    NonRegularU,
    #[error("right-hand side must have zero diagonal")]
    NonzeroDiagonal,
    #[error("series has a singular constant term")]
    SingularConstantTerm,
    #[error("intermediate magnitudes exceeded the floating-point range")]
    Overflow,
}
