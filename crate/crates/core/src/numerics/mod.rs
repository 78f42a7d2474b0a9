//! Small dense kernels: cubic roots, 4x4 eigenvalues, dense linear solves.

pub mod cubic;
pub mod eigen;
pub mod linsolve;
pub mod mat4;

use thiserror::Error;

pub use cubic::cubic_real_roots;
pub use eigen::eig4;
pub use linsolve::solve_dense;
pub use mat4::{det2, Mat4};

/// Complex value with real and imaginary parts.
pub type ComplexNumber = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("all polynomial coefficients of degree >= 1 are zero")]
    AllCoefficientsZero,
    #[error("non-finite input")]
    NonFinite,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
