//! Self-contained dense real linear algebra.

mod eigen;
mod kron;
mod matrix;
mod solve;
mod symmetric;

pub use eigen::{eigenvalues, spectral_radius, Spectrum, QR_SWEEPS_PER_DIM};
pub use kron::{commutation_matrix, kron, svec, svec_len, unsvec, unvec, vec};
pub use matrix::Matrix;
pub use solve::{guarded_inverse, inverse_with_condition, solve_linear, Lu};
pub use symmetric::{
    operator_norm, symmetric_eigenvalues, symmetric_eigenvalues_with, symmetric_max_eigenvalue,
    JACOBI_MAX_SWEEPS,
};
