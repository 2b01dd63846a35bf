use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the library, in one place.
///
/// Verdicts are only reproducible if the thresholds are, so reports echo the
/// record they were produced with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenpair certificate: `sigma_min(A - lambda I) <= residual * (1 + ||A||_F)`.
    pub residual: f64,
    /// Relative `||S - S^t||_F / ||S||_F` accepted as symmetric.
    pub symmetry: f64,
    /// Relative backward error accepted from a linear solve.
    pub solve: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass is below `jacobi * ||S||_F`.
    pub jacobi: f64,
    /// `|rho - 1| <= marginal_band` yields a marginal verdict.
    pub marginal_band: f64,
    /// Stein residual bound relative to `1 + ||R||_F`.
    pub stein: f64,
    /// Relative tolerance for the normaloid / spectraloid equalities.
    pub aloid: f64,
    /// Largest matrix dimension `n` for which map spectra (size `n^2`) are computed.
    pub analysis_limit: usize,
    /// Condition estimates above this are treated as singular.
    pub condition_limit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            symmetry: 1e-10,
            solve: 1e-10,
            jacobi: 1e-12,
            marginal_band: 1e-9,
            stein: 1e-8,
            aloid: 1e-6,
            analysis_limit: 12,
            condition_limit: 1e12,
        }
    }
}
