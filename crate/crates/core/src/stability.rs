//! Schur stability criteria: eigenvalues, the 2x2 trace/determinant test,
//! the Stein (discrete Lyapunov) equation, the semidefinite complementarity
//! formulation and power convergence, plus the normaloid / spectraloid
//! classification.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    self, eigenvalues, kron, operator_norm, solve_linear, symmetric_eigenvalues,
    symmetric_max_eigenvalue, unvec, Matrix, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl Verdict {
    pub fn from_radius(rho: f64, band: f64) -> Self {
        if rho <= 1.0 - band {
            Verdict::Stable
        } else if rho >= 1.0 + band {
            Verdict::Unstable
        } else {
            Verdict::Marginal
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur_2x2: Option<Schur2x2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stein: Option<SteinSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<PowerLimit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub spectral_radius: f64,
    /// `1 - rho`.
    pub margin: f64,
    pub spectrum: Spectrum,
    pub evidence: Evidence,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::Stable
    }

    /// Evidence that contradicts the verdict, if any.
    pub fn inconsistency(&self) -> Option<String> {
        if let Some(s) = &self.evidence.schur_2x2 {
            let decisive = self.verdict != Verdict::Marginal;
            if decisive && s.stable != self.is_stable() {
                return Some("2x2 trace/determinant test disagrees with the spectrum".into());
            }
        }
        if let Some(st) = &self.evidence.stein {
            if st.min_eigenvalue > 0.0 && self.verdict == Verdict::Unstable {
                return Some("positive definite Stein solution for an unstable matrix".into());
            }
        }
        if let Some(p) = &self.evidence.power {
            let bad = matches!(
                (p.verdict, self.verdict),
                (PowerVerdict::Converging, Verdict::Unstable)
                    | (PowerVerdict::Diverging, Verdict::Stable)
            );
            if bad {
                return Some("power iteration disagrees with the spectrum".into());
            }
        }
        None
    }
}

pub fn is_schur_stable(a: &Matrix) -> Result<StabilityReport> {
    is_schur_stable_with(a, &Tolerances::default())
}

pub fn is_schur_stable_with(a: &Matrix, tol: &Tolerances) -> Result<StabilityReport> {
    let spectrum = eigenvalues(a)?;
    let rho = spectrum.spectral_radius;
    Ok(StabilityReport {
        verdict: Verdict::from_radius(rho, tol.marginal_band),
        spectral_radius: rho,
        margin: 1.0 - rho,
        spectrum,
        evidence: Evidence::default(),
    })
}

/// Closed-form test for 2x2 matrices: stable iff `|tr A| < 1 + det A` and
/// `|det A| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schur2x2 {
    pub trace: f64,
    pub det: f64,
    /// `|tr A| < 1 + det A`
    pub trace_condition: bool,
    /// `|det A| < 1`
    pub det_condition: bool,
    pub stable: bool,
}

pub fn schur_2x2(a: &Matrix) -> Result<Schur2x2> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch {
            context: "2x2 stability test",
            expected: 2,
            found: a.rows().max(a.cols()),
        });
    }
    let trace = a[(0, 0)] + a[(1, 1)];
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let trace_condition = trace.abs() < 1.0 + det;
    let det_condition = det.abs() < 1.0;
    Ok(Schur2x2 {
        trace,
        det,
        trace_condition,
        det_condition,
        stable: trace_condition && det_condition,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinSolution {
    pub x: Matrix,
    /// `||X - A^t X A - R||_F`
    pub residual: f64,
    pub min_eigenvalue: f64,
}

impl SteinSolution {
    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue > 0.0
    }
}

fn stein_residual(a: &Matrix, x: &Matrix, r: &Matrix) -> Result<f64> {
    let atxa = a.transpose().matmul(x)?.matmul(a)?;
    Ok(x.try_sub(&atxa)?.try_sub(r)?.frobenius_norm())
}

fn check_same_dim(n: usize, m: &Matrix, context: &'static str) -> Result<()> {
    let k = m.square_dim()?;
    if k != n {
        return Err(Error::DimensionMismatch {
            context,
            expected: n,
            found: k,
        });
    }
    Ok(())
}

/// Solves `X - A^t X A = R` through `(I - A^t ⊗ A^t) vec X = vec R`.
///
/// The system is singular exactly when some product of two eigenvalues of
/// `A` equals one.
pub fn solve_stein(a: &Matrix, r: &Matrix) -> Result<SteinSolution> {
    solve_stein_with(a, r, &Tolerances::default())
}

pub fn solve_stein_with(a: &Matrix, r: &Matrix, tol: &Tolerances) -> Result<SteinSolution> {
    let n = a.square_dim()?;
    check_same_dim(n, r, "Stein right-hand side")?;
    r.ensure_symmetric(tol.symmetry)?;
    let at = a.transpose();
    let system = Matrix::identity(n * n).try_sub(&kron(&at, &at))?;
    let v = solve_linear(&system, &linalg::vec(r))
        .map_err(|e| Error::NoUniqueSolution(Box::new(e)))?;
    let x = unvec(&v, n)?.symmetric_part();
    let residual = stein_residual(a, &x, r)?;
    let min_eigenvalue = symmetric_eigenvalues(&x)?[0];
    Ok(SteinSolution {
        x,
        residual,
        min_eigenvalue,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinSeries {
    pub sum: Matrix,
    /// Frobenius norm of the last term added.
    pub last_term_norm: f64,
}

/// Partial sum `sum_{k=0..=terms} (A^t)^k R A^k`.
pub fn stein_series(a: &Matrix, r: &Matrix, terms: usize) -> Result<SteinSeries> {
    let n = a.square_dim()?;
    check_same_dim(n, r, "Stein right-hand side")?;
    let at = a.transpose();
    let mut term = r.clone();
    let mut sum = r.clone();
    for k in 1..=terms {
        term = at.matmul(&term)?.matmul(a)?;
        let norm = term.frobenius_norm();
        if !norm.is_finite() || norm > 1e150 {
            return Err(Error::Divergence { term: k });
        }
        sum = sum.try_add(&term)?;
    }
    Ok(SteinSeries {
        last_term_norm: term.frobenius_norm(),
        sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdlcpGaps {
    /// Largest `||S - S^t||_F` over Q, X, Y.
    pub symmetry: f64,
    /// `||Y - X + A^t X A - Q||_F`
    pub equation: f64,
    pub min_eig_x: f64,
    pub min_eig_y: f64,
    /// `|trace(Y X)|`
    pub complementarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdlcpCertificate {
    pub x: Matrix,
    pub y: Matrix,
    pub gaps: SdlcpGaps,
    pub valid: bool,
}

/// Bound applied to the SDLCP equation, cone and complementarity gaps.
pub const SDLCP_TOLERANCE: f64 = 1e-8;

/// Checks `X, Y >= 0` (semidefinite), `Y = X - A^t X A + Q` and
/// `trace(Y X) = 0`.
///
/// Strict definiteness cannot coexist with `trace(Y X) = 0`, so the cones are
/// the positive semidefinite ones.
pub fn verify_sdlcp(a: &Matrix, q: &Matrix, x: &Matrix, y: &Matrix) -> Result<SdlcpCertificate> {
    let tol = Tolerances::default();
    let n = a.square_dim()?;
    check_same_dim(n, q, "SDLCP Q")?;
    check_same_dim(n, x, "SDLCP X")?;
    check_same_dim(n, y, "SDLCP Y")?;
    let mut symmetry: f64 = 0.0;
    for m in [q, x, y] {
        m.ensure_symmetric(tol.symmetry)?;
        symmetry = symmetry.max(m.asymmetry()?);
    }
    let atxa = a.transpose().matmul(x)?.matmul(a)?;
    let equation = y.try_sub(x)?.try_add(&atxa)?.try_sub(q)?.frobenius_norm();
    let min_eig_x = symmetric_eigenvalues(x)?[0];
    let min_eig_y = symmetric_eigenvalues(y)?[0];
    let complementarity = y.matmul(x)?.trace().abs();
    let valid = equation <= SDLCP_TOLERANCE * (1.0 + q.frobenius_norm())
        && min_eig_x >= -SDLCP_TOLERANCE
        && min_eig_y >= -SDLCP_TOLERANCE
        && complementarity <= SDLCP_TOLERANCE * (1.0 + x.frobenius_norm() * y.frobenius_norm());
    Ok(SdlcpCertificate {
        x: x.clone(),
        y: y.clone(),
        gaps: SdlcpGaps {
            symmetry,
            equation,
            min_eig_x,
            min_eig_y,
            complementarity,
        },
        valid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SdlcpOutcome {
    Solved { certificate: SdlcpCertificate },
    /// The Stein candidate is not semidefinite. Says nothing about feasibility.
    UnsolvedBySpecialCase { min_eigenvalue: f64 },
}

/// Tries the complementary solution `Y = 0`, i.e. `X - A^t X A = -Q`.
pub fn sdlcp_special_solve(a: &Matrix, q: &Matrix) -> Result<SdlcpOutcome> {
    let stein = solve_stein(a, &q.scale(-1.0))?;
    if stein.min_eigenvalue < -SDLCP_TOLERANCE {
        return Ok(SdlcpOutcome::UnsolvedBySpecialCase {
            min_eigenvalue: stein.min_eigenvalue,
        });
    }
    let n = a.rows();
    let certificate = verify_sdlcp(a, q, &stein.x, &Matrix::zeros(n, n))?;
    Ok(SdlcpOutcome::Solved { certificate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLimit {
    pub verdict: PowerVerdict,
    /// Power at which the verdict was reached (or `k_max`).
    pub k: usize,
    /// `||A^j||_F` for the last few powers computed, oldest first.
    pub tail_norms: Vec<f64>,
}

const POWER_CONVERGED: f64 = 1e-10;
const POWER_DIVERGED: f64 = 1e10;
const POWER_TAIL: usize = 8;

pub fn power_limit(a: &Matrix, k_max: usize) -> Result<PowerLimit> {
    let n = a.square_dim()?;
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let mut p = Matrix::identity(n);
    let mut tail = Vec::with_capacity(POWER_TAIL);
    for k in 1..=k_max {
        p = p.matmul(a)?;
        let norm = p.frobenius_norm();
        if tail.len() == POWER_TAIL {
            tail.remove(0);
        }
        tail.push(norm);
        let verdict = if norm < POWER_CONVERGED {
            Some(PowerVerdict::Converging)
        } else if !norm.is_finite() || norm > POWER_DIVERGED {
            Some(PowerVerdict::Diverging)
        } else {
            None
        };
        if let Some(verdict) = verdict {
            return Ok(PowerLimit {
                verdict,
                k,
                tail_norms: tail,
            });
        }
    }
    Ok(PowerLimit {
        verdict: PowerVerdict::Inconclusive,
        k: k_max,
        tail_norms: tail,
    })
}

/// Number of angles sampled on `[0, pi]` before local refinement.
pub const RADIUS_GRID: usize = 256;
/// Width of the angle bracket at which refinement stops.
pub const RADIUS_ANGLE_TOL: f64 = 1e-8;

/// Numerical radius `w(A) = max_theta lambda_max(Re(e^{i theta} A))`.
///
/// For real `A` the Hermitian part `C + iD` (with `C = cos(theta) (A + A^t)/2`,
/// `D = sin(theta) (A - A^t)/2`) is handled through its real symmetric
/// doubling `[[C, -D], [D, C]]`, which has the same eigenvalues twice. Since
/// `Re(e^{-i theta} A)` is the conjugate of `Re(e^{i theta} A)`, angles in
/// `[0, pi]` suffice.
pub fn numerical_radius(a: &Matrix) -> Result<f64> {
    let n = a.square_dim()?;
    let sym = a.symmetric_part();
    let skew = Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] - a[(j, i)]));
    let f = |theta: f64| -> Result<f64> {
        let (c, s) = (theta.cos(), theta.sin());
        let h = Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, bj) = (i / n, j / n);
            let (ii, jj) = (i % n, j % n);
            match (bi, bj) {
                (0, 0) | (1, 1) => c * sym[(ii, jj)],
                (0, 1) => -s * skew[(ii, jj)],
                _ => s * skew[(ii, jj)],
            }
        });
        symmetric_max_eigenvalue(&h)
    };

    let step = std::f64::consts::PI / (RADIUS_GRID - 1) as f64;
    let values = (0..RADIUS_GRID)
        .map(|k| f(k as f64 * step))
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..RADIUS_GRID).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut best = values[order[0]];
    // Refine the three best grid points; the maximum of lambda_max is a
    // maximum of smooth branches, so it sits within one cell of a grid peak.
    for &k in order.iter().take(3) {
        let lo = k.saturating_sub(1) as f64 * step;
        let hi = (k + 1).min(RADIUS_GRID - 1) as f64 * step;
        best = best.max(maximize(&f, lo, hi)?);
    }
    Ok(best)
}

/// Brent-style maximization on `[lo, hi]`: parabolic steps through the three
/// best points, with golden-section steps whenever the parabola misbehaves.
fn maximize(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    const GOLD: f64 = 0.381_966_011_250_105;
    let mut x = lo + GOLD * (hi - lo);
    let (mut w, mut v) = (x, x);
    let mut fx = -f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let tol1 = RADIUS_ANGLE_TOL * 0.5;
        if (x - mid).abs() <= 2.0 * tol1 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < 2.0 * tol1 || hi - u < 2.0 * tol1 {
                    d = tol1.copysign(mid - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { lo - x } else { hi - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = -f(u)?;
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok(-fx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AloidClass {
    pub normaloid: bool,
    pub spectraloid: bool,
    pub spectral_radius: f64,
    pub operator_norm: f64,
    pub numerical_radius: f64,
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Normaloid: `rho = ||A||`. Spectraloid: `rho = w(A)`.
pub fn classify_aloid(a: &Matrix) -> Result<AloidClass> {
    let tol = Tolerances::default().aloid;
    let rho = eigenvalues(a)?.spectral_radius;
    let norm = operator_norm(a)?;
    let mut w = numerical_radius(a)?;
    // rho <= w <= ||A|| holds exactly; pull round-off excursions back in.
    if w < rho && rel_eq(w, rho, tol) {
        w = rho;
    }
    if w > norm && rel_eq(w, norm, tol) {
        w = norm;
    }
    let normaloid = rel_eq(rho, norm, tol);
    let spectraloid = normaloid || rel_eq(rho, w, tol);
    Ok(AloidClass {
        normaloid,
        spectraloid,
        spectral_radius: rho,
        operator_norm: norm,
        numerical_radius: w,
    })
}

/// Nilpotent iff `||A^n||_F <= 1e-8 max(1, ||A||_F^n)`.
pub fn is_nilpotent(a: &Matrix) -> Result<bool> {
    let n = a.square_dim()?;
    let power = a.powi(n)?.frobenius_norm();
    Ok(power <= 1e-8 * a.frobenius_norm().powi(n as i32).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eg21_a() -> Matrix {
        Matrix::from_rows(&[[1.17258, 1.35575], [-0.94256, -0.39761]])
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::from_radius(0.5, 1e-9), Verdict::Stable);
        assert_eq!(Verdict::from_radius(1.0, 1e-9), Verdict::Marginal);
        assert_eq!(Verdict::from_radius(1.0 + 5e-10, 1e-9), Verdict::Marginal);
        assert_eq!(Verdict::from_radius(1.1, 1e-9), Verdict::Unstable);
    }

    #[test]
    fn zero_matrix_is_stable() {
        let r = is_schur_stable(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert_eq!(r.spectral_radius, 0.0);
        assert_eq!(r.margin, 1.0);
    }

    #[test]
    fn two_by_two_criterion() {
        let z = schur_2x2(&Matrix::zeros(2, 2)).unwrap();
        assert!(z.stable && z.trace_condition && z.det_condition);

        let s = schur_2x2(&eg21_a()).unwrap();
        assert_close(s.trace, 0.77497, 1e-12);
        assert_close(s.det, 0.811_646_186_2, 1e-10);
        assert!(s.stable);

        let s = schur_2x2(&Matrix::diag(&[2.0, 0.0])).unwrap();
        assert!(!s.trace_condition && !s.stable);

        assert!(schur_2x2(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn stein_closed_forms() {
        let s = solve_stein(&Matrix::zeros(2, 2), &Matrix::identity(2)).unwrap();
        assert_eq!(s.x, Matrix::identity(2));
        assert_eq!(s.residual, 0.0);

        let half = Matrix::from_rows(&[[0.5]]);
        let s = solve_stein(&half, &Matrix::from_rows(&[[1.0]])).unwrap();
        assert_close(s.x[(0, 0)], 4.0 / 3.0, 1e-15);

        let series = stein_series(&half, &Matrix::from_rows(&[[1.0]]), 200).unwrap();
        assert_close(series.sum[(0, 0)], 4.0 / 3.0, 1e-15);
        assert_eq!(stein_series(&half, &Matrix::from_rows(&[[1.0]]), 0).unwrap().sum[(0, 0)], 1.0);
    }

    #[test]
    fn stein_singular_when_eigenvalue_product_is_one() {
        let err = solve_stein(&Matrix::identity(2), &Matrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NoUniqueSolution(_)));
        assert!(err.is_numerical());
    }

    #[test]
    fn stein_for_example_matrix_is_positive_definite() {
        let a = eg21_a();
        let s = solve_stein(&a, &Matrix::identity(2)).unwrap();
        assert!(s.min_eigenvalue > 0.0);
        assert!(s.residual <= 1e-8 * (1.0 + 2f64.sqrt()));
        let series = stein_series(&a, &Matrix::identity(2), 400).unwrap();
        assert!(series.sum.try_sub(&s.x).unwrap().frobenius_norm() < 1e-8);
    }

    #[test]
    fn stein_series_diverges_for_unstable() {
        let a = Matrix::diag(&[3.0, 0.0]);
        assert!(matches!(
            stein_series(&a, &Matrix::identity(2), 1000),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn sdlcp_verification() {
        let n = 2;
        let cert = verify_sdlcp(
            &Matrix::zeros(n, n),
            &Matrix::identity(n).scale(-1.0),
            &Matrix::identity(n),
            &Matrix::zeros(n, n),
        )
        .unwrap();
        assert!(cert.valid);

        let cert = verify_sdlcp(
            &Matrix::from_rows(&[[0.5]]),
            &Matrix::from_rows(&[[-1.0]]),
            &Matrix::from_rows(&[[4.0 / 3.0]]),
            &Matrix::from_rows(&[[0.0]]),
        )
        .unwrap();
        assert!(cert.valid, "{cert:?}");

        let cert = verify_sdlcp(
            &Matrix::zeros(n, n),
            &Matrix::zeros(n, n),
            &Matrix::identity(n),
            &Matrix::identity(n),
        )
        .unwrap();
        assert!(!cert.valid);
        assert_eq!(cert.gaps.complementarity, 2.0);

        let asym = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(verify_sdlcp(&Matrix::zeros(2, 2), &asym, &asym, &asym).is_err());
        assert!(verify_sdlcp(&Matrix::zeros(2, 2), &Matrix::zeros(3, 3), &asym, &asym).is_err());
    }

    #[test]
    fn sdlcp_special_case() {
        let a = eg21_a();
        match sdlcp_special_solve(&a, &Matrix::identity(2).scale(-1.0)).unwrap() {
            SdlcpOutcome::Solved { certificate } => {
                assert!(certificate.valid);
                assert!(certificate.gaps.min_eig_x > 0.0);
            }
            other => panic!("{other:?}"),
        }
        let out = sdlcp_special_solve(&Matrix::zeros(2, 2), &Matrix::identity(2)).unwrap();
        assert!(matches!(out, SdlcpOutcome::UnsolvedBySpecialCase { .. }));
        match sdlcp_special_solve(&Matrix::from_rows(&[[0.5]]), &Matrix::from_rows(&[[-1.0]])).unwrap()
        {
            SdlcpOutcome::Solved { certificate } => {
                assert_close(certificate.x[(0, 0)], 4.0 / 3.0, 1e-15)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_limits() {
        let p = power_limit(&Matrix::zeros(2, 2), 10).unwrap();
        assert_eq!((p.verdict, p.k), (PowerVerdict::Converging, 1));
        let p = power_limit(&eg21_a(), 500).unwrap();
        assert_eq!(p.verdict, PowerVerdict::Converging);
        let p = power_limit(&Matrix::diag(&[2.0, 0.0]), 500).unwrap();
        assert_eq!(p.verdict, PowerVerdict::Diverging);
        let p = power_limit(&Matrix::identity(2), 50).unwrap();
        assert_eq!(p.verdict, PowerVerdict::Inconclusive);
        assert!(power_limit(&Matrix::identity(2), 0).is_err());
    }

    #[test]
    fn numerical_radius_values() {
        let j = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_close(numerical_radius(&j).unwrap(), 0.5, 1e-6);
        let s = Matrix::from_rows(&[[2.0, 1.0], [1.0, -3.0]]);
        let rho = eigenvalues(&s).unwrap().spectral_radius;
        assert_close(numerical_radius(&s).unwrap(), rho, 1e-9);
        let a = Matrix::from_rows(&[[0.5, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        assert_close(numerical_radius(&a).unwrap(), 0.5, 1e-6);
    }

    #[test]
    fn aloid_classification() {
        let s = classify_aloid(&Matrix::from_rows(&[[1.0, 2.0], [2.0, -1.0]])).unwrap();
        assert!(s.normaloid && s.spectraloid);

        let a = Matrix::from_rows(&[[0.5, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        let c = classify_aloid(&a).unwrap();
        assert!(c.spectraloid && !c.normaloid);
        assert_close(c.operator_norm, 1.0, 1e-12);

        let c = classify_aloid(&eg21_a()).unwrap();
        assert!(!c.normaloid && !c.spectraloid);
        assert_close(c.spectral_radius, 0.90091, 1e-4);
        assert_close(c.operator_norm, 2.0245, 1e-3);
    }

    #[test]
    fn nilpotency() {
        let upper = Matrix::from_rows(&[[0.0, 3.0, -1.0], [0.0, 0.0, 7.0], [0.0, 0.0, 0.0]]);
        assert!(is_nilpotent(&upper).unwrap());
        assert!(!is_nilpotent(&Matrix::identity(3)).unwrap());
        assert!(is_nilpotent(&Matrix::unit(2, 0, 1)).unwrap());
        assert!(!is_nilpotent(&Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]])).unwrap());
    }

    #[test]
    fn report_consistency_flags_contradictions() {
        let mut r = is_schur_stable(&Matrix::diag(&[2.0, 0.0])).unwrap();
        assert!(r.inconsistency().is_none());
        r.evidence.power = Some(PowerLimit {
            verdict: PowerVerdict::Converging,
            k: 1,
            tail_norms: vec![],
        });
        assert!(r.inconsistency().is_some());
    }
}
