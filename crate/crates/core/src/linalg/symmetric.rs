use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Sweep cap for cyclic Jacobi. Quadratic convergence makes 10-15 the usual count.
pub const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a real symmetric matrix in nondecreasing order, by cyclic
/// Jacobi rotations.
pub fn symmetric_eigenvalues(s: &Matrix) -> Result<Vec<f64>> {
    symmetric_eigenvalues_with(s, &Tolerances::default())
}

pub fn symmetric_eigenvalues_with(s: &Matrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = s.square_dim()?;
    s.ensure_symmetric(tol.symmetry)?;
    let mut a = s.symmetric_part();
    let target = tol.jacobi * s.frobenius_norm();

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                algorithm: "cyclic Jacobi",
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Largest eigenvalue of a symmetric matrix.
pub fn symmetric_max_eigenvalue(s: &Matrix) -> Result<f64> {
    Ok(*symmetric_eigenvalues(s)?.last().expect("n >= 1"))
}

/// Largest singular value, as the square root of `lambda_max(A^t A)`.
pub fn operator_norm(a: &Matrix) -> Result<f64> {
    let gram = a.transpose().matmul(a)?;
    Ok(symmetric_max_eigenvalue(&gram)?.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn identity_and_nilpotent_symmetric_part() {
        assert_eq!(symmetric_eigenvalues(&Matrix::identity(3)).unwrap(), vec![1.0; 3]);
        let s = Matrix::from_rows(&[[0.0, 0.5], [0.5, 0.0]]);
        let e = symmetric_eigenvalues(&s).unwrap();
        assert!(close(e[0], -0.5, 1e-15) && close(e[1], 0.5, 1e-15));
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(symmetric_eigenvalues(&a), Err(Error::Asymmetric { .. })));
        assert!(symmetric_eigenvalues(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn operator_norms() {
        assert_eq!(operator_norm(&Matrix::diag(&[3.0, -2.0])).unwrap(), 3.0);
        // Gram matrix [[0.5625, 3.75], [3.75, 25.5625]]: lambda_max by the quadratic formula.
        let a = Matrix::from_rows(&[[0.75, 5.0], [0.0, -0.75]]);
        let (t, d): (f64, f64) = (0.5625 + 25.5625, 0.5625 * 25.5625 - 3.75 * 3.75);
        let lmax = 0.5 * (t + (t * t - 4.0 * d).sqrt());
        assert!(close(operator_norm(&a).unwrap(), lmax.sqrt(), 1e-12));
        assert!(close(operator_norm(&a).unwrap(), 5.1101, 1e-3));
    }

    #[test]
    fn zero_and_one_by_one() {
        assert_eq!(symmetric_eigenvalues(&Matrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
        assert_eq!(symmetric_eigenvalues(&Matrix::from_rows(&[[-4.0]])).unwrap(), vec![-4.0]);
    }
}
