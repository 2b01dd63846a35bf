use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// LU factorization with partial (row) pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // L below the diagonal (unit diagonal implied), U on and above.
    factors: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.square_dim()?;
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = n as f64 * f64::EPSILON * a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold {
                return Err(Error::Singular { pivot });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = f[(k, j)];
                    f[(k, j)] = f[(p, j)];
                    f[(p, j)] = t;
                }
            }
            let d = f[(k, k)];
            for i in k + 1..n {
                let l = f[(i, k)] / d;
                f[(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        let u = f[(k, j)];
                        f[(i, j)] -= l * u;
                    }
                }
            }
        }
        Ok(Self { n, factors: f, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                context: "right-hand side",
                expected: n,
                found: b.len(),
            });
        }
        let f = &self.factors;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| f[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| f[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / f[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

/// Solves `A x = b` by LU with row pivoting.
pub fn solve_linear(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(a)?.solve(b)
}

fn norm_1(a: &Matrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse together with the 1-norm condition number `||A||_1 ||A^-1||_1`.
pub fn inverse_with_condition(a: &Matrix) -> Result<(Matrix, f64)> {
    let inv = Lu::factor(a)?.inverse()?;
    let cond = norm_1(a) * norm_1(&inv);
    Ok((inv, cond))
}

/// Inverse, refusing matrices whose condition estimate exceeds `limit`.
pub fn guarded_inverse(a: &Matrix, limit: f64) -> Result<Matrix> {
    let (inv, cond) = inverse_with_condition(a)?;
    if !cond.is_finite() || cond > limit {
        return Err(Error::IllConditioned {
            estimate: cond,
            limit,
        });
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal_solves() {
        let b = vec![1.5, -2.0, 3.25];
        assert_eq!(solve_linear(&Matrix::identity(3), &b).unwrap(), b);
        let x = solve_linear(&Matrix::diag(&[2.0, 4.0]), &[2.0, 8.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(solve_linear(&a, &[3.0, 4.0]).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        match solve_linear(&a, &[1.0, 1.0]) {
            Err(Error::Singular { pivot }) => assert!(pivot < 1e-14),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn backward_error_is_small() {
        let a = Matrix::from_rows(&[[4.0, -2.0, 1.0], [3.0, 6.0, -4.0], [2.0, 1.0, 8.0]]);
        let b = [1.0, 2.0, 3.0];
        let x = solve_linear(&a, &b).unwrap();
        let r: f64 = a
            .mul_vec(&x)
            .unwrap()
            .iter()
            .zip(&b)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r <= 1e-10 * (a.frobenius_norm() * xn + bn));
    }

    #[test]
    fn condition_guard() {
        let a = Matrix::diag(&[1.0, 1e-13]);
        assert!(matches!(guarded_inverse(&a, 1e12), Err(Error::IllConditioned { .. })));
        let (inv, cond) = inverse_with_condition(&Matrix::diag(&[2.0, 4.0])).unwrap();
        assert_eq!(inv, Matrix::diag(&[0.5, 0.25]));
        assert_eq!(cond, 2.0);
    }
}
