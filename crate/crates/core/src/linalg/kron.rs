//! Vectorization and Kronecker products.
//!
//! `vec` stacks columns, so `vec(M X N) = (N^t ⊗ M) vec(X)` holds without
//! any transposition bookkeeping. `svec` takes the lower triangle column by
//! column and scales off-diagonal entries by `sqrt(2)`, which makes the
//! Euclidean inner product of `svec` images equal to `trace(S T)`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    Matrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

pub fn vec(a: &Matrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.rows() * a.cols());
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            out.push(a[(i, j)]);
        }
    }
    out
}

pub fn unvec(x: &[f64], n: usize) -> Result<Matrix> {
    if x.len() != n * n {
        return Err(Error::DimensionMismatch {
            context: "unvec",
            expected: n * n,
            found: x.len(),
        });
    }
    Matrix::new(n, n, (0..n * n).map(|k| x[(k % n) * n + k / n]).collect())
}

/// The `n^2 x n^2` permutation `K` with `K vec(A) = vec(A^t)`.
pub fn commutation_matrix(n: usize) -> Matrix {
    let mut k = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            // vec(A)[j*n + i] = A[i][j] lands at vec(A^t)[i*n + j]
            k[(i * n + j, j * n + i)] = 1.0;
        }
    }
    k
}

pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

pub fn svec(s: &Matrix, symmetry_tol: f64) -> Result<Vec<f64>> {
    let n = s.square_dim()?;
    s.ensure_symmetric(symmetry_tol)?;
    let mut out = Vec::with_capacity(svec_len(n));
    for j in 0..n {
        out.push(s[(j, j)]);
        for i in j + 1..n {
            out.push(SQRT_2 * 0.5 * (s[(i, j)] + s[(j, i)]));
        }
    }
    Ok(out)
}

pub fn unsvec(x: &[f64], n: usize) -> Result<Matrix> {
    if x.len() != svec_len(n) {
        return Err(Error::DimensionMismatch {
            context: "unsvec",
            expected: svec_len(n),
            found: x.len(),
        });
    }
    let mut s = Matrix::zeros(n, n);
    let mut k = 0;
    for j in 0..n {
        s[(j, j)] = x[k];
        k += 1;
        for i in j + 1..n {
            let v = x[k] / SQRT_2;
            s[(i, j)] = v;
            s[(j, i)] = v;
            k += 1;
        }
    }
    Ok(s)
}
