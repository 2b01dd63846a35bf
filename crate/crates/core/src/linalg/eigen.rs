//! Eigenvalues of a general real matrix.
//!
//! Orthogonal (Householder) reduction to upper Hessenberg form, then
//! Francis double-shift QR. Converged 2x2 trailing blocks are split into a
//! real pair or a complex-conjugate pair. The iteration follows the
//! EISPACK `orthes`/`hqr` routines, without eigenvector accumulation.
//!
//! Each eigenvalue is certified afterwards by inverse iteration on
//! `A - lambda I`: the returned residual is `||(A - lambda I) x||_2` for a
//! unit vector `x`, an upper bound on the smallest singular value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// QR sweeps allowed per unit of dimension.
pub const QR_SWEEPS_PER_DIM: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted by decreasing modulus; conjugate pairs are adjacent, positive
    /// imaginary part first.
    pub eigenvalues: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub spectral_radius: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn eigenvalues(a: &Matrix) -> Result<Spectrum> {
    a.square_dim()?;
    let mut eig = hessenberg_qr(a)?;
    eig.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
    let residuals = eig.iter().map(|&l| eigen_residual(a, l)).collect();
    let spectral_radius = eig.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(Spectrum {
        eigenvalues: eig,
        residuals,
        spectral_radius,
    })
}

pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.spectral_radius)
}

fn hessenberg(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut h = a.clone();
    let mut ort = vec![0.0; n];
    let high = n.saturating_sub(1);
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let f = (m..=high).rev().map(|i| ort[i] * h[(i, j)]).sum::<f64>() / hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let f = (m..=high).rev().map(|j| ort[j] * h[(i, j)]).sum::<f64>() / hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in m + 1..=high {
            h[(i, m - 1)] = 0.0;
        }
    }
    h
}

fn hessenberg_qr(a: &Matrix) -> Result<Vec<Complex64>> {
    let nn = a.rows();
    let mut h = hessenberg(a);
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    let eps = f64::EPSILON;
    let max_sweeps = QR_SWEEPS_PER_DIM * nn;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut n = nn as isize - 1;
    let low = 0isize;
    let mut exshift = 0.0;
    let mut iter = 0;
    let mut sweeps = 0;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut w, mut x, mut y);

    while n >= low {
        let nu = n as usize;
        let mut l = n;
        while l > low {
            let lu = l as usize;
            s = h[(lu - 1, lu - 1)].abs() + h[(lu, lu)].abs();
            if s == 0.0 {
                s = norm;
            }
            let sub = h[(lu, lu - 1)].abs();
            if sub == 0.0 || sub < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
            } else {
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            if sweeps == max_sweeps {
                return Err(Error::NoConvergence {
                    algorithm: "Hessenberg QR",
                    sweeps,
                });
            }
            sweeps += 1;

            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }

            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in low as usize..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low as usize..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            // two consecutive small subdiagonal elements
            let mut m = n - 2;
            loop {
                let mu = m as usize;
                z = h[(mu, mu)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - r - s;
                r = h[(mu + 2, mu + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let lhs = h[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                let rhs = eps
                    * (p.abs() * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs()));
                if lhs < rhs {
                    break;
                }
                m -= 1;
            }
            let mu = m as usize;
            for i in mu + 2..=nu {
                h[(i, i - 2)] = 0.0;
                if i > mu + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=n, columns m..=n
            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                }
            }
        }
    }

    Ok(d.into_iter().zip(e).map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Upper bound on `sigma_min(A - lambda I)` from three steps of inverse
/// iteration.
fn eigen_residual(a: &Matrix, lambda: Complex64) -> f64 {
    let n = a.rows();
    let shifted: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = Complex64::new(a[(i, j)], 0.0);
                    if i == j {
                        v - lambda
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let apply = |x: &[Complex64]| -> f64 {
        shifted
            .iter()
            .map(|row| row.iter().zip(x).map(|(b, v)| b * v).sum::<Complex64>().norm_sqr())
            .sum::<f64>()
            .sqrt()
    };

    let scale = shifted
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let lu = ComplexLu::factor(shifted.clone(), f64::EPSILON * scale);

    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + i as f64 / n as f64, 0.0))
        .collect();
    normalize(&mut x);
    let mut best = apply(&x);
    for _ in 0..3 {
        let mut y = lu.solve(&x);
        if !normalize(&mut y) {
            break;
        }
        x = y;
        best = best.min(apply(&x));
    }
    best
}

fn normalize(x: &mut [Complex64]) -> bool {
    let nrm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if !nrm.is_finite() || nrm == 0.0 {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= nrm);
    true
}

/// Complex LU with partial pivoting. Zero pivots are replaced by `floor`,
/// the usual inverse-iteration treatment of an exactly singular shift.
struct ComplexLu {
    f: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
}

impl ComplexLu {
    fn factor(mut f: Vec<Vec<Complex64>>, floor: f64) -> Self {
        let n = f.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| f[i][k].norm().total_cmp(&f[j][k].norm()))
                .expect("nonempty");
            f.swap(k, p);
            perm.swap(k, p);
            if f[k][k].norm() < floor {
                f[k][k] = Complex64::new(floor, 0.0);
            }
            let d = f[k][k];
            let (top, bottom) = f.split_at_mut(k + 1);
            let pivot = &top[k];
            for row in bottom.iter_mut() {
                let l = row[k] / d;
                row[k] = l;
                for (x, &u) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                    *x -= l * u;
                }
            }
        }
        Self { f, perm }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let f = &self.f;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: Complex64 = (0..i).map(|j| f[i][j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|j| f[i][j] * x[j]).sum();
            x[i] = (x[i] - s) / f[i][i];
        }
        x
    }
}
