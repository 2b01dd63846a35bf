//! Linear maps on `n x n` matrix space, represented by their `n^2 x n^2`
//! action on `vec` coordinates (or `n(n+1)/2` square on `svec` coordinates
//! after restriction to symmetric matrices).
//!
//! Representation rules, with `vec(M X N) = (N^t ⊗ M) vec(X)`:
//!
//! | node                  | map                              | rep                                   |
//! |-----------------------|----------------------------------|---------------------------------------|
//! | `leftRight(M, N)`     | `X -> M X N`                     | `N^t ⊗ M`                             |
//! | `congruence(A)`       | `X -> A X A^t`                   | `A ⊗ A`                               |
//! | `similarity(T)`       | `X -> T X T^-1`                  | `T^-t ⊗ T`                            |
//! | `transpose`           | `X -> X^t`                       | commutation matrix                    |
//! | `traceShift(a, b, S)` | `X -> a tr(X) I + b S^-1 X S`    | `a vec(I) vec(I)^t + b (S^t ⊗ S^-1)`  |
//! | `scale(c, L)`         | `X -> c L(X)`                    | `c rep(L)`                            |
//! | `sum(L1..Lk)`         | `X -> L1(X) + ... + Lk(X)`       | `rep(L1) + ... + rep(Lk)`             |
//! | `compose(L1..Lk)`     | `X -> L1(L2(...Lk(X)))`          | `rep(L1) rep(L2) ... rep(Lk)`         |
//!
//! "Normal" and the operator norm of a map refer to the trace inner product
//! `<X, Y> = trace(X^t Y)`, under which `vec` is an isometry, so both are
//! read off the rep directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    self, commutation_matrix, eigenvalues, guarded_inverse, kron, operator_norm, svec, svec_len,
    unsvec, unvec, Matrix, Spectrum,
};
use crate::preserver::{stable_basis, Space};

/// `(from, to, coeff)`: moves `coeff * X[from]` into position `to`.
pub type EntryTransfer = ((usize, usize), (usize, usize), f64);

/// A composition tree describing how a map is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", deny_unknown_fields)]
pub enum MapSpec {
    LeftRight { left: Matrix, right: Matrix },
    Congruence { a: Matrix },
    Similarity { t: Matrix },
    Transpose { n: usize },
    TraceShift { alpha: f64, beta: f64, s: Matrix },
    Scale { c: f64, map: Box<MapSpec> },
    Sum { maps: Vec<MapSpec> },
    Compose { maps: Vec<MapSpec> },
}

impl MapSpec {
    pub fn identity(n: usize) -> Self {
        MapSpec::Similarity {
            t: Matrix::identity(n),
        }
    }

    pub fn scaled(c: f64, map: MapSpec) -> Self {
        MapSpec::Scale {
            c,
            map: Box::new(map),
        }
    }

    /// Moves entry `from` of the argument to position `to` of the image,
    /// multiplied by `coeff`: `X -> coeff * E_{to.0, from.0} X E_{from.1, to.1}`.
    pub fn entry_transfer(n: usize, from: (usize, usize), to: (usize, usize), coeff: f64) -> Self {
        MapSpec::scaled(
            coeff,
            MapSpec::LeftRight {
                left: Matrix::unit(n, to.0, from.0),
                right: Matrix::unit(n, from.1, to.1),
            },
        )
    }

    /// Sum of entry transfers `(from, to, coeff)`.
    pub fn entrywise(n: usize, transfers: &[EntryTransfer]) -> Self {
        MapSpec::Sum {
            maps: transfers
                .iter()
                .map(|&(from, to, c)| MapSpec::entry_transfer(n, from, to, c))
                .collect(),
        }
    }

    /// Dimension `n` of the matrices acted on, after checking that every
    /// embedded matrix agrees.
    pub fn dim(&self) -> Result<usize> {
        let check = |m: &Matrix, ctx: &'static str, n: Option<usize>| -> Result<usize> {
            let k = m.square_dim()?;
            match n {
                Some(n) if n != k => Err(Error::DimensionMismatch {
                    context: ctx,
                    expected: n,
                    found: k,
                }),
                _ => Ok(k),
            }
        };
        match self {
            MapSpec::LeftRight { left, right } => {
                let n = check(left, "leftRight", None)?;
                check(right, "leftRight", Some(n))
            }
            MapSpec::Congruence { a } => check(a, "congruence", None),
            MapSpec::Similarity { t } => check(t, "similarity", None),
            MapSpec::TraceShift { s, .. } => check(s, "traceShift", None),
            MapSpec::Transpose { n } => {
                if *n == 0 {
                    Err(Error::InvalidParameter("transpose needs n >= 1".into()))
                } else {
                    Ok(*n)
                }
            }
            MapSpec::Scale { map, .. } => map.dim(),
            MapSpec::Sum { maps } | MapSpec::Compose { maps } => {
                let first = maps
                    .first()
                    .ok_or_else(|| Error::InvalidParameter("sum/compose needs at least one map".into()))?
                    .dim()?;
                for m in &maps[1..] {
                    let k = m.dim()?;
                    if k != first {
                        return Err(Error::DimensionMismatch {
                            context: "sum/compose children",
                            expected: first,
                            found: k,
                        });
                    }
                }
                Ok(first)
            }
        }
    }

    fn rep(&self, tol: &Tolerances) -> Result<Matrix> {
        Ok(match self {
            MapSpec::LeftRight { left, right } => kron(&right.transpose(), left),
            MapSpec::Congruence { a } => kron(a, a),
            MapSpec::Similarity { t } => {
                let tinv = guarded_inverse(t, tol.condition_limit)?;
                kron(&tinv.transpose(), t)
            }
            MapSpec::Transpose { n } => commutation_matrix(*n),
            MapSpec::TraceShift { alpha, beta, s } => {
                let n = s.rows();
                let sinv = guarded_inverse(s, tol.condition_limit)?;
                let vi = linalg::vec(&Matrix::identity(n));
                let outer = Matrix::from_fn(n * n, n * n, |i, j| vi[i] * vi[j]);
                outer
                    .scale(*alpha)
                    .try_add(&kron(&s.transpose(), &sinv).scale(*beta))?
            }
            MapSpec::Scale { c, map } => map.rep(tol)?.scale(*c),
            MapSpec::Sum { maps } => {
                let mut acc = maps[0].rep(tol)?;
                for m in &maps[1..] {
                    acc = acc.try_add(&m.rep(tol)?)?;
                }
                acc
            }
            MapSpec::Compose { maps } => {
                let mut acc = maps[0].rep(tol)?;
                for m in &maps[1..] {
                    acc = acc.matmul(&m.rep(tol)?)?;
                }
                acc
            }
        })
    }

    /// Evaluates the map by its defining formula, without the rep.
    pub fn evaluate(&self, x: &Matrix) -> Result<Matrix> {
        let tol = Tolerances::default();
        Ok(match self {
            MapSpec::LeftRight { left, right } => left.matmul(x)?.matmul(right)?,
            MapSpec::Congruence { a } => a.matmul(x)?.matmul(&a.transpose())?,
            MapSpec::Similarity { t } => {
                t.matmul(x)?.matmul(&guarded_inverse(t, tol.condition_limit)?)?
            }
            MapSpec::Transpose { .. } => x.transpose(),
            MapSpec::TraceShift { alpha, beta, s } => {
                let sinv = guarded_inverse(s, tol.condition_limit)?;
                let n = s.rows();
                Matrix::identity(n)
                    .scale(alpha * x.trace())
                    .try_add(&sinv.matmul(x)?.matmul(s)?.scale(*beta))?
            }
            MapSpec::Scale { c, map } => map.evaluate(x)?.scale(*c),
            MapSpec::Sum { maps } => {
                let mut acc = maps[0].evaluate(x)?;
                for m in &maps[1..] {
                    acc = acc.try_add(&m.evaluate(x)?)?;
                }
                acc
            }
            MapSpec::Compose { maps } => {
                let mut acc = x.clone();
                for m in maps.iter().rev() {
                    acc = m.evaluate(&acc)?;
                }
                acc
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subspace {
    Full,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Spec { spec: MapSpec },
    Inverse { of: Box<Provenance> },
    Restricted { of: Box<Provenance> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMap {
    n: usize,
    subspace: Subspace,
    provenance: Provenance,
    rep: Matrix,
}

pub fn build(spec: &MapSpec) -> Result<MatrixMap> {
    let n = spec.dim()?;
    let rep = spec.rep(&Tolerances::default())?;
    Ok(MatrixMap {
        n,
        subspace: Subspace::Full,
        provenance: Provenance::Spec { spec: spec.clone() },
        rep,
    })
}

impl MatrixMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    /// Dimension of the space the rep acts on.
    pub fn rep_dim(&self) -> usize {
        match self.subspace {
            Subspace::Full => self.n * self.n,
            Subspace::Symmetric => svec_len(self.n),
        }
    }

    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        let k = a.square_dim()?;
        if k != self.n {
            return Err(Error::DimensionMismatch {
                context: "map argument",
                expected: self.n,
                found: k,
            });
        }
        match self.subspace {
            Subspace::Full => unvec(&self.rep.mul_vec(&linalg::vec(a))?, self.n),
            Subspace::Symmetric => {
                let x = svec(a, Tolerances::default().symmetry).map_err(|e| match e {
                    Error::Asymmetric { gap } => Error::SubspaceMismatch(format!(
                        "map acts on symmetric matrices but the argument has asymmetry {gap:e}"
                    )),
                    e => e,
                })?;
                unsvec(&self.rep.mul_vec(&x)?, self.n)
            }
        }
    }

    /// Evaluates through the construction formula when one is available
    /// (everything but inverses).
    pub fn apply_direct(&self, a: &Matrix) -> Option<Result<Matrix>> {
        fn go(p: &Provenance, a: &Matrix) -> Option<Result<Matrix>> {
            match p {
                Provenance::Spec { spec } => Some(spec.evaluate(a)),
                Provenance::Restricted { of } => go(of, a),
                Provenance::Inverse { .. } => None,
            }
        }
        go(&self.provenance, a)
    }
}

pub fn map_spectrum(l: &MatrixMap) -> Result<Spectrum> {
    let limit = Tolerances::default().analysis_limit;
    if l.n > limit {
        return Err(Error::AnalysisLimit {
            size: l.rep_dim(),
            limit: match l.subspace {
                Subspace::Full => limit * limit,
                Subspace::Symmetric => svec_len(limit),
            },
        });
    }
    eigenvalues(&l.rep)
}

/// Largest dimension accepted by [`congruence_eigenvalue_law_check`].
pub const CONGRUENCE_LAW_MAX_DIM: usize = 8;
/// Matching tolerance for [`congruence_eigenvalue_law_check`].
pub const CONGRUENCE_LAW_TOL: f64 = 1e-6;

/// Checks that the eigenvalues of `X -> A X A^t` are exactly the products
/// `lambda_i lambda_j` of eigenvalues of `A`, matched greedily.
pub fn congruence_eigenvalue_law_check(a: &Matrix) -> Result<bool> {
    let n = a.square_dim()?;
    if n > CONGRUENCE_LAW_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "congruence law check supports n <= {CONGRUENCE_LAW_MAX_DIM}, got {n}"
        )));
    }
    let lam = eigenvalues(a)?.eigenvalues;
    let mut products: Vec<Option<Complex64>> = lam
        .iter()
        .flat_map(|x| lam.iter().map(move |y| Some(x * y)))
        .collect();
    let rep = map_spectrum(&build(&MapSpec::Congruence { a: a.clone() })?)?;
    for mu in &rep.eigenvalues {
        let best = products
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.map(|p| (k, (p - mu).norm())))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((k, d)) if d <= CONGRUENCE_LAW_TOL => products[k] = None,
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Normal with respect to the trace inner product:
/// `||R R^t - R^t R||_F <= 1e-8 ||R||_F^2`.
pub fn map_is_normal(l: &MatrixMap) -> bool {
    let r = &l.rep;
    let rt = r.transpose();
    let comm = (r * &rt).try_sub(&(&rt * r)).expect("square rep");
    comm.frobenius_norm() <= 1e-8 * r.frobenius_norm().powi(2)
}

pub fn map_inverse(l: &MatrixMap) -> Result<MatrixMap> {
    let rep = guarded_inverse(&l.rep, Tolerances::default().condition_limit)?;
    Ok(MatrixMap {
        n: l.n,
        subspace: l.subspace,
        provenance: Provenance::Inverse {
            of: Box::new(l.provenance.clone()),
        },
        rep,
    })
}

/// Tolerance on `||L(S)^t - L(S)||_F` (relative to `max(1, ||L(S)||_F)`)
/// when restricting to symmetric matrices.
pub const RESTRICT_SYMMETRY_TOL: f64 = 1e-8;

/// Restricts a map on `M_n` that preserves symmetric matrices to `S^n`, in
/// `svec` coordinates.
pub fn restrict_symmetric(l: &MatrixMap) -> Result<MatrixMap> {
    if l.subspace != Subspace::Full {
        return Err(Error::SubspaceMismatch("map is already restricted".into()));
    }
    let n = l.n;
    for (index, b) in stable_basis(Space::Symmetric, n).elements.iter().enumerate() {
        let img = l.apply(b)?;
        let gap = img.asymmetry()?;
        if gap > RESTRICT_SYMMETRY_TOL * img.frobenius_norm().max(1.0) {
            return Err(Error::SymmetryViolation { index, gap });
        }
    }
    let m = svec_len(n);
    let mut rep = Matrix::zeros(m, m);
    let mut e = vec![0.0; m];
    for k in 0..m {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[k] = 1.0;
        let img = l.apply(&unsvec(&e, n)?)?.symmetric_part();
        let col = svec(&img, f64::INFINITY)?;
        for (i, v) in col.into_iter().enumerate() {
            rep[(i, k)] = v;
        }
    }
    Ok(MatrixMap {
        n,
        subspace: Subspace::Symmetric,
        provenance: Provenance::Restricted {
            of: Box::new(l.provenance.clone()),
        },
        rep,
    })
}

/// Operator norm induced by the Frobenius norm on matrices: the largest
/// singular value of the rep.
pub fn frobenius_operator_norm(l: &MatrixMap) -> Result<f64> {
    operator_norm(&l.rep)
}
