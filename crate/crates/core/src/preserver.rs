//! Randomized testing and falsification of stability-preserver claims.
//!
//! Every sample is a deterministic function of `(seed, index)`: trial `k`
//! draws from a ChaCha8 stream selected by `k`, so trials can run in any
//! order (and in parallel) and still reproduce bit for bit. When several
//! trials produce counterexamples, the one with the smallest index is
//! reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{guarded_inverse, spectral_radius, Matrix};
use crate::matmap::{map_inverse, MatrixMap, Subspace};
use crate::stability::is_nilpotent;

/// Counterexamples need `rho(A) <= 1 - SEPARATION` and `rho(L(A)) >= 1 + SEPARATION`.
pub const SEPARATION: f64 = 1e-6;
/// Relative deviation accepted by [`test_rho_preservation`].
pub const RHO_PRESERVATION_TOL: f64 = 1e-6;
/// Relative agreement required by [`verify_canonical_form`].
pub const CANONICAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleClass {
    General,
    Symmetric,
    /// Sampled as symmetric matrices, which are normaloid.
    Normaloid,
    /// Strictly upper triangular, not rescaled.
    Nilpotent,
}

impl SampleClass {
    fn is_symmetric(self) -> bool {
        matches!(self, SampleClass::Symmetric | SampleClass::Normaloid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub trials: usize,
    pub seed: u64,
    pub class: SampleClass,
    /// Target spectral radius of stable samples is drawn uniformly from `[lo, hi)`.
    pub radius_band: (f64, f64),
    pub n: usize,
}

impl SampleConfig {
    pub const DEFAULT_BAND: (f64, f64) = (0.5, 0.99);

    pub fn new(n: usize, trials: usize, seed: u64, class: SampleClass) -> Self {
        Self {
            trials,
            seed,
            class,
            radius_band: Self::DEFAULT_BAND,
            n,
        }
    }

    pub fn with_band(mut self, lo: f64, hi: f64) -> Self {
        self.radius_band = (lo, hi);
        self
    }

    pub fn with_class(mut self, class: SampleClass) -> Self {
        self.class = class;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.radius_band;
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidParameter("n and trials must be positive".into()));
        }
        if !(0.0 <= lo && lo < hi && hi <= 1.0 - SEPARATION) {
            return Err(Error::InvalidParameter(format!(
                "radius band ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1 - {SEPARATION:e}"
            )));
        }
        Ok(())
    }
}

/// Random stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::new(rows, cols, data).expect("finite gaussian draws")
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt (with reorthogonalization)
/// on the columns of a Gaussian matrix, which leaves `R` with a positive
/// diagonal.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    'draw: loop {
        let g = gaussian_matrix(rng, n, n);
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
        for j in 0..n {
            for _ in 0..2 {
                for k in 0..j {
                    let (head, tail) = cols.split_at_mut(j);
                    let (q, c) = (&head[k], &mut tail[0]);
                    let d: f64 = q.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                    c.iter_mut().zip(q).for_each(|(x, v)| *x -= d * v);
                }
            }
            let nrm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm < 1e-8 {
                continue 'draw;
            }
            cols[j].iter_mut().for_each(|v| *v /= nrm);
        }
        return Matrix::from_fn(n, n, |i, j| cols[j][i]);
    }
}

/// `U diag(s) V` with Haar orthogonal `U, V` and singular values in
/// `[0.5, 2]`, so the condition number is at most 4.
pub fn random_well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let u = random_orthogonal(rng, n);
    let v = random_orthogonal(rng, n);
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    &(&u * &Matrix::diag(&s)) * &v
}

/// Draws sample `index` of the configured class.
pub fn sample_stable(cfg: &SampleConfig, index: u64) -> Result<Matrix> {
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = trial_rng(cfg.seed, index);
    if cfg.class == SampleClass::Nilpotent {
        let g = gaussian_matrix(&mut rng, n, n);
        return Ok(Matrix::from_fn(n, n, |i, j| if j > i { g[(i, j)] } else { 0.0 }));
    }
    let (lo, hi) = cfg.radius_band;
    loop {
        let g = gaussian_matrix(&mut rng, n, n);
        let a = if cfg.class.is_symmetric() {
            g.symmetric_part()
        } else {
            g
        };
        let target: f64 = rng.random_range(lo..hi);
        let rho = spectral_radius(&a)?;
        if rho == 0.0 {
            continue;
        }
        return Ok(a.scale(target / rho));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Full,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableBasis {
    pub space: Space,
    pub elements: Vec<Matrix>,
}

impl StableBasis {
    /// Rank of the element coordinates (`vec` for the full space, `svec` for
    /// the symmetric one).
    pub fn coordinate_rank(&self) -> usize {
        let coords: Vec<Vec<f64>> = self
            .elements
            .iter()
            .map(|e| match self.space {
                Space::Full => crate::linalg::vec(e),
                Space::Symmetric => crate::linalg::svec(e, f64::INFINITY).expect("square"),
            })
            .collect();
        let m = Matrix::try_from_rows(&coords).expect("uniform coordinate length");
        m.rank(1e-12)
    }

    pub fn dimension(&self, n: usize) -> usize {
        match self.space {
            Space::Full => n * n,
            Space::Symmetric => n * (n + 1) / 2,
        }
    }
}

/// Basis of Schur stable matrices: `E_ii / 2` and either `E_ij` (`i != j`)
/// or `(E_ij + E_ji) / 2` (`i < j`).
pub fn stable_basis(space: Space, n: usize) -> StableBasis {
    let mut elements: Vec<Matrix> = (0..n).map(|i| Matrix::unit(n, i, i).scale(0.5)).collect();
    for i in 0..n {
        for j in 0..n {
            match space {
                Space::Full if i != j => elements.push(Matrix::unit(n, i, j)),
                Space::Symmetric if i < j => {
                    elements.push((&Matrix::unit(n, i, j) + &Matrix::unit(n, j, i)).scale(0.5))
                }
                _ => {}
            }
        }
    }
    StableBasis { space, elements }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    NoCounterexample,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub a: Matrix,
    pub image: Matrix,
    pub rho_a: f64,
    pub rho_image: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreserverVerdict {
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub trials_run: usize,
    pub seed: u64,
}

impl PreserverVerdict {
    pub fn is_clean(&self) -> bool {
        self.outcome == Outcome::NoCounterexample
    }
}

fn check_compatible(l: &MatrixMap, cfg: &SampleConfig) -> Result<()> {
    cfg.validate()?;
    if l.n() != cfg.n {
        return Err(Error::DimensionMismatch {
            context: "sample dimension",
            expected: l.n(),
            found: cfg.n,
        });
    }
    if l.subspace() == Subspace::Symmetric && !cfg.class.is_symmetric() {
        return Err(Error::SubspaceMismatch(format!(
            "map acts on symmetric matrices; sample class {:?} is not symmetric",
            cfg.class
        )));
    }
    Ok(())
}

/// Searches for a stable `A` with `L(A)` unstable.
pub fn test_into_preserver(l: &MatrixMap, cfg: &SampleConfig) -> Result<PreserverVerdict> {
    check_compatible(l, cfg)?;
    let found = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|index| -> Result<Option<Witness>> {
            let a = sample_stable(cfg, index)?;
            let rho_a = spectral_radius(&a)?;
            let image = l.apply(&a)?;
            let rho_image = spectral_radius(&image)?;
            if rho_a <= 1.0 - SEPARATION && rho_image >= 1.0 + SEPARATION {
                Ok(Some(Witness {
                    index,
                    a,
                    image,
                    rho_a,
                    rho_image,
                }))
            } else {
                Ok(None)
            }
        })
        .find_map_first(|r| r.transpose())
        .transpose()?;
    Ok(match found {
        Some(w) => PreserverVerdict {
            outcome: Outcome::Counterexample,
            trials_run: w.index as usize + 1,
            witness: Some(w),
            seed: cfg.seed,
        },
        None => PreserverVerdict {
            outcome: Outcome::NoCounterexample,
            witness: None,
            trials_run: cfg.trials,
            seed: cfg.seed,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OntoVerdict {
    pub onto: bool,
    pub forward: PreserverVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<PreserverVerdict>,
    /// Why the inverse could not be formed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular: Option<String>,
}

/// Onto preservation: `L` and `L^-1` both into preservers.
pub fn test_onto_preserver(l: &MatrixMap, cfg: &SampleConfig) -> Result<OntoVerdict> {
    let forward = test_into_preserver(l, cfg)?;
    let inv = match map_inverse(l) {
        Ok(inv) => inv,
        Err(e @ (Error::Singular { .. } | Error::IllConditioned { .. })) => {
            return Ok(OntoVerdict {
                onto: false,
                forward,
                inverse: None,
                singular: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e),
    };
    let inverse = test_into_preserver(&inv, cfg)?;
    Ok(OntoVerdict {
        onto: forward.is_clean() && inverse.is_clean(),
        forward,
        inverse: Some(inverse),
        singular: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoPreservation {
    pub pass: bool,
    /// Largest `|rho(L(A)) - rho(A)| / max(rho(A), 1e-12)`.
    pub max_deviation: f64,
    pub worst_index: u64,
    pub trials_run: usize,
    pub seed: u64,
}

pub fn test_rho_preservation(l: &MatrixMap, cfg: &SampleConfig) -> Result<RhoPreservation> {
    check_compatible(l, cfg)?;
    let deviations = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|index| -> Result<f64> {
            let a = sample_stable(cfg, index)?;
            let rho_a = spectral_radius(&a)?;
            let rho_image = spectral_radius(&l.apply(&a)?)?;
            Ok((rho_image - rho_a).abs() / rho_a.max(1e-12))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (worst_index, max_deviation) = deviations
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (k, &d)| if d > best.1 { (k, d) } else { best });
    Ok(RhoPreservation {
        pass: max_deviation <= RHO_PRESERVATION_TOL,
        max_deviation,
        worst_index: worst_index as u64,
        trials_run: cfg.trials,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentWitness {
    pub index: u64,
    pub a: Matrix,
    pub image: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentVerdict {
    /// Outcome of the into-preserver search that forms the hypothesis.
    pub into_outcome: Outcome,
    /// Every sampled nilpotent `A` had nilpotent `L(A)`.
    pub nilpotents_preserved: bool,
    /// The map passed the into search yet broke nilpotency.
    pub hypothesis_chain_violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NilpotentWitness>,
    pub trials_run: usize,
    pub seed: u64,
}

impl NilpotentVerdict {
    pub fn pass(&self) -> bool {
        !self.hypothesis_chain_violated
    }
}

/// Checks that an into preserver maps nilpotent matrices to nilpotent ones.
///
/// The into search uses general-class samples under the same seed and trial
/// count; the nilpotency check uses the nilpotent class.
pub fn test_nilpotent_preservation(l: &MatrixMap, cfg: &SampleConfig) -> Result<NilpotentVerdict> {
    if cfg.class != SampleClass::Nilpotent {
        return Err(Error::InvalidParameter(
            "nilpotent preservation needs the nilpotent sample class".into(),
        ));
    }
    if l.subspace() != Subspace::Full {
        return Err(Error::SubspaceMismatch(
            "nilpotent preservation is defined on the full matrix space".into(),
        ));
    }
    check_compatible(l, cfg)?;
    let into = test_into_preserver(l, &cfg.with_class(SampleClass::General))?;
    let witness = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|index| -> Result<Option<NilpotentWitness>> {
            let a = sample_stable(cfg, index)?;
            let image = l.apply(&a)?;
            Ok(if is_nilpotent(&image)? {
                None
            } else {
                Some(NilpotentWitness { index, a, image })
            })
        })
        .find_map_first(|r| r.transpose())
        .transpose()?;
    let preserved = witness.is_none();
    Ok(NilpotentVerdict {
        into_outcome: into.outcome,
        nilpotents_preserved: preserved,
        hypothesis_chain_violated: into.is_clean() && !preserved,
        trials_run: witness.as_ref().map_or(cfg.trials, |w| w.index as usize + 1),
        witness,
        seed: cfg.seed,
    })
}

/// Sufficient condition for `X -> alpha tr(X) I + beta S^-1 X S` to preserve
/// Schur stability: `beta != 0`, `alpha n + beta != 0` (invertibility) and
/// `(n - 1)|alpha| + |beta + alpha| <= 1`.
pub fn trace_shift_condition(alpha: f64, beta: f64, n: usize) -> bool {
    beta != 0.0
        && alpha * n as f64 + beta != 0.0
        && (n as f64 - 1.0) * alpha.abs() + (beta + alpha).abs() <= 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalFlavor {
    /// `A -> c T A T^-1`
    Similarity,
    /// `A -> c T A^t T^-1`
    TransposeSimilarity,
    /// `A -> c T A T^t` with `T` orthogonal and `c = ±1`
    OrthogonalCongruence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCandidate {
    pub c: f64,
    pub t: Matrix,
    pub flavor: CanonicalFlavor,
}

impl CanonicalCandidate {
    fn evaluate(&self, a: &Matrix, tinv: &Matrix) -> Result<Matrix> {
        let t = &self.t;
        let m = match self.flavor {
            CanonicalFlavor::Similarity => t.matmul(a)?.matmul(tinv)?,
            CanonicalFlavor::TransposeSimilarity => t.matmul(&a.transpose())?.matmul(tinv)?,
            CanonicalFlavor::OrthogonalCongruence => t.matmul(a)?.matmul(&t.transpose())?,
        };
        Ok(m.scale(self.c))
    }
}

/// Checks `L` against a candidate canonical form on the stable basis of its
/// domain. With `require_onto`, similarity flavors also need `|c| = 1`.
pub fn verify_canonical_form(
    l: &MatrixMap,
    candidate: &CanonicalCandidate,
    require_onto: bool,
) -> Result<bool> {
    let tol = Tolerances::default();
    let n = candidate.t.square_dim()?;
    if n != l.n() {
        return Err(Error::DimensionMismatch {
            context: "canonical form parameter",
            expected: l.n(),
            found: n,
        });
    }
    let c = candidate.c;
    let tinv = match candidate.flavor {
        CanonicalFlavor::OrthogonalCongruence => {
            let t = &candidate.t;
            let gap = t.transpose().matmul(t)?.try_sub(&Matrix::identity(n))?.frobenius_norm();
            if gap > 1e-8 {
                return Err(Error::InvalidParameter(format!(
                    "T is not orthogonal (||T^t T - I||_F = {gap:e})"
                )));
            }
            if c != 1.0 && c != -1.0 {
                return Err(Error::InvalidParameter(format!(
                    "orthogonal congruence needs c = ±1, got {c}"
                )));
            }
            candidate.t.transpose()
        }
        _ => {
            if require_onto && (c.abs() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "onto preservers of similarity type need |c| = 1, got {c}"
                )));
            }
            guarded_inverse(&candidate.t, tol.condition_limit)?
        }
    };
    let space = match l.subspace() {
        Subspace::Full => Space::Full,
        Subspace::Symmetric => Space::Symmetric,
    };
    for b in stable_basis(space, n).elements {
        let got = l.apply(&b)?;
        let want = candidate.evaluate(&b, &tinv)?;
        if got.try_sub(&want)?.frobenius_norm() > CANONICAL_TOL * want.frobenius_norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}
