//! Worked examples with their published numbers, recomputed from the stated
//! inputs. Each claim records what was printed, what was recomputed and
//! whether the two agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, operator_norm, spectral_radius, Matrix};
use crate::matmap::{build, frobenius_operator_norm, map_inverse, map_is_normal, map_spectrum, MapSpec};
use crate::preserver::{
    sample_stable, test_into_preserver, test_rho_preservation, verify_canonical_form,
    CanonicalCandidate, CanonicalFlavor, SampleClass, SampleConfig,
};
use crate::stability::{classify_aloid, is_nilpotent, numerical_radius};

/// Seed for the randomized checks inside fixtures.
pub const FIXTURE_SEED: u64 = 0x5eed_2012;
const FIXTURE_TRIALS: usize = 500;

/// Ordered from best to worst, so the status of a fixture is the maximum
/// over its claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Reproduced,
    /// The printed number is off, but the statement it supports is true.
    ClaimHoldsValueDiffers,
    Discrepant,
}

/// What the text asserts about a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Printed {
    Value { value: f64, tolerance: f64 },
    Below { bound: f64 },
    AtMost { bound: f64 },
    Exceeds { bound: f64 },
    Holds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observed {
    Number(f64),
    Flag(bool),
}

/// The qualitative statement a printed number is used to support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consequence {
    pub statement: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub quantity: String,
    pub printed: Printed,
    pub recomputed: Observed,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consequence: Option<Consequence>,
    pub status: ClaimStatus,
}

impl Claim {
    fn resolve(
        quantity: &str,
        printed: Printed,
        recomputed: Observed,
        consequence: Option<Consequence>,
    ) -> Self {
        let agrees = match (printed, recomputed) {
            (Printed::Value { value, tolerance }, Observed::Number(x)) => {
                (x - value).abs() <= tolerance
            }
            (Printed::Below { bound }, Observed::Number(x)) => x < bound,
            (Printed::AtMost { bound }, Observed::Number(x)) => x <= bound,
            (Printed::Exceeds { bound }, Observed::Number(x)) => x > bound,
            (Printed::Holds, Observed::Flag(b)) => b,
            _ => false,
        };
        let status = if agrees {
            ClaimStatus::Reproduced
        } else if consequence.as_ref().is_some_and(|c| c.holds) {
            ClaimStatus::ClaimHoldsValueDiffers
        } else {
            ClaimStatus::Discrepant
        };
        Claim {
            quantity: quantity.into(),
            printed,
            recomputed,
            consequence,
            status,
        }
    }

    pub fn value(quantity: &str, value: f64, tolerance: f64, recomputed: f64) -> Self {
        Self::resolve(
            quantity,
            Printed::Value { value, tolerance },
            Observed::Number(recomputed),
            None,
        )
    }

    /// A printed number quoted as evidence for `statement`.
    pub fn value_supporting(
        quantity: &str,
        value: f64,
        tolerance: f64,
        recomputed: f64,
        statement: &str,
        holds: bool,
    ) -> Self {
        Self::resolve(
            quantity,
            Printed::Value { value, tolerance },
            Observed::Number(recomputed),
            Some(Consequence {
                statement: statement.into(),
                holds,
            }),
        )
    }

    pub fn below(quantity: &str, bound: f64, recomputed: f64) -> Self {
        Self::resolve(quantity, Printed::Below { bound }, Observed::Number(recomputed), None)
    }

    pub fn at_most(quantity: &str, bound: f64, recomputed: f64) -> Self {
        Self::resolve(quantity, Printed::AtMost { bound }, Observed::Number(recomputed), None)
    }

    pub fn exceeds(quantity: &str, bound: f64, recomputed: f64) -> Self {
        Self::resolve(quantity, Printed::Exceeds { bound }, Observed::Number(recomputed), None)
    }

    pub fn holds(quantity: &str, recomputed: bool) -> Self {
        Self::resolve(quantity, Printed::Holds, Observed::Flag(recomputed), None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum InputValue {
    Matrix(Matrix),
    Map(MapSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Input {
    pub name: String,
    #[serde(flatten)]
    pub value: InputValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleFixture {
    pub id: String,
    pub summary: String,
    pub inputs: Vec<Input>,
    pub claims: Vec<Claim>,
    /// Observations about printed intermediates that no claim depends on.
    pub notes: Vec<String>,
    pub status: ClaimStatus,
}

impl ExampleFixture {
    fn new(id: &str, summary: &str, inputs: Vec<Input>, claims: Vec<Claim>, notes: Vec<String>) -> Self {
        let status = claims
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(ClaimStatus::Reproduced);
        Self {
            id: id.into(),
            summary: summary.into(),
            inputs,
            claims,
            notes,
            status,
        }
    }

    pub fn claim(&self, quantity: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.quantity == quantity)
    }
}

fn matrix(name: &str, m: &Matrix) -> Input {
    Input {
        name: name.into(),
        value: InputValue::Matrix(m.clone()),
    }
}

fn map(name: &str, spec: &MapSpec) -> Input {
    Input {
        name: name.into(),
        value: InputValue::Map(spec.clone()),
    }
}

fn fmt_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(|x| format!("{x}")).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Spectral radius of the map built from `spec`.
fn map_radius(spec: &MapSpec) -> Result<f64> {
    Ok(map_spectrum(&build(spec)?)?.spectral_radius)
}

/// Nonzero and nilpotent, hence not diagonalizable.
fn not_diagonalizable(spec: &MapSpec) -> Result<bool> {
    let rep = build(spec)?.rep().clone();
    Ok(rep.max_abs() > 0.0 && is_nilpotent(&rep)?)
}

pub fn eg_2_0() -> Result<ExampleFixture> {
    let m = Matrix::from_rows(&[[0.5, 0.0, 10.0], [0.0, 0.5, 0.0], [0.0, 5.0, 0.5]]);
    let n = Matrix::identity(3);
    let a = Matrix::from_rows(&[[0.5, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
    let man = &(&m * &a) * &n;
    let near5 = eigenvalues(&man)?
        .eigenvalues
        .into_iter()
        .min_by(|x, y| (x - 5.0).norm().total_cmp(&(y - 5.0).norm()))
        .expect("nonempty spectrum");
    let class = classify_aloid(&a)?;
    let claims = vec![
        Claim::value("rho(MN)", 0.5, 1e-9, spectral_radius(&(&m * &n))?),
        Claim::holds("MN invertible", (&m * &n).rank(1e-12) == 3),
        Claim::value("||A||", 1.0, 1e-9, operator_norm(&a)?),
        Claim::value("w(A)", 0.5, 1e-6, numerical_radius(&a)?),
        Claim::value("rho(A)", 0.5, 1e-9, spectral_radius(&a)?),
        Claim::holds("A spectraloid", class.spectraloid),
        Claim::holds("A not normaloid", !class.normaloid),
        Claim::exceeds("rho(MAN)", 1.0, spectral_radius(&man)?),
        Claim::value("eigenvalue of MAN nearest 5", 5.0, 1e-9, near5.re),
    ];
    Ok(ExampleFixture::new(
        "eg-2.0",
        "A spectraloid, non-normaloid stable A with MAN unstable although rho(MN) <= 1",
        vec![matrix("M", &m), matrix("N", &n), matrix("A", &a)],
        claims,
        vec![format!("recomputed MAN = {}", fmt_matrix(&man))],
    ))
}

pub fn eg_2_1() -> Result<ExampleFixture> {
    let a = Matrix::from_rows(&[[1.17258, 1.35575], [-0.94256, -0.39761]]);
    let m = Matrix::diag(&[0.79323, -0.24866]);
    let n = Matrix::identity(2);
    let rho_man = spectral_radius(&(&(&m * &a) * &n))?;
    let class = classify_aloid(&a)?;
    let claims = vec![
        Claim::below("rho(MN)", 1.0, spectral_radius(&(&m * &n))?),
        Claim::value("rho(A)", 0.90091, 1e-3, class.spectral_radius),
        Claim::value("||A||", 2.0245, 1e-3, class.operator_norm),
        Claim::holds("A not normaloid", !class.normaloid),
        Claim::value_supporting(
            "rho(MAN)",
            1.1626,
            1e-3,
            rho_man,
            "MAN is not Schur stable",
            rho_man > 1.0,
        ),
    ];
    Ok(ExampleFixture::new(
        "eg-2.1",
        "diagonal stable M, N = I and a stable non-normaloid A with MAN unstable",
        vec![matrix("A", &a), matrix("M", &m), matrix("N", &n)],
        claims,
        vec![],
    ))
}

pub fn eg_2_2() -> Result<ExampleFixture> {
    let m = Matrix::from_rows(&[[1.0, -1.0], [0.0, -1.0]]);
    let n = Matrix::identity(2);
    let a = Matrix::from_rows(&[[0.5, 0.0], [10.0, -0.5]]);
    let man = &(&m * &a) * &n;
    let printed = Matrix::from_rows(&[[49.5, 2.5], [-10.0, 0.5]]);
    let rho_man = spectral_radius(&man)?;
    let claims = vec![
        Claim::holds("M not symmetric", m.asymmetry()? > 0.0),
        Claim::value("rho(MN)", 1.0, 1e-9, spectral_radius(&(&m * &n))?),
        Claim::below("rho(A)", 1.0, spectral_radius(&a)?),
        Claim::value_supporting(
            "rho(MAN)",
            48.99,
            1e-3,
            rho_man,
            "MAN is not Schur stable",
            rho_man > 1.0,
        ),
    ];
    let notes = vec![
        format!(
            "printed MAN = {} but M A N recomputes to {}",
            fmt_matrix(&printed),
            fmt_matrix(&man)
        ),
        format!(
            "the printed radius matches the printed product: rho = {:.5}",
            spectral_radius(&printed)?
        ),
        "M has distinct eigenvalues 1 and -1, so it is diagonalizable, contrary to the remark in the text"
            .to_string(),
    ];
    Ok(ExampleFixture::new(
        "eg-2.2",
        "non-symmetric M with rho(MN) = 1 mapping a stable A to an unstable MAN",
        vec![matrix("M", &m), matrix("N", &n), matrix("A", &a)],
        claims,
        notes,
    ))
}

pub fn eg_2_3() -> Result<ExampleFixture> {
    let m = Matrix::from_rows(&[[-1.0, -0.5], [0.5, -1.0]]);
    let n = Matrix::identity(2).scale(2.0 / 3.0);
    let a = Matrix::from_rows(&[[0.5, 100.0], [0.0, -0.5]]);
    let ma = &m * &a;
    let rho_man = spectral_radius(&(&ma * &n))?;
    let printed_ma = Matrix::from_rows(&[[-0.5, -100.25], [0.25, 50.5]]);
    let claims = vec![
        Claim::at_most("rho(MN)", 1.0, spectral_radius(&(&m * &n))?),
        Claim::below("rho(A)", 1.0, spectral_radius(&a)?),
        Claim::value_supporting(
            "rho(MAN)",
            33.33,
            0.02,
            rho_man,
            "MAN is not Schur stable",
            rho_man > 1.0,
        ),
    ];
    let notes = vec![
        format!(
            "printed MA = {} but M A recomputes to {}",
            fmt_matrix(&printed_ma),
            fmt_matrix(&ma)
        ),
        format!(
            "M is not symmetric (||M - M^t||_F = {}), and rho(MN) = (2/3) sqrt(1.25) = {:.5} rather than 1",
            m.asymmetry()?,
            spectral_radius(&(&m * &n))?
        ),
    ];
    Ok(ExampleFixture::new(
        "eg-2.3",
        "M, N = (2/3) I with rho(MN) <= 1 mapping a stable A to an unstable MAN",
        vec![matrix("M", &m), matrix("N", &n), matrix("A", &a)],
        claims,
        notes,
    ))
}

/// `[[a, b], [c, d]] -> [[a, b], [2d, -2c]]`
pub fn eg_2_4_map() -> MapSpec {
    MapSpec::entrywise(
        2,
        &[
            ((0, 0), (0, 0), 1.0),
            ((0, 1), (0, 1), 1.0),
            ((1, 1), (1, 0), 2.0),
            ((1, 0), (1, 1), -2.0),
        ],
    )
}

pub fn eg_2_4() -> Result<ExampleFixture> {
    let l = eg_2_4_map();
    let lp = MapSpec::scaled(0.25, l.clone());
    let lp_map = build(&lp)?;
    let a = Matrix::from_rows(&[[0.75, 5.0], [0.0, -0.75]]);
    let image = lp_map.apply(&a)?;
    let unscaled = build(&l)?.apply(&a)?;
    let claims = vec![
        Claim::holds("L' normal", map_is_normal(&lp_map)),
        Claim::value("rho(L')", 0.5, 1e-9, map_spectrum(&lp_map)?.spectral_radius),
        Claim::below("rho(A)", 1.0, spectral_radius(&a)?),
        Claim::holds("A not normaloid", !classify_aloid(&a)?.normaloid),
        Claim::exceeds("rho(L'(A))", 1.0, spectral_radius(&image)?),
    ];
    let notes = vec![
        format!(
            "recomputed L'(A) = {}; the printed L'(A) is the unscaled L(A) = {}",
            fmt_matrix(&image),
            fmt_matrix(&unscaled)
        ),
        format!(
            "rho(L(A)) = {:.5} > 1 for the unscaled map, whose own radius is rho(L) = {:.5}",
            spectral_radius(&unscaled)?,
            map_radius(&l)?
        ),
    ];
    Ok(ExampleFixture::new(
        "eg-2.4",
        "a normal map L' with rho(L') < 1 claimed to send a stable A to an unstable matrix",
        vec![map("L", &l), map("L'", &lp), matrix("A", &a)],
        claims,
        notes,
    ))
}

/// `[[a, b], [c, d]] -> [[b, c], [0, 0]]`
pub fn eg_2_5_map() -> MapSpec {
    MapSpec::entrywise(2, &[((0, 1), (0, 0), 1.0), ((1, 0), (0, 1), 1.0)])
}

/// Stable matrix sent to an unstable one by the map of [`eg_2_5_map`].
pub fn eg_2_5_witness() -> Matrix {
    Matrix::from_rows(&[[0.0, 2.0], [0.1, 0.0]])
}

pub fn eg_2_5() -> Result<ExampleFixture> {
    let spec = eg_2_5_map();
    let l = build(&spec)?;
    let a = eg_2_5_witness();
    let image = l.apply(&a)?;
    let rho_a = spectral_radius(&a)?;
    let rho_image = spectral_radius(&image)?;
    let singular = matches!(
        map_inverse(&l),
        Err(Error::Singular { .. } | Error::IllConditioned { .. })
    );
    let claims = vec![
        Claim::value("rho(L)", 0.0, 1e-8, map_spectrum(&l)?.spectral_radius),
        Claim::value("||L||", 1.0, 1e-9, frobenius_operator_norm(&l)?),
        Claim::holds("L singular", singular),
        Claim::holds("L not diagonalizable", not_diagonalizable(&spec)?),
        Claim::holds(
            "L does not preserve Schur stability",
            rho_a < 1.0 && rho_image > 1.0,
        ),
    ];
    let notes = vec![format!(
        "witness (not given in the text): A = {} has rho(A) = {:.5}, L(A) = {} has rho = {}",
        fmt_matrix(&a),
        rho_a,
        fmt_matrix(&image),
        rho_image
    )];
    Ok(ExampleFixture::new(
        "eg-2.5",
        "a singular nilpotent contraction that does not preserve Schur stability",
        vec![map("L", &spec), matrix("A (derived witness)", &a)],
        claims,
        notes,
    ))
}

/// `[[a, b], [c, d]] -> [[b, 2c], [0, 0]]`
pub fn eg_2_6_map() -> MapSpec {
    MapSpec::entrywise(2, &[((0, 1), (0, 0), 1.0), ((1, 0), (0, 1), 2.0)])
}

pub fn eg_2_6() -> Result<ExampleFixture> {
    let spec = eg_2_6_map();
    let l = build(&spec)?;
    let a = Matrix::from_rows(&[[0.5, 2.0], [0.0, 0.5]]);
    let image = l.apply(&a)?;
    let printed = Matrix::diag(&[2.0, 0.0]);
    let claims = vec![
        Claim::value("rho(L)", 0.0, 1e-8, map_spectrum(&l)?.spectral_radius),
        Claim::value("||L||", 2.0, 1e-9, frobenius_operator_norm(&l)?),
        Claim::holds("L not diagonalizable", not_diagonalizable(&spec)?),
        Claim::below("rho(A)", 1.0, spectral_radius(&a)?),
        Claim::value(
            "||L(A) - printed L(A)||_F",
            0.0,
            1e-12,
            image.try_sub(&printed)?.frobenius_norm(),
        ),
        Claim::value("rho(L(A))", 2.0, 1e-9, spectral_radius(&image)?),
    ];
    Ok(ExampleFixture::new(
        "eg-2.6",
        "a nilpotent non-contractive map sending a stable A to an unstable L(A)",
        vec![map("L", &spec), matrix("A", &a)],
        claims,
        vec![],
    ))
}

/// `[[a, b], [c, d]] -> [[a, 2b], [c/2, d]]`
pub fn remark_2_12_map() -> MapSpec {
    MapSpec::entrywise(
        2,
        &[
            ((0, 0), (0, 0), 1.0),
            ((0, 1), (0, 1), 2.0),
            ((1, 0), (1, 0), 0.5),
            ((1, 1), (1, 1), 1.0),
        ],
    )
}

pub fn remark_2_12() -> Result<ExampleFixture> {
    let spec = remark_2_12_map();
    let l = build(&spec)?;
    let cfg = SampleConfig::new(2, FIXTURE_TRIALS, FIXTURE_SEED, SampleClass::General);
    let mut trace_gap: f64 = 0.0;
    let mut det_gap: f64 = 0.0;
    let det = |m: &Matrix| m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    for index in 0..FIXTURE_TRIALS as u64 {
        let a = sample_stable(&cfg, index)?;
        let b = l.apply(&a)?;
        trace_gap = trace_gap.max((b.trace() - a.trace()).abs());
        det_gap = det_gap.max((det(&b) - det(&a)).abs());
    }
    let e12 = Matrix::unit(2, 0, 1);
    let into = test_into_preserver(&l, &cfg)?;
    let rho = test_rho_preservation(&l, &cfg)?;
    let similarity = CanonicalCandidate {
        c: 1.0,
        t: Matrix::diag(&[2.0, 1.0]),
        flavor: CanonicalFlavor::Similarity,
    };
    let claims = vec![
        Claim::value("max |tr L(A) - tr A| over samples", 0.0, 1e-12, trace_gap),
        Claim::value("max |det L(A) - det A| over samples", 0.0, 1e-12, det_gap),
        Claim::holds("L invertible", map_inverse(&l).is_ok()),
        Claim::holds("spectral radius preserved on samples", rho.pass),
        Claim::holds("no stable sample mapped to an unstable matrix", into.is_clean()),
        Claim::value(
            "||L(E12) - 2 E12||_F",
            0.0,
            1e-12,
            l.apply(&e12)?.try_sub(&e12.scale(2.0))?.frobenius_norm(),
        ),
    ];
    let notes = vec![
        format!(
            "L is the similarity A -> T A T^-1 with T = diag(2, 1) (verified on a stable basis: {})",
            verify_canonical_form(&l, &similarity, true)?
        ),
        format!(
            "rho(L) = {} > 1 although L preserves Schur stability onto",
            map_spectrum(&l)?.spectral_radius
        ),
        format!("randomized checks use seed {FIXTURE_SEED} and {FIXTURE_TRIALS} samples"),
    ];
    Ok(ExampleFixture::new(
        "remark-2.12(1)",
        "an invertible preserver with a nilpotent eigenvector",
        vec![map("L", &spec)],
        claims,
        notes,
    ))
}

pub fn run_worked_examples() -> Result<Vec<ExampleFixture>> {
    Ok(vec![
        eg_2_0()?,
        eg_2_1()?,
        eg_2_2()?,
        eg_2_3()?,
        eg_2_4()?,
        eg_2_5()?,
        eg_2_6()?,
        remark_2_12()?,
    ])
}
