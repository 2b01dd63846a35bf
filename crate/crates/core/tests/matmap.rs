use proptest::prelude::*;
use rand::Rng;

use schurlab::io::parse_map_spec;
use schurlab::linalg::{eigenvalues, operator_norm, symmetric_eigenvalues, Matrix};
use schurlab::matmap::{
    build, congruence_eigenvalue_law_check, map_inverse, map_spectrum, restrict_symmetric, MapSpec,
};
use schurlab::preserver::{gaussian_matrix, random_orthogonal, random_well_conditioned, trial_rng};

fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.try_sub(b).unwrap().max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

fn leaf(seed: u64, n: usize) -> impl Strategy<Value = MapSpec> {
    (0u8..5, any::<u64>()).prop_map(move |(kind, salt)| {
        let mut rng = trial_rng(seed ^ salt, 0);
        let g = gaussian_matrix(&mut rng, n, n);
        match kind {
            0 => MapSpec::LeftRight {
                left: g,
                right: gaussian_matrix(&mut rng, n, n),
            },
            1 => MapSpec::Congruence { a: g },
            2 => MapSpec::Similarity {
                t: random_well_conditioned(&mut rng, n),
            },
            3 => MapSpec::Transpose { n },
            _ => MapSpec::TraceShift {
                alpha: rng.random_range(-1.0..1.0),
                beta: rng.random_range(-1.0..1.0),
                s: random_well_conditioned(&mut rng, n),
            },
        }
    })
}

fn spec_tree(n: usize) -> impl Strategy<Value = MapSpec> {
    leaf(1, n).prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (-2.0f64..2.0, inner.clone()).prop_map(|(c, m)| MapSpec::scaled(c, m)),
            prop::collection::vec(inner.clone(), 1..4).prop_map(|maps| MapSpec::Sum { maps }),
            prop::collection::vec(inner, 1..4).prop_map(|maps| MapSpec::Compose { maps }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rep_agrees_with_direct_evaluation(
        (spec, x) in (1usize..4).prop_flat_map(|n| {
            (spec_tree(n), prop::collection::vec(-2.0f64..2.0, n * n)
                .prop_map(move |d| Matrix::new(n, n, d).unwrap()))
        })
    ) {
        let l = build(&spec).unwrap();
        let via_rep = l.apply(&x).unwrap();
        let direct = spec.evaluate(&x).unwrap();
        prop_assert!(close(&via_rep, &direct, 1e-9), "{:?} vs {:?}", via_rep, direct);
    }

    #[test]
    fn spec_json_round_trips(spec in (1usize..4).prop_flat_map(spec_tree)) {
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(parse_map_spec(&text).unwrap(), spec);
    }
}

#[test]
fn compose_applies_the_last_map_first() {
    let n = 2;
    let shift = MapSpec::LeftRight {
        left: Matrix::unit(n, 0, 1),
        right: Matrix::identity(n),
    };
    let spec = MapSpec::Compose {
        maps: vec![MapSpec::Transpose { n }, shift],
    };
    // E_21 -> E_12 E_21 = E_11 -> E_11, whereas transposing first gives E_12 E_12 = 0.
    let x = Matrix::unit(n, 1, 0);
    assert_eq!(build(&spec).unwrap().apply(&x).unwrap(), Matrix::unit(n, 0, 0));
}

#[test]
fn similarity_spectrum_is_eigenvalue_ratios() {
    for index in 0..20u64 {
        let mut rng = trial_rng(51, index);
        let n = rng.random_range(2..=4);
        let t = random_well_conditioned(&mut rng, n);
        let lam = eigenvalues(&t).unwrap().eigenvalues;
        let max = lam.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min = lam.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let rho = map_spectrum(&build(&MapSpec::Similarity { t }).unwrap())
            .unwrap()
            .spectral_radius;
        assert!((rho - max / min).abs() <= 1e-8 * rho, "{rho} vs {}", max / min);
    }
}

#[test]
fn congruence_law_holds_on_random_matrices() {
    for index in 0..100u64 {
        let mut rng = trial_rng(53, index);
        let n = rng.random_range(2..=6);
        let a = gaussian_matrix(&mut rng, n, n);
        assert!(congruence_eigenvalue_law_check(&a).unwrap(), "index {index}");
    }
}

#[test]
fn restricted_orthogonal_congruence_is_orthogonal() {
    for index in 0..20u64 {
        let mut rng = trial_rng(57, index);
        let n = rng.random_range(2..=5);
        let r = random_orthogonal(&mut rng, n);
        let l = restrict_symmetric(&build(&MapSpec::Congruence { a: r }).unwrap()).unwrap();
        let rep = l.rep();
        let gram = &rep.transpose() * rep;
        assert!(gram.try_sub(&Matrix::identity(rep.rows())).unwrap().max_abs() <= 1e-10);
        let sv = symmetric_eigenvalues(&gram).unwrap();
        assert!(sv.iter().all(|s| (s - 1.0).abs() <= 1e-10));
    }
}

#[test]
fn inverse_undoes_the_map() {
    for index in 0..20u64 {
        let mut rng = trial_rng(59, index);
        let n = rng.random_range(2..=4);
        let spec = MapSpec::Similarity {
            t: random_well_conditioned(&mut rng, n),
        };
        let l = build(&spec).unwrap();
        let inv = map_inverse(&l).unwrap();
        let x = gaussian_matrix(&mut rng, n, n);
        assert!(close(&inv.apply(&l.apply(&x).unwrap()).unwrap(), &x, 1e-10));
        assert!(inv.apply_direct(&x).is_none());
    }
}

#[test]
fn transpose_is_a_self_adjoint_isometry() {
    for n in 1..5 {
        let l = build(&MapSpec::Transpose { n }).unwrap();
        assert!((operator_norm(l.rep()).unwrap() - 1.0).abs() <= 1e-12);
        assert!((map_spectrum(&l).unwrap().spectral_radius - 1.0).abs() <= 1e-12);
    }
}
