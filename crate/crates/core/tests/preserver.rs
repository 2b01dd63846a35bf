use rand::Rng;

use schurlab::fixtures::{eg_2_5_map, remark_2_12_map};
use schurlab::linalg::{spectral_radius, symmetric_eigenvalues, Matrix};
use schurlab::matmap::{build, map_is_normal, map_spectrum, restrict_symmetric, MapSpec};
use schurlab::preserver::{
    gaussian_matrix, random_orthogonal, random_well_conditioned, sample_stable,
    test_into_preserver, test_nilpotent_preservation, test_onto_preserver, test_rho_preservation,
    trace_shift_condition, trial_rng, verify_canonical_form, CanonicalCandidate, CanonicalFlavor,
    Outcome, SampleClass, SampleConfig, SEPARATION,
};
use schurlab::stability::{is_nilpotent, is_schur_stable};

fn cfg(n: usize, trials: usize, seed: u64) -> SampleConfig {
    SampleConfig::new(n, trials, seed, SampleClass::General)
}

fn leftright(left: Matrix, right: Matrix) -> MapSpec {
    MapSpec::LeftRight { left, right }
}

#[test]
fn scaled_similarity_has_no_counterexample() {
    let mut rng = trial_rng(61, 0);
    let t = random_well_conditioned(&mut rng, 3);
    let l = build(&MapSpec::scaled(0.9, MapSpec::Similarity { t })).unwrap();
    let v = test_into_preserver(&l, &cfg(3, 1000, 1)).unwrap();
    assert_eq!(v.outcome, Outcome::NoCounterexample);
    assert_eq!(v.trials_run, 1000);
}

#[test]
fn diagonal_left_multiplication_breaks_stability() {
    let m = Matrix::diag(&[0.79323, -0.24866]);
    let l = build(&leftright(m, Matrix::identity(2))).unwrap();
    let v = test_into_preserver(&l, &cfg(2, 5000, 2)).unwrap();
    let w = v.witness.expect("counterexample");
    assert!(w.rho_a <= 1.0 - SEPARATION && w.rho_image >= 1.0 + SEPARATION);

    // The specific matrix quoted for this M is itself a witness.
    let a = Matrix::from_rows(&[[1.17258, 1.35575], [-0.94256, -0.39761]]);
    assert!(spectral_radius(&a).unwrap() < 1.0);
    assert!(spectral_radius(&l.apply(&a).unwrap()).unwrap() > 1.0);
}

#[test]
fn rotation_like_left_factor_breaks_stability() {
    let m = Matrix::from_rows(&[[-1.0, -0.5], [0.5, -1.0]]);
    let l = build(&leftright(m, Matrix::identity(2).scale(2.0 / 3.0))).unwrap();
    let v = test_into_preserver(&l, &cfg(2, 5000, 3)).unwrap();
    assert_eq!(v.outcome, Outcome::Counterexample);
}

#[test]
fn orthogonal_congruence_is_onto() {
    let mut rng = trial_rng(67, 0);
    let r = random_orthogonal(&mut rng, 3);
    let l = build(&MapSpec::Congruence { a: r }).unwrap();
    let v = test_onto_preserver(&l, &cfg(3, 1000, 4)).unwrap();
    assert!(v.onto);
    assert!(v.singular.is_none());
}

#[test]
fn singular_map_is_not_onto() {
    let l = build(&eg_2_5_map()).unwrap();
    let v = test_onto_preserver(&l, &cfg(2, 200, 5)).unwrap();
    assert!(!v.onto);
    assert!(v.singular.is_some());
    assert!(v.inverse.is_none());
}

#[test]
fn half_similarity_is_into_but_not_onto() {
    let mut rng = trial_rng(71, 0);
    let t = random_well_conditioned(&mut rng, 2);
    let l = build(&MapSpec::scaled(0.5, MapSpec::Similarity { t })).unwrap();
    let v = test_onto_preserver(&l, &cfg(2, 1000, 6)).unwrap();
    assert!(v.forward.is_clean());
    let inv = v.inverse.expect("invertible");
    let w = inv.witness.expect("inverse doubles the radius");
    assert!((w.rho_image - 2.0 * w.rho_a).abs() <= 1e-8);
    assert!(!v.onto);
}

#[test]
fn rho_preservation_examples() {
    let mut rng = trial_rng(73, 0);
    let t = random_well_conditioned(&mut rng, 3);
    let sim = build(&MapSpec::Similarity { t }).unwrap();
    assert!(test_rho_preservation(&sim, &cfg(3, 500, 7)).unwrap().pass);

    let r = random_orthogonal(&mut rng, 3);
    let cong = restrict_symmetric(&build(&MapSpec::Congruence { a: r }).unwrap()).unwrap();
    let sym = cfg(3, 500, 8).with_class(SampleClass::Symmetric);
    assert!(test_rho_preservation(&cong, &sym).unwrap().pass);

    let shrink = build(&MapSpec::scaled(0.9, MapSpec::identity(3))).unwrap();
    let v = test_rho_preservation(&shrink, &cfg(3, 100, 9)).unwrap();
    assert!(!v.pass);
    assert!((v.max_deviation - 0.1).abs() <= 1e-9);
}

#[test]
fn nilpotent_preservation_examples() {
    let nil = |n| SampleConfig::new(n, 300, 10, SampleClass::Nilpotent);
    let mut rng = trial_rng(79, 0);
    let sim = build(&MapSpec::Similarity {
        t: random_well_conditioned(&mut rng, 3),
    })
    .unwrap();
    assert!(test_nilpotent_preservation(&sim, &nil(3)).unwrap().pass());

    let remark = build(&remark_2_12_map()).unwrap();
    let v = test_nilpotent_preservation(&remark, &nil(2)).unwrap();
    assert!(v.pass() && v.nilpotents_preserved);
    let e12 = Matrix::unit(2, 0, 1);
    let image = remark.apply(&e12).unwrap();
    assert_eq!(image, e12.scale(2.0));
    assert!(is_nilpotent(&image).unwrap());

    let shift = build(&MapSpec::TraceShift {
        alpha: 0.5,
        beta: 0.5,
        s: Matrix::identity(2),
    })
    .unwrap();
    let v = test_nilpotent_preservation(&shift, &nil(2)).unwrap();
    assert!(v.nilpotents_preserved);
}

#[test]
fn trace_shift_condition_examples() {
    assert!(trace_shift_condition(0.0, 1.0, 3));
    assert!(!trace_shift_condition(0.5, 0.5, 2));
    assert!(trace_shift_condition(0.1, 0.8, 2));
    assert!(!trace_shift_condition(0.5, 0.0, 2));
    assert!(!trace_shift_condition(-0.5, 1.0, 2));
}

#[test]
fn trace_shifts_satisfying_the_condition_preserve_stability() {
    for index in 0..10u64 {
        let mut rng = trial_rng(83, index);
        let n = rng.random_range(2..=4);
        let (alpha, beta) = loop {
            let a: f64 = rng.random_range(-0.4..0.4);
            let b: f64 = rng.random_range(-1.0..1.0);
            if trace_shift_condition(a, b, n) {
                break (a, b);
            }
        };
        let s = random_well_conditioned(&mut rng, n);
        let l = build(&MapSpec::TraceShift { alpha, beta, s }).unwrap();
        assert!(test_into_preserver(&l, &cfg(n, 300, index)).unwrap().is_clean());
    }
}

#[test]
fn commuting_symmetric_factors_preserve_stable_normaloid_matrices() {
    for index in 0..10u64 {
        let mut rng = trial_rng(89, index);
        let n = rng.random_range(2..=4);
        let s = gaussian_matrix(&mut rng, n, n).symmetric_part();
        let m = &(&s * &s) + &s.scale(0.5);
        let nn = &s.scale(-1.0) + &Matrix::identity(n).scale(2.0);
        let scale = spectral_radius(&(&m * &nn)).unwrap().max(1e-12);
        let m = m.scale(1.0 / scale);
        assert!(spectral_radius(&(&m * &nn)).unwrap() <= 1.0 + 1e-12);
        let l = build(&leftright(m, nn)).unwrap();
        let sym = cfg(n, 300, index).with_class(SampleClass::Normaloid);
        assert!(test_into_preserver(&l, &sym).unwrap().is_clean(), "index {index}");
    }
}

#[test]
fn orthogonal_maps_have_unit_spectral_radius() {
    for index in 0..10u64 {
        let mut rng = trial_rng(97, index);
        let n = rng.random_range(2..=4);
        let r = random_orthogonal(&mut rng, n);
        for spec in [
            MapSpec::Congruence { a: r.clone() },
            MapSpec::Similarity { t: r.clone() },
            MapSpec::scaled(-1.0, MapSpec::Congruence { a: r.clone() }),
        ] {
            let rho = map_spectrum(&build(&spec).unwrap()).unwrap().spectral_radius;
            assert!((rho - 1.0).abs() <= 1e-9, "{rho}");
        }
    }
}

#[test]
fn onto_preserver_with_spectral_radius_two() {
    // X -> T X T^-1 preserves every spectrum, yet its rep has eigenvalues 2 and 1/2.
    let l = build(&MapSpec::Similarity {
        t: Matrix::diag(&[2.0, 1.0]),
    })
    .unwrap();
    assert!(test_onto_preserver(&l, &cfg(2, 1000, 11)).unwrap().onto);
    assert!(test_rho_preservation(&l, &cfg(2, 500, 12)).unwrap().pass);
    let rho = map_spectrum(&l).unwrap().spectral_radius;
    assert!((rho - 2.0).abs() <= 1e-12);
}

#[test]
fn normal_contraction_on_symmetric_matrices_can_break_stability() {
    // L(X) = <X, U> U with U = diag(u1, u2) of unit Frobenius norm is
    // self-adjoint for the trace inner product, with rho(L) = 1.
    let norm = (0.9f64 * 0.9 + 0.436 * 0.436).sqrt();
    let (u1, u2) = (0.9 / norm, 0.436 / norm);
    let spec = MapSpec::entrywise(
        2,
        &[
            ((0, 0), (0, 0), u1 * u1),
            ((0, 0), (1, 1), u1 * u2),
            ((1, 1), (0, 0), u2 * u1),
            ((1, 1), (1, 1), u2 * u2),
        ],
    );
    let l = restrict_symmetric(&build(&spec).unwrap()).unwrap();
    assert!(map_is_normal(&l));
    let rho_l = map_spectrum(&l).unwrap().spectral_radius;
    assert!((rho_l - 1.0).abs() <= 1e-12);

    let a = Matrix::identity(2).scale(0.99);
    assert!(is_schur_stable(&a).unwrap().is_stable());
    let image = l.apply(&a).unwrap();
    let rho = symmetric_eigenvalues(&image).unwrap()[1];
    assert!(rho > 1.15, "{rho}");
}

#[test]
fn canonical_form_examples() {
    let mut rng = trial_rng(101, 0);
    let r = random_orthogonal(&mut rng, 3);
    let cong = build(&MapSpec::Congruence { a: r.clone() }).unwrap();
    let candidate = |c: f64, t: Matrix, flavor| CanonicalCandidate { c, t, flavor };
    assert!(verify_canonical_form(
        &cong,
        &candidate(1.0, r.clone(), CanonicalFlavor::OrthogonalCongruence),
        true
    )
    .unwrap());

    let neg = build(&MapSpec::scaled(-1.0, MapSpec::Congruence { a: r.clone() })).unwrap();
    assert!(verify_canonical_form(
        &neg,
        &candidate(-1.0, r.clone(), CanonicalFlavor::OrthogonalCongruence),
        true
    )
    .unwrap());
    assert!(!verify_canonical_form(
        &neg,
        &candidate(1.0, r, CanonicalFlavor::OrthogonalCongruence),
        true
    )
    .unwrap());

    let t = random_well_conditioned(&mut rng, 3);
    let sim = build(&MapSpec::Similarity { t: t.clone() }).unwrap();
    assert!(verify_canonical_form(
        &sim,
        &candidate(1.0, t.scale(2.0), CanonicalFlavor::Similarity),
        true
    )
    .unwrap());

    let tsim = build(&MapSpec::Compose {
        maps: vec![MapSpec::Similarity { t: t.clone() }, MapSpec::Transpose { n: 3 }],
    })
    .unwrap();
    assert!(verify_canonical_form(
        &tsim,
        &candidate(1.0, t, CanonicalFlavor::TransposeSimilarity),
        true
    )
    .unwrap());
}

#[test]
fn verdicts_replay_from_the_seed() {
    let m = Matrix::from_rows(&[[1.0, -1.0], [0.0, -1.0]]);
    let l = build(&leftright(m, Matrix::identity(2))).unwrap();
    let c = cfg(2, 2000, 42);
    let first = test_into_preserver(&l, &c).unwrap();
    assert_eq!(first, test_into_preserver(&l, &c).unwrap());
    let w = first.witness.as_ref().expect("counterexample");
    assert_eq!(sample_stable(&c, w.index).unwrap(), w.a);
    // The reported witness is the first one in index order.
    for index in 0..w.index {
        let a = sample_stable(&c, index).unwrap();
        let img = spectral_radius(&l.apply(&a).unwrap()).unwrap();
        assert!(img < 1.0 + SEPARATION);
    }
    assert_eq!(
        test_rho_preservation(&l, &c).unwrap(),
        test_rho_preservation(&l, &c).unwrap()
    );
}

#[test]
fn symmetric_samples_are_normaloid_and_nilpotent_samples_nilpotent() {
    let sym = SampleConfig::new(4, 1, 13, SampleClass::Symmetric);
    let nil = SampleConfig::new(4, 1, 13, SampleClass::Nilpotent);
    for index in 0..100 {
        let a = sample_stable(&sym, index).unwrap();
        assert!(schurlab::stability::classify_aloid(&a).unwrap().normaloid);
        assert!(is_nilpotent(&sample_stable(&nil, index).unwrap()).unwrap());
    }
}
