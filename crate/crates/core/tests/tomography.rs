mod common;

use qdiscord_core::gates;
use qdiscord_core::linalg::{self, CMatrix};
use qdiscord_core::tomography::{self, PreparationScheme, SchemeKind};
use qdiscord_core::{random, state, BipartiteState, DensityMatrix, QError, Subsystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cnot_target_a() -> CMatrix {
    gates::cnot(Subsystem::B, Subsystem::A)
        .unwrap()
        .matrix()
        .clone()
}

fn phi_plus() -> BipartiteState {
    BipartiteState::two_qubit(common::phi_plus()).unwrap()
}

fn probes() -> Vec<CMatrix> {
    tomography::canonical_probes()
        .iter()
        .map(linalg::projector)
        .collect()
}

/// Applies two channels to every probe and returns the largest output difference.
fn channel_distance(f: impl Fn(&CMatrix) -> CMatrix, g: impl Fn(&CMatrix) -> CMatrix) -> f64 {
    probes()
        .iter()
        .map(|p| linalg::max_abs_diff(&f(p), &g(p)))
        .fold(0.0, f64::max)
}

#[test]
fn cnot_matrix_matches_hand_written_oracle() {
    assert!(common::max_diff(&cnot_target_a(), &common::cnot_target_a()) == 0.0);
}

#[test]
fn method_one_environment_is_fixed() {
    let mut g = ChaCha8Rng::seed_from_u64(1);
    let s = random::full_rank_bipartite(&mut g, 2, 2);
    let scheme = PreparationScheme::measure_rotate_default();
    let envs: Vec<DensityMatrix> = (0..4)
        .map(|k| tomography::prepare(&scheme, &s, k).unwrap().env)
        .collect();
    for e in &envs[1..] {
        assert!(linalg::max_abs_diff(e.matrix(), envs[0].matrix()) < 1e-12);
    }
    for k in 0..4 {
        let prep = tomography::prepare(&scheme, &s, k).unwrap();
        let product = state::tensor_product(&prep.probe, &prep.env).unwrap();
        assert!(linalg::max_abs_diff(product.matrix(), prep.joint_after.matrix()) < 1e-12);
        assert!(linalg::max_abs_diff(prep.probe.matrix(), &probes()[k]) < 1e-12);
    }
}

#[test]
fn method_two_environment_follows_the_probe() {
    let scheme = PreparationScheme::measure_only_default();
    let s = phi_plus();
    for (k, v) in tomography::canonical_probes().iter().enumerate() {
        let prep = tomography::prepare(&scheme, &s, k).unwrap();
        // on Φ⁺ the environment is left in the complex conjugate of the probe
        let conj = v.map(|z| z.conj());
        assert!(linalg::max_abs_diff(prep.env.matrix(), &linalg::projector(&conj)) < 1e-12);
        assert!((prep.probability - 0.5).abs() < 1e-12);
    }
}

#[test]
fn identity_unitary_returns_probe() {
    let mut g = ChaCha8Rng::seed_from_u64(2);
    let s = random::full_rank_bipartite(&mut g, 2, 2);
    let prep = tomography::prepare(&PreparationScheme::measure_only_default(), &s, 2).unwrap();
    let out = tomography::evolve_and_reduce(&prep.joint_after, &linalg::identity(4)).unwrap();
    assert!(linalg::max_abs_diff(out.matrix(), prep.probe.matrix()) < 1e-12);
    assert!(tomography::evolve_and_reduce(&prep.joint_after, &linalg::identity(3)).is_err());
}

#[test]
fn cnot_on_diagonal_probe_and_environment() {
    let plus = tomography::canonical_probes()[2].clone();
    let p = DensityMatrix::pure(&plus).unwrap();
    let joint = state::tensor_product(&p, &p).unwrap();
    let out = tomography::evolve_and_reduce(&joint, &cnot_target_a()).unwrap();
    let hand = common::reduce_a(
        &(common::cnot_target_a() * joint.matrix() * common::cnot_target_a().adjoint()),
    );
    assert!(common::max_diff(out.matrix(), &hand) < 1e-12);
    assert!(linalg::max_abs_diff(out.matrix(), p.matrix()) < 1e-12);
}

#[test]
fn kraus_examples() {
    let zero = DensityMatrix::pure(&linalg::basis_ket(2, 0)).unwrap();
    let id = tomography::kraus_from_environment(&linalg::identity(4), &zero).unwrap();
    assert_eq!(id.len(), 1);
    assert!(channel_distance(|p| tomography::apply_kraus(&id, p), |p| p.clone()) < 1e-12);

    let k = tomography::kraus_from_environment(&cnot_target_a(), &zero).unwrap();
    assert_eq!(k.len(), 1);
    assert!(channel_distance(|p| tomography::apply_kraus(&k, p), |p| p.clone()) < 1e-12);

    let mixed = DensityMatrix::maximally_mixed(2);
    let k = tomography::kraus_from_environment(&cnot_target_a(), &mixed).unwrap();
    assert_eq!(k.len(), 2);
    let x = linalg::pauli_x();
    let expected = |p: &CMatrix| (p + &x * p * &x).scale(0.5);
    assert!(channel_distance(|p| tomography::apply_kraus(&k, p), expected) < 1e-12);
}

#[test]
fn kraus_channel_matches_joint_evolution() {
    let mut g = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let u = random::unitary(&mut g, 4);
        let env = random::state(&mut g, 2);
        let k = tomography::kraus_from_environment(&u, &env).unwrap();
        let completeness = tomography::kraus_completeness(&k);
        assert!(linalg::max_abs_diff(&completeness, &linalg::identity(2)) < 1e-10);
        let via_joint = |p: &CMatrix| {
            let joint =
                state::tensor_product(&DensityMatrix::new(p.clone()).unwrap(), &env).unwrap();
            tomography::evolve_and_reduce(&joint, &u)
                .unwrap()
                .into_matrix()
        };
        assert!(channel_distance(|p| tomography::apply_kraus(&k, p), via_joint) < 1e-12);
    }
}

#[test]
fn reconstruction_of_genuine_channels_is_positive_and_consistent() {
    let mut g = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let u = random::unitary(&mut g, 4);
        let env = random::state(&mut g, 2);
        let k = tomography::kraus_from_environment(&u, &env).unwrap();
        let outputs: Vec<CMatrix> = probes()
            .iter()
            .map(|p| tomography::apply_kraus(&k, p))
            .collect();
        let chi = tomography::reconstruct_chi(&probes(), &outputs).unwrap();
        assert!(*chi.eigenvalues.last().unwrap() > -1e-9);
        assert!((chi.trace() - 2.0).abs() < 1e-8);
        assert!(chi.trace_preservation_deviation() < 1e-8);
        assert!(channel_distance(|p| chi.apply(p), |p| tomography::apply_kraus(&k, p)) < 1e-9);
        // Kraus operators read off χ implement the same channel
        let back = chi.kraus_operators().unwrap();
        assert!(channel_distance(|p| tomography::apply_kraus(&back, p), |p| chi.apply(p)) < 1e-9);
    }
}

#[test]
fn singular_probe_sets_are_rejected() {
    let mut p = probes();
    p[3] = p[2].clone();
    let outs = p.clone();
    assert!(matches!(
        tomography::reconstruct_chi(&p, &outs),
        Err(QError::SingularProbeSet)
    ));
    assert!(tomography::reconstruct_chi(&probes()[..3], &probes()[..3]).is_err());
}

#[test]
fn other_complete_probe_sets_reconstruct_the_same_channel() {
    let h = linalg::hadamard();
    let rotated: Vec<CMatrix> = tomography::canonical_probes()
        .iter()
        .map(|v| linalg::projector(&(&h * v)))
        .collect();
    let x = linalg::pauli_x();
    let chan = |p: &CMatrix| p.scale(0.7) + (&x * p * &x).scale(0.3);
    let a = tomography::reconstruct_chi(&probes(), &probes().iter().map(chan).collect::<Vec<_>>())
        .unwrap();
    let b = tomography::reconstruct_chi(&rotated, &rotated.iter().map(chan).collect::<Vec<_>>())
        .unwrap();
    assert!(linalg::max_abs_diff(&a.chi, &b.chi) < 1e-12);
}

#[test]
fn method_one_is_cp_for_random_inputs() {
    let mut g = ChaCha8Rng::seed_from_u64(5);
    let scheme = PreparationScheme::measure_rotate_default();
    for _ in 0..50 {
        let s = random::full_rank_bipartite(&mut g, 2, 2);
        let u = random::unitary(&mut g, 4);
        let run = tomography::run_tomography(&s, &u, &scheme).unwrap();
        assert!(run.cp_verdict, "{:?}", run.chi.eigenvalues);
        assert!((run.chi.trace() - 2.0).abs() < 1e-8);
        for (p, o) in run.probe_states.iter().zip(&run.output_states) {
            assert!(linalg::max_abs_diff(&run.chi.apply(p.matrix()), o) < 1e-9);
        }
    }
}

#[test]
fn correlated_inputs_depend_on_the_probe_set() {
    let schemes = [
        PreparationScheme::measure_only_default(),
        PreparationScheme::measure_only_hadamard(),
    ];
    let bell = tomography::lemma2_product_check(&phi_plus(), &cnot_target_a(), &schemes).unwrap();
    assert!(!bell.product_input);
    assert!(bell.max_distance > 1e-3);

    let lemma1 = BipartiteState::two_qubit(
        (common::kron(
            &common::real(2, &[1.0, 0.0, 0.0, 0.0]),
            &common::real(2, &[1.0, 0.0, 0.0, 0.0]),
        ) + common::kron(
            &common::real(2, &[0.0, 0.0, 0.0, 1.0]),
            &common::real(2, &[0.0, 0.0, 0.0, 1.0]),
        ))
        .scale(0.5),
    )
    .unwrap();
    let report = tomography::lemma2_product_check(&lemma1, &cnot_target_a(), &schemes).unwrap();
    assert!(report.max_distance > 1e-3);
    assert!(!report.all_cp);
}

#[test]
fn lemma2_requires_measure_only_schemes() {
    let s = phi_plus();
    let u = cnot_target_a();
    let one = [PreparationScheme::measure_only_default()];
    assert!(tomography::lemma2_product_check(&s, &u, &one).is_err());
    let mixed = [
        PreparationScheme::measure_only_default(),
        PreparationScheme::measure_rotate_default(),
    ];
    assert!(tomography::lemma2_product_check(&s, &u, &mixed).is_err());
}

#[test]
fn zero_probability_preparation_fails_the_run() {
    let zero = DensityMatrix::pure(&linalg::basis_ket(2, 0)).unwrap();
    let s = state::tensor_product(&zero, &zero).unwrap();
    let err = tomography::run_tomography(
        &s,
        &cnot_target_a(),
        &PreparationScheme::measure_only_default(),
    );
    assert!(matches!(err, Err(QError::ZeroProbability(_))));
    // the anchored scheme only measures |0⟩, so it succeeds
    let run = tomography::run_tomography(
        &s,
        &cnot_target_a(),
        &PreparationScheme::measure_rotate_default(),
    )
    .unwrap();
    assert_eq!(run.scheme, SchemeKind::MeasureRotate);
}

#[test]
fn non_qubit_inputs_are_unsupported() {
    let mut g = ChaCha8Rng::seed_from_u64(6);
    let s = random::bipartite(&mut g, 2, 3);
    let u = random::unitary(&mut g, 6);
    assert!(matches!(
        tomography::run_tomography(&s, &u, &PreparationScheme::measure_only_default()),
        Err(QError::UnsupportedDimension(_))
    ));
}

#[test]
fn sampled_runs_are_seeded_and_close() {
    let scheme = PreparationScheme::measure_only_default();
    let a = tomography::run_tomography_sampled(&phi_plus(), &cnot_target_a(), &scheme, 100_000, 7)
        .unwrap();
    let b = tomography::run_tomography_sampled(&phi_plus(), &cnot_target_a(), &scheme, 100_000, 7)
        .unwrap();
    let c = tomography::run_tomography_sampled(&phi_plus(), &cnot_target_a(), &scheme, 100_000, 8)
        .unwrap();
    assert_eq!(a.chi.chi, b.chi.chi);
    assert_ne!(a.chi.chi, c.chi.chi);
    let exact = tomography::run_tomography(&phi_plus(), &cnot_target_a(), &scheme).unwrap();
    assert!(linalg::max_abs_diff(&a.chi.chi, &exact.chi.chi) < 0.05);
    assert_eq!(a.shots, Some(100_000));
    assert!(
        tomography::run_tomography_sampled(&phi_plus(), &cnot_target_a(), &scheme, 0, 1).is_err()
    );
}
