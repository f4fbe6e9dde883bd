use qdiscord_core::discord;
use qdiscord_core::ensembles::{self, DiscordClass, StateEnsemble};
use qdiscord_core::gates::{self, FlipTag, GateMatrix};
use qdiscord_core::linalg::{self, CVector};
use qdiscord_core::{QError, Subsystem};

#[test]
fn cnot_set_and_reset() {
    let set = gates::l_set();
    assert_eq!(set.iter().map(|p| p.label).collect::<String>(), "abcd");
    let g = gates::cnot(Subsystem::A, Subsystem::B).unwrap();
    let report = gates::verify_gate_on_set(&g, &set).unwrap();
    assert!(report.passed);
    for p in &report.pairs {
        assert!(1.0 - p.fidelity < 1e-12);
    }
    let reset = GateMatrix::local(&gates::pauli_z(), &gates::pauli_x());
    let r = gates::reset_pairs(&reset, &set).unwrap();
    for p in r.pairs.iter().filter(|p| p.label == 'a' || p.label == 'c') {
        assert!(p.passed, "{}", p.label);
    }
}

#[test]
fn reversed_cnot_fails_the_set() {
    let g = gates::cnot(Subsystem::B, Subsystem::A).unwrap();
    assert!(
        !gates::verify_gate_on_set(&g, &gates::l_set())
            .unwrap()
            .passed
    );
    assert!(gates::cnot(Subsystem::A, Subsystem::A).is_err());
}

#[test]
fn outputs_are_products_of_y_and_x_eigenstates() {
    for p in gates::l_set() {
        // every input and output is a product state: its reduced state is pure
        for v in [&p.input, &p.expected_output] {
            let m = linalg::projector(v);
            let a = qdiscord_core::state::trace_out_b(&m, 2, 2);
            assert!(((&a * &a).trace().re - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn flip_classification() {
    assert_eq!(
        gates::classify_flip(&gates::pauli_x()).unwrap().tag,
        FlipTag::Flipping
    );
    assert_eq!(
        gates::classify_flip(&gates::pauli_z()).unwrap().tag,
        FlipTag::Flipping
    );
    assert_eq!(
        gates::classify_flip(&gates::pauli_y()).unwrap().tag,
        FlipTag::NonFlipping
    );
    assert_eq!(
        gates::classify_flip(&GateMatrix::identity(2)).unwrap().tag,
        FlipTag::NonFlipping
    );
    let h = gates::classify_flip(&gates::hadamard()).unwrap();
    assert_eq!(h.tag, FlipTag::Flipping);
    let [re, im] = h.phase.unwrap();
    let quarter = std::f64::consts::FRAC_1_SQRT_2;
    assert!((re - quarter).abs() < 1e-12 && (im - quarter).abs() < 1e-12);
    let s = gates::classify_flip(&gates::phase_s()).unwrap();
    assert_eq!(s.tag, FlipTag::Undetermined);
    assert!(s.phase.is_none());
    assert!(gates::classify_flip(&GateMatrix::identity(4)).is_err());
}

#[test]
fn non_unitary_gates_are_rejected() {
    let m = linalg::pauli_x().scale(1.1);
    assert!(matches!(GateMatrix::new(m), Err(QError::NotUnitary(_))));
}

#[test]
fn cnot_creates_discord_from_the_input_set() {
    let g = gates::cnot(Subsystem::A, Subsystem::B).unwrap();
    let change = gates::ensemble_discord_change(&g, &gates::l_set_ensemble()).unwrap();
    assert!(change.before.abs() < 1e-8);
    assert!((change.after - 0.3113).abs() < 1e-4, "{}", change.after);
    assert!((change.after_a - change.after_b).abs() < 1e-8);
}

#[test]
fn local_gates_do_not_change_discord() {
    let g = GateMatrix::local(&gates::hadamard(), &gates::phase_s());
    let e = gates::l_set_ensemble();
    let change = gates::ensemble_discord_change(&g, &e).unwrap();
    assert!((change.before - change.after).abs() < 1e-7);
}

#[test]
fn table1_rows() {
    let rows = ensembles::table1_report().unwrap();
    assert_eq!(rows.len(), 4);
    let classes: Vec<DiscordClass> = rows.iter().map(|r| r.side_a.class).collect();
    assert_eq!(
        classes,
        [
            DiscordClass::Zero,
            DiscordClass::Zero,
            DiscordClass::Nonzero,
            DiscordClass::Nonzero
        ]
    );
    assert!(rows.iter().all(|r| r.reproduces()));
    // Φ± mixture: ρ_A = 𝟙/2 commutes, so only the optimized D₁ certifies it
    assert!(rows[2].side_a.commutator_norm < 1e-12);
    assert!(rows[2].side_a.d1.unwrap() > 1e-4);
    // unequal teahouse fails the commutator test outright
    assert!(rows[3].side_a.commutator_norm > 1e-6);
}

#[test]
fn teahouse_with_equal_weights_is_maximally_mixed() {
    let s = ensembles::ensemble_density(&ensembles::teahouse_states());
    assert!(linalg::max_abs_diff(s.matrix(), &linalg::identity(9).scale(1.0 / 9.0)) < 1e-15);
    assert!(discord::is_zero_discord(&s, Subsystem::A).unwrap().is_zero);
}

#[test]
fn single_upweighted_teahouse_member_stays_classical() {
    let mut w = [0.1; 9];
    w[0] = 0.2;
    let e = ensembles::teahouse_states().with_weights(&w).unwrap();
    let s = ensembles::ensemble_density(&e);
    assert!(discord::is_zero_discord(&s, Subsystem::A).unwrap().is_zero);
    let s = ensembles::ensemble_density(&ensembles::teahouse_unequal());
    assert!(!discord::is_zero_discord(&s, Subsystem::A).unwrap().is_zero);
}

#[test]
fn ensemble_validation() {
    let v = linalg::basis_ket(4, 0);
    assert!(StateEnsemble::new(vec![(0.5, v.clone()), (0.6, v.clone())], (2, 2)).is_err());
    assert!(StateEnsemble::new(vec![(1.0, v.scale(2.0))], (2, 2)).is_err());
    assert!(StateEnsemble::new(vec![(1.0, CVector::zeros(3))], (2, 2)).is_err());
    assert!(ensembles::teahouse_states()
        .with_weights(&[0.5, 0.5])
        .is_err());
}
