use qsteer_core::circuits::{emit_text, evaluate_circuit, parse_text, synth_kak_circuit, synth_qutrit_circuit};
use qsteer_core::geometry::{chamber_distance, kak_decompose, weyl_coordinates};
use qsteer_core::linalg::{haar_unitary, phase_invariant_distance};
use qsteer_core::protocol::{run_blind, NoiseConfig};
use qsteer_core::rng::SplitMix64;
use qsteer_core::states::{random_density, stabilizer_catalog, QutritTarget, Target};
use qsteer_core::steering::{make_steering_operator, TargetSpec};
use qsteer_core::tomography::{average_gate_fidelity, process_tomography, state_fidelity, state_tomography, PauliTransferMatrix, Shots};

#[test]
fn haar_kak_reassembly() {
    let mut rng = SplitMix64::new(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let u = haar_unitary(4, &mut rng);
        let kak = kak_decompose(&u).unwrap();
        worst = worst.max(u.max_abs_diff(&kak.reassemble()));
        assert!(chamber_distance(kak.c, weyl_coordinates(&u).unwrap()) < 1e-12);
    }
    assert!(worst < 1e-9, "worst reassembly error {worst:e}");
}

#[test]
fn synthesized_circuit_survives_text_and_tomography() {
    for entry in stabilizer_catalog() {
        let spec = TargetSpec::new(Target::Qubit(entry.target()), 0.8).unwrap();
        let op = make_steering_operator(&spec).unwrap();
        let circuit = parse_text(&emit_text(&synth_kak_circuit(&spec).unwrap())).unwrap();
        let u = evaluate_circuit(&circuit).unwrap();
        assert!(phase_invariant_distance(&u, op.unitary()).unwrap() < 1e-9);

        let est = process_tomography(std::slice::from_ref(&u), 2, Shots::Infinite, None, 0).unwrap();
        let ideal = PauliTransferMatrix::from_unitary(op.unitary()).unwrap();
        assert!((average_gate_fidelity(&est.ptm, &ideal).unwrap() - 1.0).abs() < 1e-9, "{}", entry.label);
    }
}

#[test]
fn qutrit_circuit_matches_operator() {
    let spec = TargetSpec::new(Target::Qutrit(QutritTarget::equal_superposition()), 1.1).unwrap();
    let op = make_steering_operator(&spec).unwrap();
    let circuit = parse_text(&emit_text(&synth_qutrit_circuit(&spec).unwrap())).unwrap();
    assert!(phase_invariant_distance(&evaluate_circuit(&circuit).unwrap(), op.unitary()).unwrap() < 1e-9);
}

#[test]
fn blind_run_then_state_tomography() {
    let target = Target::parse("-i").unwrap();
    let op = make_steering_operator(&TargetSpec::new(target, 1.2).unwrap()).unwrap();
    let run = run_blind(&random_density(2, 5).unwrap(), &op, 20, &NoiseConfig::default()).unwrap();
    let est = state_tomography(&run.final_state, Shots::Infinite, None, 0).unwrap();
    assert!(state_fidelity(&est.state, &run.final_state).unwrap() > 1.0 - 1e-12);
    assert!(run.record.fidelities.last().unwrap() > &0.999);
}
