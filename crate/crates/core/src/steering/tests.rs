use std::vec;
use std::vec::Vec;

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use proptest::prelude::*;

use super::*;
use crate::linalg::{cis, herm_eig, ONE, ZERO};
use crate::rng::SplitMix64;
use crate::states::{fidelity, random_density, random_density_with, stabilizer_catalog};

/// Explicit 4×4 form of the qubit Hamiltonian with α = sinθ and
/// β± = e^{iφ}(cosθ ± 1).
fn explicit_qubit_matrix(theta: f64, phi: f64, coupling: f64, phase_angle: f64) -> ComplexMatrix {
    let a = c(theta.sin(), 0.0);
    let bp = cis(phase_angle) * (theta.cos() + 1.0);
    let bm = cis(phase_angle) * (theta.cos() - 1.0);
    let _ = phi;
    ComplexMatrix::from_rows([
        [ZERO, ZERO, a, -bm.conj()],
        [ZERO, ZERO, -bp, -a],
        [a, -bp.conj(), ZERO, ZERO],
        [-bm, -a, ZERO, ZERO],
    ])
    .scale_re(coupling / 2.0)
}

fn pauli2(a: Pauli, b: Pauli) -> ComplexMatrix {
    kron(&a.matrix(), &b.matrix())
}

fn qubit_spec(theta: f64, phi: f64, j: f64) -> TargetSpec {
    TargetSpec::new(Target::Qubit(QubitTarget::new(theta, phi).unwrap()), j).unwrap()
}

fn iterate(rho: &DensityState, k: &KrausSet, n: usize) -> Vec<DensityState> {
    let mut out = vec![rho.clone()];
    for _ in 0..n {
        let next = averaged_step(out.last().unwrap(), k).unwrap();
        out.push(next);
    }
    out
}

#[test]
fn pauli_form_matches_explicit_matrix_with_phi_phase() {
    let mut rng = SplitMix64::new(2024);
    let mut theta_phase_mismatch = 0;
    for _ in 0..100 {
        let theta = rng.next_f64() * PI;
        let phi = rng.next_f64() * TAU;
        let j = 0.1 + 2.0 * rng.next_f64();
        let h = build_qubit_hamiltonian(theta, phi, j).unwrap();
        assert!(h.max_abs_diff(&explicit_qubit_matrix(theta, phi, j, phi)) < 1e-12);
        if h.max_abs_diff(&explicit_qubit_matrix(theta, phi, j, theta)) > 1e-6 {
            theta_phase_mismatch += 1;
        }
        assert!(h.is_hermitian(0.0));
        // Anti-block-diagonal in the ancilla index.
        for i in 0..2 {
            for k in 0..2 {
                assert_eq!(h[(i, k)], ZERO);
                assert_eq!(h[(2 + i, 2 + k)], ZERO);
            }
        }
    }
    // Using θ in the phase of β± disagrees with the operator form.
    assert_eq!(theta_phase_mismatch, 100);
}

#[test]
fn qubit_hamiltonian_examples() {
    use Pauli::{X, Y, Z};
    let j = 0.83;
    let plus = build_qubit_hamiltonian(FRAC_PI_2, 0.0, j).unwrap();
    let expected = (&pauli2(X, Z) - &pauli2(Y, Y)).scale_re(j / 2.0);
    assert!(plus.max_abs_diff(&expected) < 1e-15);
    let zero = build_qubit_hamiltonian(0.0, 0.0, j).unwrap();
    let expected = (&pauli2(X, X) + &pauli2(Y, Y)).scale_re(-j / 2.0);
    assert!(zero.max_abs_diff(&expected) < 1e-15);
    assert!(build_qubit_hamiltonian(4.0, 0.0, j).is_err());
}

#[test]
fn catalog_terms_match_builder() {
    for e in stabilizer_catalog() {
        for j in [0.3, FRAC_PI_2, 2.5] {
            let h = build_qubit_hamiltonian(e.theta, e.phi, j).unwrap();
            assert!(h.max_abs_diff(&e.hamiltonian(j)) < 1e-12, "{}", e.label);
        }
    }
}

#[test]
fn qutrit_equal_superposition_matrix_is_exact() {
    let h = build_qutrit_hamiltonian(&QutritTarget::equal_superposition());
    let t = 2.0 / 3.0;
    let m = -1.0 / 3.0;
    let expected = ComplexMatrix::from_real([
        [0.0, 0.0, 0.0, t, t, t],
        [0.0, 0.0, 0.0, m, m, m],
        [0.0, 0.0, 0.0, m, m, m],
        [t, m, m, 0.0, 0.0, 0.0],
        [t, m, m, 0.0, 0.0, 0.0],
        [t, m, m, 0.0, 0.0, 0.0],
    ]);
    assert_eq!(h, expected);
    let ev = herm_eig(&h).unwrap().values;
    let r2 = 2f64.sqrt();
    let want = [-r2, 0.0, 0.0, 0.0, 0.0, r2];
    for (a, b) in ev.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn nu_complement_sums_to_coupling_row() {
    let [a, b] = complement_basis(&QutritTarget::equal_superposition());
    let r = 1.0 / 3f64.sqrt();
    let want = [2.0 * r, -r, -r];
    for i in 0..3 {
        assert!((a[i] + b[i] - c(want[i], 0.0)).norm() < 1e-15);
    }
    assert!(a.inner(&b).norm() < 1e-15);
}

#[test]
fn qutrit_target_lies_in_kernel() {
    let two = QutritTarget::new(0.0, 0.0, 0.0, 0.0).unwrap();
    assert!((two.ket()[2] - ONE).norm() < 1e-15);
    let h = build_qutrit_hamiltonian(&two);
    let v = h.apply(&Ket::basis(2, 0).kron(&two.ket())).unwrap();
    assert!(v.norm() < 1e-15);
}

#[test]
fn qutrit_coupling_maps_target_into_complement() {
    let mut rng = SplitMix64::new(17);
    for _ in 0..100 {
        let q = QutritTarget::new(
            rng.next_f64() * PI,
            rng.next_f64() * PI,
            rng.next_f64() * TAU,
            rng.next_f64() * TAU,
        )
        .unwrap();
        let psi = q.ket();
        let [a, b] = complement_basis(&q);
        assert!(psi.inner(&a).norm() < 1e-12 && psi.inner(&b).norm() < 1e-12);
        assert!(a.inner(&b).norm() < 1e-12);
        let h = build_qutrit_hamiltonian(&q);
        assert!(h.is_hermitian(1e-15));
        // Ancilla ground with target: annihilated.
        assert!(h.apply(&Ket::basis(2, 0).kron(&psi)).unwrap().norm() < 1e-12);
        // Excited ancilla with target: mapped to ground ⊗ complement.
        let out = h.apply(&Ket::basis(2, 1).kron(&psi)).unwrap();
        let sys = Ket(out.0[0..3].to_vec());
        assert!(out.0[3..].iter().all(|z| z.norm() < 1e-12));
        assert!(psi.inner(&sys).norm() < 1e-12);
        assert!((sys.norm() - 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn zero_coupling_gives_identity() {
    let op = make_steering_operator(&qubit_spec(1.0, 2.0, 0.0)).unwrap();
    assert!(op.unitary().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
}

#[test]
fn plus_target_converges_in_one_step_at_half_pi() {
    let op = make_steering_operator(&qubit_spec(FRAC_PI_2, 0.0, FRAC_PI_2)).unwrap();
    let k = op.kraus();
    for seed in 0..20 {
        let rho = random_density(2, seed).unwrap();
        let out = averaged_step(&rho, &k).unwrap();
        assert!((fidelity(&out, op.target()).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pi_coupling_matches_joint_evaluation() {
    let op = make_steering_operator(&qubit_spec(0.0, 0.0, PI)).unwrap();
    let k = op.kraus();
    for seed in 0..20 {
        let rho = random_density(2, seed).unwrap();
        let a = averaged_step(&rho, &k).unwrap();
        let b = joint_step(&rho, &op).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }
}

#[test]
fn kraus_examples() {
    let id = SteeringOperator::from_hamiltonian(ComplexMatrix::zeros(4), 2, Ket::basis(2, 0), 0.0).unwrap();
    let k = id.kraus();
    assert_eq!(k.operators()[0], ComplexMatrix::identity(2));
    assert_eq!(k.operators()[1], ComplexMatrix::zeros(2));

    let swap = ComplexMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let k = KrausSet::from_unitary(&swap, 2, &[(1.0, Ket::basis(2, 0))]).unwrap();
    for kk in 0..2 {
        assert_eq!(k.operators()[kk], Ket::basis(2, 0).outer(&Ket::basis(2, kk)));
    }
    assert!(k.completeness_error() < 1e-15);
}

#[test]
fn kraus_sets_are_complete() {
    for e in stabilizer_catalog() {
        for j in [FRAC_PI_8, 1.0, 2.9] {
            let op = make_steering_operator(&qubit_spec(e.theta, e.phi, j)).unwrap();
            verify_operator(&op).unwrap();
            assert!(op.kraus().completeness_error() < 1e-12);
            assert!(op.kraus_with_reset_error(0.1).unwrap().completeness_error() < 1e-12);
        }
    }
    let q = TargetSpec::new(Target::Qutrit(QutritTarget::equal_superposition()), 0.7).unwrap();
    let op = make_steering_operator(&q).unwrap();
    assert_eq!(op.kraus().operators().len(), 2);
    assert!(op.kraus().completeness_error() < 1e-12);
    assert!(op.kraus_with_reset_error(1.5).is_err());
}

#[test]
fn ground_ancilla_steers_and_excited_ancilla_anti_steers() {
    // Ancilla |0⟩ drives towards the target; ancilla |1⟩ towards its
    // orthogonal complement.
    let spec = qubit_spec(FRAC_PI_2, 0.0, 0.9);
    let ground = make_steering_operator(&spec).unwrap();
    let excited = make_steering_operator(&spec).unwrap().with_ancilla(Ket::basis(2, 1)).unwrap();
    let rho = random_density(2, 3).unwrap();
    let f = |op: &SteeringOperator| {
        let states = iterate(&rho, &op.kraus(), 200);
        fidelity(states.last().unwrap(), op.target()).unwrap()
    };
    assert!(f(&ground) > 1.0 - 1e-12);
    assert!(f(&excited) < 1e-12);
}

#[test]
fn averaged_step_matches_partial_trace() {
    let mut rng = SplitMix64::new(7);
    for _ in 0..200 {
        let spec = if rng.next_f64() < 0.5 {
            qubit_spec(rng.next_f64() * PI, rng.next_f64() * TAU, 3.0 * rng.next_f64())
        } else {
            let q = QutritTarget::new(rng.next_f64() * PI, rng.next_f64() * PI, rng.next_f64() * TAU, 0.5).unwrap();
            TargetSpec::new(Target::Qutrit(q), 3.0 * rng.next_f64()).unwrap()
        };
        let op = make_steering_operator(&spec).unwrap();
        let rho = random_density_with(op.system_dim(), &mut rng);
        let a = averaged_step(&rho, &op.kraus()).unwrap();
        let b = joint_step(&rho, &op).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-11);
        assert!((a.matrix().trace().re - 1.0).abs() < 1e-11);
        assert!(herm_eig(a.matrix()).unwrap().values[0] > -1e-12);
    }
}

#[test]
fn identity_kraus_leaves_state_unchanged() {
    let k = KrausSet::from_operators(vec![ComplexMatrix::identity(3)]).unwrap();
    let rho = random_density(3, 5).unwrap();
    assert!(averaged_step(&rho, &k).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    assert!(averaged_step(&random_density(2, 5).unwrap(), &k).is_err());
}

#[test]
fn steering_inequality_examples() {
    assert!(steering_inequality_holds(&[0.5, 0.5, 0.5]).holds);
    let check = steering_inequality_holds(&[0.1, 0.4, 0.3, 0.9, 0.2]);
    assert!(!check.holds);
    assert_eq!(check.first_violation, Some(2));
    assert!(steering_inequality_holds(&[0.5, 0.5 - 1e-13]).holds);
}

#[test]
fn analytic_plus_trajectory_matches_channel() {
    for j in [0.2, FRAC_PI_8, FRAC_PI_4, 1.1, FRAC_PI_2, 2.3, 3.0] {
        let op = make_steering_operator(&qubit_spec(FRAC_PI_2, 0.0, j)).unwrap();
        let k = op.kraus();
        for seed in 0..10 {
            let rho = random_density(2, seed).unwrap();
            let s0 = rho.bloch().unwrap();
            for (n, st) in iterate(&rho, &k, 50).iter().enumerate() {
                let want = analytic_plus_trajectory(s0, j, n as u32).unwrap();
                let got = st.bloch().unwrap();
                for i in 0..3 {
                    assert!((want.0[i] - got.0[i]).abs() < 1e-10, "J={j} n={n}");
                }
            }
        }
    }
    let s0 = BlochVector([0.1, -0.4, 0.5]);
    assert_eq!(analytic_plus_trajectory(s0, 1.0, 0).unwrap(), s0);
    let one = analytic_plus_trajectory(s0, FRAC_PI_2, 1).unwrap();
    assert!((one.0[0] - 1.0).abs() < 1e-15 && one.0[1].abs() < 1e-16 && one.0[2].abs() < 1e-16);
    assert!(analytic_plus_trajectory(s0, 0.0, 1).is_err());
    assert!(analytic_plus_trajectory(s0, PI, 1).is_err());
}

#[test]
fn catalog_targets_are_fixed_points_with_monotone_fidelity() {
    let mut rng = SplitMix64::new(31);
    for e in stabilizer_catalog() {
        for j in [FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
            let op = make_steering_operator(&qubit_spec(e.theta, e.phi, j)).unwrap();
            let k = op.kraus();
            let n = (80.0 / (j * j)).ceil() as usize;
            for _ in 0..50 {
                let rho = random_density_with(2, &mut rng);
                let fids: Vec<f64> = iterate(&rho, &k, n)
                    .iter()
                    .map(|s| fidelity(s, op.target()).unwrap())
                    .collect();
                assert!(*fids.last().unwrap() >= 1.0 - 1e-8, "{} J={j}", e.label);
                assert!(steering_inequality_holds(&fids).holds);
            }
        }
    }
}

#[test]
fn coherences_decay_at_cos_rate() {
    let mut rng = SplitMix64::new(8);
    for j in [FRAC_PI_8, FRAC_PI_4, 1.3] {
        let op = make_steering_operator(&qubit_spec(FRAC_PI_2, 0.0, j)).unwrap();
        let rho = random_density_with(2, &mut rng);
        for (n, st) in iterate(&rho, &op.kraus(), 40).iter().enumerate() {
            assert!(st.bloch().unwrap().y().abs() <= j.cos().abs().powi(n as i32) + 1e-10);
        }
    }
}

#[test]
fn equal_superposition_coupling_leaves_a_dark_state() {
    // The coupling block has rank one, so the complement direction
    // orthogonal to (2,−1,−1) is untouched by the channel.
    let spec = TargetSpec::new(Target::Qutrit(QutritTarget::equal_superposition()), 1.0).unwrap();
    let op = make_steering_operator(&spec).unwrap();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let dark = Ket(vec![ZERO, c(h, 0.0), c(-h, 0.0)]);
    let rho = DensityState::pure(&dark);
    let out = averaged_step(&rho, &op.kraus()).unwrap();
    assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    assert!(fidelity(&out, op.target()).unwrap() < 1e-15);
}

proptest! {
    #[test]
    fn averaged_step_is_linear(seed in any::<u64>(), alpha in 0.0f64..1.0, j in 0.0f64..3.0) {
        let mut rng = SplitMix64::new(seed);
        let op = make_steering_operator(&qubit_spec(rng.next_f64() * PI, rng.next_f64() * TAU, j)).unwrap();
        let k = op.kraus();
        let r1 = random_density_with(2, &mut rng);
        let r2 = random_density_with(2, &mut rng);
        let mix = DensityState::from_raw(
            &r1.matrix().scale_re(alpha) + &r2.matrix().scale_re(1.0 - alpha), vec![2]).unwrap();
        let lhs = averaged_step(&mix, &k).unwrap();
        let rhs = &averaged_step(&r1, &k).unwrap().matrix().scale_re(alpha)
            + &averaged_step(&r2, &k).unwrap().matrix().scale_re(1.0 - alpha);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-11);
    }

    #[test]
    fn random_qubit_targets_are_reached(theta in 0.0..=PI, phi in 0.0..TAU, seed in any::<u64>()) {
        let j = FRAC_PI_4;
        let op = make_steering_operator(&qubit_spec(theta, phi, j)).unwrap();
        let rho = random_density(2, seed % 1000).unwrap();
        let n = (80.0 / (j * j)).ceil() as usize;
        let states = iterate(&rho, &op.kraus(), n);
        let fids: Vec<f64> = states.iter().map(|s| fidelity(s, op.target()).unwrap()).collect();
        prop_assert!(*fids.last().unwrap() >= 1.0 - 1e-8);
        prop_assert!(steering_inequality_holds(&fids).holds);
    }

    #[test]
    fn unitary_matches_hamiltonian(theta in 0.0..=PI, phi in 0.0..TAU, j in -3.0f64..3.0) {
        let op = make_steering_operator(&qubit_spec(theta, phi, j)).unwrap();
        let u = crate::linalg::expm_i_herm(op.hamiltonian()).unwrap();
        prop_assert!(u.max_abs_diff(op.unitary()) < 1e-11);
        prop_assert!(op.unitary().is_unitary(1e-12));
    }
}
