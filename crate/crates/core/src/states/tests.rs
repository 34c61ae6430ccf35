use std::vec;

use proptest::prelude::*;

use super::*;
use crate::linalg::ONE;

const EPS: f64 = 1e-14;

#[test]
fn qubit_ket_examples() {
    let zero = QubitTarget::new(0.0, 0.0).unwrap().ket();
    assert_eq!(zero, Ket::basis(2, 0));
    let plus = QubitTarget::new(FRAC_PI_2, 0.0).unwrap().ket();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    assert!((plus[0] - c(h, 0.0)).norm() < EPS && (plus[1] - c(h, 0.0)).norm() < EPS);
    // |1⟩ with a phase is canonicalized to |1⟩.
    let one = QubitTarget::new(PI, 1.0).unwrap().ket();
    assert!(one[0].norm() < 1e-16 && (one[1] - ONE).norm() < EPS);
}

#[test]
fn qubit_ranges_are_enforced() {
    assert!(QubitTarget::new(-0.1, 0.0).is_err());
    assert!(QubitTarget::new(PI + 1e-9, 0.0).is_err());
    assert!(QubitTarget::new(0.0, TAU).is_err());
    assert!(QubitTarget::new(f64::NAN, 0.0).is_err());
    assert!(QubitTarget::new(PI, TAU - 1e-9).is_ok());
}

#[test]
fn qutrit_equal_superposition_from_angles() {
    let xi = 2.0 * 2f64.sqrt().atan();
    let q = QutritTarget::new(xi, FRAC_PI_2, 0.0, 0.0).unwrap();
    let r = 1.0 / 3f64.sqrt();
    for k in 0..3 {
        assert!((q.ket()[k] - c(r, 0.0)).norm() < EPS);
    }
    let exact = QutritTarget::equal_superposition();
    assert!(exact.is_equal_superposition());
    assert!((exact.ket().norm() - 1.0).abs() < 1e-15);
    assert_eq!(exact.angles()[0], xi);
}

#[test]
fn qutrit_phase_two_pi_wraps_to_zero() {
    let a = QutritTarget::new(1.0, 2.0, TAU, TAU).unwrap();
    let b = QutritTarget::new(1.0, 2.0, 0.0, 0.0).unwrap();
    assert_eq!(a, b);
    assert!(QutritTarget::new(1.0, 2.0, TAU + 1e-6, 0.0).is_err());
}

#[test]
fn qutrit_canonical_phase_when_first_amplitude_vanishes() {
    // ξ = π, θ = π → only |1⟩ with phase φ01.
    let q = QutritTarget::new(PI, PI, 2.0, 0.0).unwrap();
    let k = q.ket();
    assert!(k[1].im.abs() < EPS && k[1].re > 0.0);
}

#[test]
fn bloch_examples() {
    let mixed = DensityState::maximally_mixed(2);
    assert_eq!(mixed.bloch().unwrap().0, [0.0, 0.0, 0.0]);
    let plus = DensityState::pure(&QubitTarget::new(FRAC_PI_2, 0.0).unwrap().ket());
    let s = plus.bloch().unwrap().0;
    assert!((s[0] - 1.0).abs() < EPS && s[1].abs() < EPS && s[2].abs() < EPS);
    let minus_i = DensityState::pure(&QubitTarget::new(FRAC_PI_2, 3.0 * FRAC_PI_2).unwrap().ket());
    let s = minus_i.bloch().unwrap().0;
    assert!(s[0].abs() < EPS && (s[1] + 1.0).abs() < EPS && s[2].abs() < EPS);
    assert!(DensityState::maximally_mixed(3).bloch().is_err());
}

#[test]
fn gellmann_examples() {
    let n = DensityState::maximally_mixed(3).gellmann().unwrap();
    assert!(n.0.iter().all(|x| x.abs() < 1e-16));
    let zero = DensityState::pure(&Ket::basis(3, 0)).gellmann().unwrap();
    let mut expected = [0.0; 8];
    expected[2] = 0.5;
    expected[7] = 1.0 / (2.0 * 3f64.sqrt());
    for k in 0..8 {
        assert!((zero.0[k] - expected[k]).abs() < 1e-15);
    }
    let eq = QutritTarget::equal_superposition().ket();
    let back = DensityState::from_gellmann(DensityState::pure(&eq).gellmann().unwrap()).unwrap();
    assert!((fidelity(&back, &eq).unwrap() - 1.0).abs() < 1e-12);
    assert!(DensityState::maximally_mixed(2).gellmann().is_err());
}

#[test]
fn gell_mann_matrices_are_orthonormal() {
    let l = gell_mann();
    for a in 0..8 {
        assert!(l[a].is_hermitian(0.0));
        assert!(l[a].trace().norm() < 1e-15);
        for b in 0..8 {
            let g = l[a].inner(&l[b]);
            let want = if a == b { 2.0 } else { 0.0 };
            assert!((g - c(want, 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn catalog_bloch_vectors_match_kets() {
    let cat = stabilizer_catalog();
    assert_eq!(cat.len(), 6);
    for e in &cat {
        let rho = DensityState::from_bloch(e.bloch).unwrap();
        let f = fidelity(&rho, &e.target().ket()).unwrap();
        assert!((f - 1.0).abs() < 1e-12, "{}", e.label);
        let b = e.target().bloch();
        for k in 0..3 {
            assert!((b.0[k] - e.bloch.0[k]).abs() < 1e-15);
        }
    }
}

#[test]
fn fidelity_examples() {
    let plus = QubitTarget::new(FRAC_PI_2, 0.0).unwrap().ket();
    assert!((fidelity(&DensityState::pure(&plus), &plus).unwrap() - 1.0).abs() < 1e-15);
    assert!((fidelity(&DensityState::maximally_mixed(2), &plus).unwrap() - 0.5).abs() < 1e-15);
    let eq = QutritTarget::equal_superposition().ket();
    assert!((fidelity(&DensityState::maximally_mixed(3), &eq).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(fidelity(&DensityState::maximally_mixed(3), &plus).is_err());
}

#[test]
fn random_density_is_deterministic_and_physical() {
    assert_eq!(random_density(3, 42).unwrap(), random_density(3, 42).unwrap());
    assert_ne!(random_density(3, 42).unwrap(), random_density(3, 43).unwrap());
    assert!(random_density(5, 1).is_err());
    let mut total = 0.0;
    for seed in 0..10_000 {
        let rho = random_density(2, seed).unwrap();
        let ev = herm_eig(rho.matrix()).unwrap().values;
        assert!(ev[0] >= -1e-12);
        let p = rho.purity();
        assert!(p >= 0.5 - 1e-12 && p <= 1.0 + 1e-12);
        total += rho.bloch().unwrap().norm();
    }
    let mean = total / 10_000.0;
    assert!(mean > 0.0 && mean < 1.0, "{mean}");
    for dim in [3, 4, 6] {
        let rho = random_density(dim, 9).unwrap();
        rho.validate().unwrap();
        let p = rho.purity();
        assert!(p >= 1.0 / dim as f64 - 1e-12 && p <= 1.0 + 1e-12);
    }
}

#[test]
fn bloch_and_gellmann_round_trip_ten_thousand_states() {
    for seed in 0..10_000 {
        let q = random_density(2, seed).unwrap();
        let back = DensityState::from_bloch(q.bloch().unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(q.matrix()) < 1e-12);
        let t = random_density(3, seed).unwrap();
        let back = DensityState::from_gellmann(t.gellmann().unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(t.matrix()) < 1e-12);
    }
}

#[test]
fn density_state_validation() {
    let bad = ComplexMatrix::diag(&[c(1.2, 0.0), c(-0.2, 0.0)]);
    assert!(matches!(DensityState::single(bad), Err(Error::InvalidState(_))));
    let trace = ComplexMatrix::diag(&[c(0.7, 0.0), c(0.7, 0.0)]);
    assert!(DensityState::single(trace).is_err());
    let nonherm = ComplexMatrix::from_rows([[c(0.5, 0.0), c(0.1, 0.0)], [ZERO, c(0.5, 0.0)]]);
    assert!(matches!(DensityState::single(nonherm), Err(Error::NotHermitian(_))));
    assert!(matches!(
        DensityState::new(ComplexMatrix::identity(4).scale_re(0.25), vec![3]),
        Err(Error::SubsystemMismatch { .. })
    ));
    let joint = DensityState::maximally_mixed(2).tensor(&DensityState::maximally_mixed(3));
    assert_eq!(joint.dims(), &[2, 3]);
    assert_eq!(joint.partial_trace(1).unwrap(), DensityState::maximally_mixed(3));
}

#[test]
fn target_parsing() {
    for (label, bloch) in [("+", [1.0, 0.0, 0.0]), ("\u{2212}i", [0.0, -1.0, 0.0]), ("1", [0.0, 0.0, -1.0])] {
        match Target::parse(label).unwrap() {
            Target::Qubit(q) => {
                for k in 0..3 {
                    assert!((q.bloch().0[k] - bloch[k]).abs() < 1e-15);
                }
            }
            _ => panic!("expected qubit"),
        }
    }
    assert_eq!(Target::parse("qutrit-equal").unwrap().label(), "qutrit-equal");
    assert_eq!(Target::parse("1.5707963267948966,0").unwrap().label(), "+");
    assert_eq!(Target::parse("0.3,0.2").unwrap().label(), "qubit(0.3,0.2)");
    assert_eq!(Target::parse("1,1,0,0").unwrap().dim(), 3);
    assert!(Target::parse("bogus").is_err());
    assert!(Target::parse("4,0").is_err());
}

proptest! {
    #[test]
    fn qubit_kets_are_normalized(theta in 0.0..=PI, phi in 0.0..TAU) {
        let k = QubitTarget::new(theta, phi).unwrap().ket();
        prop_assert!((k.norm() - 1.0).abs() < EPS);
        prop_assert!(k[0].im == 0.0 && k[0].re >= 0.0);
    }

    #[test]
    fn qutrit_kets_are_normalized(xi in 0.0..=PI, theta in 0.0..=PI, p1 in 0.0..=TAU, p2 in 0.0..=TAU) {
        let k = QutritTarget::new(xi, theta, p1, p2).unwrap().ket();
        prop_assert!((k.norm() - 1.0).abs() < EPS);
    }

    #[test]
    fn bloch_of_pure_target_matches_angles(theta in 0.0..=PI, phi in 0.0..TAU) {
        let q = QubitTarget::new(theta, phi).unwrap();
        let s = DensityState::pure(&q.ket()).bloch().unwrap();
        for k in 0..3 {
            prop_assert!((s.0[k] - q.bloch().0[k]).abs() < 1e-14);
        }
    }
}
