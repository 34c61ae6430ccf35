use std::vec;
use std::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::rng::SplitMix64;

fn sample_hermitian() -> ComplexMatrix {
    ComplexMatrix::from_rows([
        [c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
        [c(1.0, 1.0), c(-1.0, 0.0), c(0.25, 0.0)],
        [c(0.0, -0.5), c(0.25, 0.0), c(0.5, 0.0)],
    ])
}

/// Truncated Taylor series of exp(−iH), an independent check of the
/// spectral route.
fn expm_taylor(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.dim();
    let a = h.scale(c(0.0, -1.0));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = term.clone();
    for k in 1..60 {
        term = (&term * &a).scale_re(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

#[test]
fn herm_eig_matches_reference_spectrum() {
    let eig = herm_eig(&sample_hermitian()).unwrap();
    let expected = [-1.6325680072478095, 0.4931506145024373, 2.639417392745373];
    for (a, b) in eig.values.iter().zip(expected) {
        assert!((a - b).abs() < 1e-13, "{a} vs {b}");
    }
    assert!(eig.reconstruct().max_abs_diff(&sample_hermitian()) < 1e-13);
    assert!(eig.vectors.is_unitary(1e-13));
}

#[test]
fn herm_eig_handles_degenerate_spectra() {
    // Projector onto a 2-dimensional subspace of C^4: eigenvalues {0,0,1,1}.
    let mut rng = SplitMix64::new(3);
    let u = haar_unitary(4, &mut rng);
    let d = ComplexMatrix::diag(&[ONE, ONE, ZERO, ZERO]);
    let p = &(&u * &d) * &u.adjoint();
    let eig = herm_eig(&p).unwrap();
    for (a, b) in eig.values.iter().zip([0.0, 0.0, 1.0, 1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(eig.vectors.is_unitary(1e-12));
    assert!(eig.reconstruct().max_abs_diff(&p) < 1e-12);
    // Deterministic output for identical input.
    let again = herm_eig(&p).unwrap();
    assert_eq!(eig.vectors, again.vectors);
}

#[test]
fn herm_eig_rejects_non_hermitian() {
    let m = ComplexMatrix::from_real([[1.0, 2.0], [0.0, 1.0]]);
    assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
}

#[test]
fn expm_matches_taylor_series() {
    let h = sample_hermitian();
    let u = expm_i_herm(&h).unwrap();
    assert!(u.max_abs_diff(&expm_taylor(&h)) < 1e-12);
    assert!(u.is_unitary(1e-12));
}

#[test]
fn expm_of_pauli_x_is_rotation() {
    let x = ComplexMatrix::from_real([[0.0, 1.0], [1.0, 0.0]]);
    let t = 0.37;
    let u = expm_i_herm(&x.scale_re(t)).unwrap();
    let expected = ComplexMatrix::from_rows([
        [c(t.cos(), 0.0), c(0.0, -t.sin())],
        [c(0.0, -t.sin()), c(t.cos(), 0.0)],
    ]);
    assert!(u.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn general_eigenvalues_match_reference() {
    let b = ComplexMatrix::from_rows([
        [c(1.0, 0.0), c(2.0, 0.0), ZERO, c(0.0, 1.0)],
        [c(0.5, 0.0), c(0.0, -1.0), c(3.0, 0.0), ZERO],
        [ONE, ONE, ONE, ONE],
        [ZERO, c(0.0, 2.0), c(-1.0, 0.0), c(0.5, 0.0)],
    ]);
    let mut ev = eigenvalues(&b).unwrap();
    ev.sort_by(|x, y| x.re.total_cmp(&y.re));
    let expected = [
        c(-1.0399717626796845, 0.5558112759508294),
        c(-0.39319782536660386, -1.592488870660551),
        c(1.2125025650817671, 0.09808124712902394),
        c(2.7206670229645225, -0.061403652419304205),
    ];
    for (a, b) in ev.iter().zip(expected) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn general_eigenvalues_of_degenerate_unitary() {
    let mut rng = SplitMix64::new(11);
    let v = haar_unitary(4, &mut rng);
    let phases = [0.3, 0.3, -1.2, 2.9];
    let d: Vec<C64> = phases.iter().map(|&p| cis(p)).collect();
    let u = &(&v * &ComplexMatrix::diag(&d)) * &v.adjoint();
    let ev = eigenvalues(&u).unwrap();
    for &p in &phases {
        assert!(ev.iter().any(|z| (z - cis(p)).norm() < 1e-10));
    }
}

#[test]
fn lu_solves_and_computes_determinant() {
    let b = ComplexMatrix::from_rows([
        [c(1.0, 0.0), c(2.0, 0.0), ZERO, c(0.0, 1.0)],
        [c(0.5, 0.0), c(0.0, -1.0), c(3.0, 0.0), ZERO],
        [ONE, ONE, ONE, ONE],
        [ZERO, c(0.0, 2.0), c(-1.0, 0.0), c(0.5, 0.0)],
    ]);
    let lu = Lu::new(&b).unwrap();
    assert!((lu.det() - c(4.0, 5.0)).norm() < 1e-13);
    let inv = lu.inverse();
    assert!((&b * &inv).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    let singular = ComplexMatrix::from_real([[1.0, 2.0], [2.0, 4.0]]);
    assert!(matches!(Lu::new(&singular), Err(Error::Singular(_))));
}

#[test]
fn partial_trace_of_product_state() {
    let mut rng = SplitMix64::new(8);
    let a = random_hermitian(2, &mut rng);
    let b = random_hermitian(3, &mut rng);
    let ab = kron(&a, &b);
    let ta = partial_trace(&ab, &[2, 3], 0).unwrap();
    let tb = partial_trace(&ab, &[2, 3], 1).unwrap();
    assert!(ta.max_abs_diff(&a.scale(b.trace())) < 1e-14);
    assert!(tb.max_abs_diff(&b.scale(a.trace())) < 1e-14);
    assert!(matches!(
        partial_trace(&ab, &[2, 2], 0),
        Err(Error::SubsystemMismatch { .. })
    ));
}

#[test]
fn embed_agrees_with_kron() {
    let mut rng = SplitMix64::new(21);
    let g = haar_unitary(3, &mut rng);
    let e = embed(&g, &[1], &[2, 3]).unwrap();
    assert!(e.max_abs_diff(&kron(&ComplexMatrix::identity(2), &g)) < 1e-15);
    let two = haar_unitary(4, &mut rng);
    let swap = ComplexMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let reversed = embed(&two, &[1, 0], &[2, 2]).unwrap();
    assert!(reversed.max_abs_diff(&swap.sandwich(&two)) < 1e-14);
}

#[test]
fn real_symmetric_eig_returns_rotation() {
    let m = [2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 2.0];
    let (vals, vecs) = real_symmetric_eig(&m, 3).unwrap();
    for (a, b) in vals.iter().zip([1.0, 2.0, 3.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    let cm = ComplexMatrix::from_fn(3, |i, j| c(vecs[i * 3 + j], 0.0));
    assert!((Lu::new(&cm).unwrap().det() - ONE).norm() < 1e-13);
}

proptest! {
    #[test]
    fn herm_eig_reconstructs(seed in any::<u64>(), dim in 1usize..=9) {
        let mut rng = SplitMix64::new(seed);
        let h = random_hermitian(dim, &mut rng);
        let eig = herm_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < TOL.reconstruction);
        prop_assert!(eig.vectors.is_unitary(TOL.reconstruction));
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn expm_is_unitary(seed in any::<u64>(), dim in 1usize..=9, t in -5.0f64..5.0) {
        let mut rng = SplitMix64::new(seed);
        let h = random_hermitian(dim, &mut rng).scale_re(t);
        let u = expm_i_herm(&h).unwrap();
        prop_assert!(u.is_unitary(TOL.unitarity * 10.0));
    }

    #[test]
    fn phase_invariant_distance_ignores_global_phase(seed in any::<u64>(), phi in 0.0f64..6.3) {
        let mut rng = SplitMix64::new(seed);
        let u = haar_unitary(4, &mut rng);
        let v = u.scale(cis(phi));
        prop_assert!(phase_invariant_distance(&u, &v).unwrap() < 1e-12);
        let w = haar_unitary(4, &mut rng);
        prop_assert!(phase_invariant_distance(&u, &w).unwrap() > 1e-3);
    }

    #[test]
    fn unitary_eigenvalues_on_unit_circle(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = SplitMix64::new(seed);
        let u = haar_unitary(dim, &mut rng);
        let ev = eigenvalues(&u).unwrap();
        prop_assert_eq!(ev.len(), dim);
        for z in &ev {
            prop_assert!((z.norm() - 1.0).abs() < 1e-10);
        }
        let prod = ev.iter().fold(ONE, |a, b| a * b);
        prop_assert!((prod - Lu::new(&u).unwrap().det()).norm() < 1e-10);
    }
}

#[test]
fn kron_dimensions_and_ket_ops() {
    let k = Ket(vec![c(0.0, 1.0), ZERO]);
    let kc = k.canonical_phase();
    assert!((kc[0] - ONE).norm() < 1e-15 && kc[1] == ZERO);
    let kk = k.kron(&Ket::basis(3, 2));
    assert_eq!(kk.len(), 6);
    assert_eq!(kk[2], c(0.0, 1.0));
    let all = kron_all(&[ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
    assert_eq!(all, ComplexMatrix::identity(6));
}

fn pauli(k: usize) -> ComplexMatrix {
    crate::pauli::Pauli::from_index(k).matrix()
}

#[test]
fn kron_examples() {
    assert_eq!(kron(&pauli(0), &pauli(0)), ComplexMatrix::identity(4));
    let xz = kron(&pauli(1), &pauli(3));
    let mut expected = ComplexMatrix::zeros(4);
    expected[(0, 2)] = ONE;
    expected[(1, 3)] = -ONE;
    expected[(2, 0)] = ONE;
    expected[(3, 1)] = -ONE;
    assert_eq!(xz, expected);
    let one = Ket::basis(2, 1).projector();
    let pi1 = kron(&one, &ComplexMatrix::identity(3));
    assert_eq!(pi1, ComplexMatrix::diag(&[ZERO, ZERO, ZERO, ONE, ONE, ONE]));
}

#[test]
fn kron_is_associative_and_bilinear() {
    let mut rng = SplitMix64::new(77);
    let (a, b, d) = (ginibre(2, &mut rng), ginibre(3, &mut rng), ginibre(2, &mut rng));
    let lhs = kron(&kron(&a, &b), &d);
    let rhs = kron(&a, &kron(&b, &d));
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    let a2 = ginibre(2, &mut rng);
    let s = c(0.3, -1.1);
    let lin = kron(&(&a + &a2.scale(s)), &b);
    let sep = &kron(&a, &b) + &kron(&a2, &b).scale(s);
    assert!(lin.max_abs_diff(&sep) < 1e-12);
}

#[test]
fn partial_trace_examples() {
    let zz = Ket::basis(4, 0).projector();
    assert_eq!(partial_trace(&zz, &[2, 2], 1).unwrap(), Ket::basis(2, 0).projector());
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let bell = Ket(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]).projector();
    let red = partial_trace(&bell, &[2, 2], 1).unwrap();
    assert!(red.max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-15);
}

#[test]
fn expm_examples() {
    assert_eq!(expm_i_herm(&ComplexMatrix::zeros(3)).unwrap(), ComplexMatrix::identity(3));
    let u = expm_i_herm(&pauli(1).scale_re(core::f64::consts::FRAC_PI_2)).unwrap();
    assert!(u.max_abs_diff(&pauli(1).scale(c(0.0, -1.0))) < 1e-15);
    let mut rng = SplitMix64::new(4);
    let h = random_hermitian(6, &mut rng);
    let prod = &expm_i_herm(&h).unwrap() * &expm_i_herm(&h.scale_re(-1.0)).unwrap();
    assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-11);
}

#[test]
fn herm_eig_examples() {
    let d = ComplexMatrix::diag(&[c(3.0, 0.0), ONE, c(2.0, 0.0)]);
    let eig = herm_eig(&d).unwrap();
    assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    let perm = ComplexMatrix::from_real([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
    assert_eq!(eig.vectors, perm);

    let eig = herm_eig(&pauli(1)).unwrap();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);
    let expected = ComplexMatrix::from_real([[h, h], [-h, h]]);
    assert!(eig.vectors.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn herm_eig_reconstructs_ten_thousand_matrices() {
    for seed in 0..10_000u64 {
        let mut rng = SplitMix64::new(seed);
        let dim = 2 + (seed % 8) as usize;
        let h = random_hermitian(dim, &mut rng);
        let eig = herm_eig(&h).unwrap();
        assert!(eig.reconstruct().max_abs_diff(&h) <= TOL.reconstruction, "seed {seed}");
        assert!(eig.vectors.is_unitary(TOL.reconstruction), "seed {seed}");
    }
}

#[test]
fn phase_invariant_distance_examples() {
    let mut rng = SplitMix64::new(1);
    let u = haar_unitary(4, &mut rng);
    assert!(phase_invariant_distance(&u, &u).unwrap() < 1e-15);
    let v = u.scale(cis(core::f64::consts::PI / 7.0));
    assert!(phase_invariant_distance(&u, &v).unwrap() < 1e-15);
    let cnot = ComplexMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]);
    let d = phase_invariant_distance(&ComplexMatrix::identity(4), &cnot).unwrap();
    assert!((d - 0.5).abs() < 1e-15);
    assert!(phase_invariant_distance(&u, &ComplexMatrix::identity(2)).is_err());
}
