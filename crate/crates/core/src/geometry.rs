//! Cartan (KAK) decomposition of two-qubit unitaries and Weyl-chamber
//! coordinates.
//!
//! Any `U ∈ U(4)` factors as
//!
//! ```text
//! U = e^{iγ} (a₁ ⊗ b₁) · A(c) · (a₂ ⊗ b₂),   A(c) = exp(i/2 (c₁XX + c₂YY + c₃ZZ))
//! ```
//!
//! Coordinates are reported in the chamber `c₁ ≥ c₂ ≥ c₃ ≥ 0`, `c₁ + c₂ ≤ π`
//! (tetrahedron with vertices `O = 0`, `A₁ = (π,0,0)`, `A₂ = (π/2,π/2,0)`,
//! `A₃ = (π/2,π/2,π/2)`). On the base `c₃ = 0` the points `(c₁,c₂,0)` and
//! `(π−c₁,c₂,0)` coincide; the representative with `c₁ ≤ π/2` is chosen.
//! CNOT and CZ sit at `L = (π/2,0,0)`, SWAP at `A₃`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c, cis, eigenvalues, kron, real_symmetric_eig, ComplexMatrix, C64, I, ONE, ZERO};
use crate::pauli::Pauli;
use crate::{Error, Result};

/// Coordinates closer than this to a chamber face are snapped onto it.
const SNAP: f64 = 1e-11;

/// Tolerance used by [`locally_equivalent`].
pub const EQUIVALENCE_TOL: f64 = 1e-8;

/// Factorization `U = e^{iγ}(k1a ⊗ k1b)·A(c)·(k2a ⊗ k2b)` with `SU(2)` locals.
#[derive(Clone, Debug, PartialEq)]
pub struct KakDecomposition {
    /// Left (later in time) locals, wire 0 then wire 1.
    pub k1_local: [ComplexMatrix; 2],
    /// Right (earlier in time) locals.
    pub k2_local: [ComplexMatrix; 2],
    pub c: [f64; 3],
    pub global_phase: f64,
}

impl KakDecomposition {
    pub fn reassemble(&self) -> ComplexMatrix {
        let k1 = kron(&self.k1_local[0], &self.k1_local[1]);
        let k2 = kron(&self.k2_local[0], &self.k2_local[1]);
        (&(&k1 * &interaction(self.c)) * &k2).scale(cis(self.global_phase))
    }
}

/// `A(c) = exp(i/2 (c₁XX + c₂YY + c₃ZZ))`, built from its magic-basis spectrum.
pub fn interaction(c: [f64; 3]) -> ComplexMatrix {
    let b = magic_basis();
    let phases: Vec<C64> = SIGNS.iter().map(|s| cis((s[0] * c[0] + s[1] * c[1] + s[2] * c[2]) / 2.0)).collect();
    &(&b * &ComplexMatrix::diag(&phases)) * &b.adjoint()
}

/// Columns `(|00⟩+|11⟩)/√2, i(|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2, i(|00⟩−|11⟩)/√2`.
pub fn magic_basis() -> ComplexMatrix {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let ih = c(0.0, FRAC_1_SQRT_2);
    ComplexMatrix::from_rows([[h, ZERO, ZERO, ih], [ZERO, ih, h, ZERO], [ZERO, ih, -h, ZERO], [h, ZERO, ZERO, -ih]])
}

/// Eigenvalue signs of `(XX, YY, ZZ)` on the magic-basis columns.
const SIGNS: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0], [-1.0, 1.0, 1.0]];

fn check_two_qubit(u: &ComplexMatrix) -> Result<()> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    let err = u.unitarity_error();
    if err > 1e-10 {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

/// `U / det(U)^{1/4}`, together with the removed phase.
fn to_special(u: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let det = crate::linalg::Lu::new(u)?.det();
    let phase = det.arg() / 4.0;
    Ok((u.scale(cis(-phase)), phase))
}

/// Coordinates `c` from magic-basis eigenphases `λ_k` with `Σλ_k ≡ 0 (mod 2π)`.
fn coords_from_phases(l: &[f64; 4]) -> [f64; 3] {
    [
        (l[0] + l[1] - l[2] - l[3]) / 2.0,
        (-l[0] + l[1] - l[2] + l[3]) / 2.0,
        (l[0] - l[1] - l[2] + l[3]) / 2.0,
    ]
}

/// Symmetry moves on the interaction coordinates, mirrored on the locals
/// when they are tracked.
trait Frame {
    /// `c_k += nπ`.
    fn shift(&mut self, k: usize, n: f64);
    /// Negate `c_i` and `c_j`.
    fn flip(&mut self, i: usize, j: usize);
    /// Exchange `c_i` and `c_j`.
    fn swap(&mut self, i: usize, j: usize);
    fn coords(&self) -> [f64; 3];
    fn set(&mut self, k: usize, v: f64);
}

struct Bare([f64; 3]);

impl Frame for Bare {
    fn shift(&mut self, k: usize, n: f64) {
        self.0[k] += n * PI;
    }
    fn flip(&mut self, i: usize, j: usize) {
        self.0[i] = -self.0[i];
        self.0[j] = -self.0[j];
    }
    fn swap(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }
    fn coords(&self) -> [f64; 3] {
        self.0
    }
    fn set(&mut self, k: usize, v: f64) {
        self.0[k] = v;
    }
}

/// Coordinates with the surrounding locals: `U = k1 · A(c) · k2`.
struct Tracked {
    c: [f64; 3],
    k1: ComplexMatrix,
    k2: ComplexMatrix,
}

fn axis(k: usize) -> ComplexMatrix {
    [Pauli::X, Pauli::Y, Pauli::Z][k].matrix()
}

impl Frame for Tracked {
    fn shift(&mut self, k: usize, n: f64) {
        // A(c) = A(c + nπ e_k) · (iσσ)^{−n}; (iσσ)^{-1} = −iσσ.
        let s = axis(k);
        let ss = kron(&s, &s);
        let m = n as i64;
        let factor = if m.rem_euclid(2) == 0 { ComplexMatrix::identity(4) } else { ss };
        let phase = match m.rem_euclid(4) {
            0 => ONE,
            1 => -I,
            2 => -ONE,
            _ => I,
        };
        self.k2 = (&factor * &self.k2).scale(phase);
        self.c[k] += n * PI;
    }
    fn flip(&mut self, i: usize, j: usize) {
        let m = kron(&axis(3 - i - j), &ComplexMatrix::identity(2));
        self.k1 = &self.k1 * &m;
        self.k2 = &m * &self.k2;
        self.c[i] = -self.c[i];
        self.c[j] = -self.c[j];
    }
    fn swap(&mut self, i: usize, j: usize) {
        let v = (&axis(i) + &axis(j)).scale_re(FRAC_1_SQRT_2);
        let vv = kron(&v, &v);
        self.k1 = &self.k1 * &vv;
        self.k2 = &vv * &self.k2;
        self.c.swap(i, j);
    }
    fn coords(&self) -> [f64; 3] {
        self.c
    }
    fn set(&mut self, k: usize, v: f64) {
        self.c[k] = v;
    }
}

fn canonicalize_frame<F: Frame>(f: &mut F) {
    // Fold each coordinate into (−π/2, π/2].
    for k in 0..3 {
        let x = f.coords()[k];
        let n = ((FRAC_PI_2 - x) / PI).floor();
        if n != 0.0 {
            f.shift(k, n);
        }
        let x = f.coords()[k];
        if x <= -FRAC_PI_2 + SNAP {
            f.shift(k, 1.0);
        }
    }
    // Sort by magnitude, descending.
    for _ in 0..3 {
        for k in 0..2 {
            let c = f.coords();
            if c[k].abs() < c[k + 1].abs() {
                f.swap(k, k + 1);
            }
        }
    }
    if f.coords()[0] < 0.0 {
        f.flip(0, 2);
    }
    if f.coords()[1] < 0.0 {
        f.flip(1, 2);
    }
    for k in 0..3 {
        if f.coords()[k].abs() < SNAP {
            f.set(k, 0.0);
        }
    }
    let c = f.coords();
    if c[2] < 0.0 {
        // (c₁, c₂, c₃) ~ (π − c₁, c₂, −c₃).
        f.shift(0, -1.0);
        f.flip(0, 2);
    }
    let c = f.coords();
    if (c[0] - FRAC_PI_2).abs() < SNAP {
        f.set(0, FRAC_PI_2);
    }
    for k in 1..3 {
        let c = f.coords();
        if (c[k] - c[k - 1]).abs() < SNAP {
            f.set(k, c[k - 1]);
        }
    }
}

/// Maps arbitrary interaction coordinates to the chamber representative.
pub fn canonicalize(c: [f64; 3]) -> [f64; 3] {
    let mut f = Bare(c);
    canonicalize_frame(&mut f);
    f.0
}

/// Distance between chamber points, honoring the base identification
/// `(c₁,c₂,0) ~ (π−c₁,c₂,0)`.
pub fn chamber_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = |p: [f64; 3], q: [f64; 3]| (0..3).map(|k| (p[k] - q[k]).abs()).fold(0.0, f64::max);
    let direct = d(a, b);
    if a[2].abs() < EQUIVALENCE_TOL && b[2].abs() < EQUIVALENCE_TOL {
        direct.min(d(a, [PI - b[0], b[1], b[2]]))
    } else {
        direct
    }
}

/// Splits `k = a ⊗ b` into `SU(2)` factors, returning the leftover phase.
fn split_local(k: &ComplexMatrix) -> ([ComplexMatrix; 2], f64) {
    let mut best = (0, 0, -1.0);
    for i in 0..2 {
        for j in 0..2 {
            let w: f64 = (0..4).map(|pq| k[(2 * (pq / 2) + i, 2 * (pq % 2) + j)].norm_sqr()).sum();
            if w > best.2 {
                best = (i, j, w);
            }
        }
    }
    let (i0, j0, _) = best;
    let a = ComplexMatrix::from_fn(2, |p, q| k[(2 * p + i0, 2 * q + j0)]);
    let a = to_su2(&a).0;
    let b = ComplexMatrix::from_fn(2, |i, j| {
        let mut s = ZERO;
        for p in 0..2 {
            for q in 0..2 {
                s += a[(p, q)].conj() * k[(2 * p + i, 2 * q + j)];
            }
        }
        s / 2.0
    });
    let (b, phase) = to_su2(&b);
    ([a, b], phase)
}

/// `m = e^{iα} s` with `s ∈ SU(2)`.
fn to_su2(m: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = det.arg() / 2.0;
    let scale = det.norm().sqrt().max(f64::MIN_POSITIVE);
    (m.scale(cis(-alpha) / scale), alpha)
}

/// Cartan decomposition with chamber-canonical coordinates.
pub fn kak_decompose(u: &ComplexMatrix) -> Result<KakDecomposition> {
    check_two_qubit(u)?;
    let (su, _) = to_special(u)?;
    let b = magic_basis();
    let ub = &(&b.adjoint() * &su) * &b;
    let m = &ub.transpose() * &ub;

    // Re(M) and Im(M) commute; a generic combination shares their eigenbasis.
    let mut p = Vec::new();
    let mut found = false;
    for (wa, wb) in [(1.0, 0.4142135623730951), (0.7390851332151607, 1.0), (1.0, -2.75), (0.3125, 0.5772156649015329)] {
        let comb: Vec<f64> = m.as_slice().iter().map(|z| wa * z.re + wb * z.im).collect();
        let (_, vecs) = real_symmetric_eig(&comb, 4)?;
        let pm = ComplexMatrix::from_fn(4, |i, j| c(vecs[i * 4 + j], 0.0));
        let d = &(&pm.transpose() * &m) * &pm;
        let off = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| d[(i, j)].norm()).fold(0.0, f64::max);
        if off < 1e-9 {
            p = vecs;
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::NoConvergence);
    }
    let pm = ComplexMatrix::from_fn(4, |i, j| c(p[i * 4 + j], 0.0));
    let d = &(&pm.transpose() * &m) * &pm;
    let mut lambda = [0.0; 4];
    for k in 0..4 {
        lambda[k] = d[(k, k)].arg() / 2.0;
    }
    // det(K1) = 1 requires Σλ ≡ 0 (mod 2π).
    let total: f64 = lambda.iter().sum();
    let wraps = (total / PI).round() as i64;
    if wraps.rem_euclid(2) != 0 {
        lambda[0] += PI;
    }
    let half = ComplexMatrix::diag(&lambda.map(|l| cis(-l)));
    let k1b = &(&ub * &pm) * &half;
    let k1 = &(&b * &k1b) * &b.adjoint();
    let k2 = &(&b * &pm.transpose()) * &b.adjoint();

    let mut frame = Tracked {
        c: coords_from_phases(&lambda),
        k1,
        k2,
    };
    canonicalize_frame(&mut frame);
    let (k1_local, _) = split_local(&frame.k1);
    let (k2_local, _) = split_local(&frame.k2);
    let mut out = KakDecomposition {
        k1_local,
        k2_local,
        c: frame.c,
        global_phase: 0.0,
    };
    out.global_phase = out.reassemble().inner(u).arg();
    Ok(out)
}

/// Chamber coordinates from the spectrum of `Mᵀ M` in the magic basis.
pub fn weyl_coordinates(u: &ComplexMatrix) -> Result<[f64; 3]> {
    check_two_qubit(u)?;
    let (su, _) = to_special(u)?;
    let b = magic_basis();
    let ub = &(&b.adjoint() * &su) * &b;
    let m = &ub.transpose() * &ub;
    let ev = eigenvalues(&m)?;
    let mut lambda = [0.0; 4];
    for (k, z) in ev.iter().enumerate() {
        lambda[k] = z.arg() / 2.0;
    }
    let total: f64 = lambda.iter().sum();
    if ((total / PI).round() as i64).rem_euclid(2) != 0 {
        lambda[0] += PI;
    }
    // Eigenvalue order is arbitrary; the permutation group of the four
    // phases acts on c by chamber symmetries, so canonicalization absorbs it.
    Ok(canonicalize(coords_from_phases(&lambda)))
}

/// Whether `u` and `v` differ only by local gates and a global phase.
pub fn locally_equivalent(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<bool> {
    let a = weyl_coordinates(u)?;
    let b = weyl_coordinates(v)?;
    Ok(chamber_distance(a, b) <= EQUIVALENCE_TOL)
}
