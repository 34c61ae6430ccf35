//! Target parametrizations, density states and their coordinates.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c, cis, ginibre, herm_eig, kron, partial_trace, ComplexMatrix, Ket, C64, TOL, ZERO};
use crate::pauli::Pauli;
use crate::rng::SplitMix64;
use crate::{Error, Result};

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, closed: bool) -> Result<()> {
    let ok = value.is_finite() && value >= lo && if closed { value <= hi } else { value < hi };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: match (closed, hi == PI) {
                (true, true) => "[0, π]",
                (true, false) => "[0, 2π]",
                (false, _) => "[0, 2π)",
            },
        })
    }
}

/// Pure qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QubitTarget {
    theta: f64,
    phi: f64,
}

impl QubitTarget {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI, true)?;
        check_range("phi", phi, 0.0, TAU, false)?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket(&self) -> Ket {
        let (s, co) = (self.theta / 2.0).sin_cos();
        Ket(vec![c(co, 0.0), cis(self.phi) * s]).canonical_phase()
    }

    pub fn bloch(&self) -> BlochVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        BlochVector([st * cp, st * sp, ct])
    }
}

/// Pure qutrit state
/// `sin(ξ/2)cos(θ/2)|0⟩ + e^{iφ01} sin(ξ/2)sin(θ/2)|1⟩ + e^{iφ02} cos(ξ/2)|2⟩`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QutritTarget {
    xi: f64,
    theta: f64,
    phi01: f64,
    phi02: f64,
    amplitudes: [C64; 3],
}

impl QutritTarget {
    /// `xi, theta ∈ [0, π]`; phases in the closed interval `[0, 2π]`, with
    /// `2π` stored as `0`.
    pub fn new(xi: f64, theta: f64, phi01: f64, phi02: f64) -> Result<Self> {
        check_range("xi", xi, 0.0, PI, true)?;
        check_range("theta", theta, 0.0, PI, true)?;
        check_range("phi01", phi01, 0.0, TAU, true)?;
        check_range("phi02", phi02, 0.0, TAU, true)?;
        let wrap = |p: f64| if p == TAU { 0.0 } else { p };
        let (phi01, phi02) = (wrap(phi01), wrap(phi02));
        let (sx, cx) = (xi / 2.0).sin_cos();
        let (st, ct) = (theta / 2.0).sin_cos();
        let ket = Ket(vec![c(sx * ct, 0.0), cis(phi01) * (sx * st), cis(phi02) * cx]).canonical_phase();
        Ok(Self {
            xi,
            theta,
            phi01,
            phi02,
            amplitudes: [ket[0], ket[1], ket[2]],
        })
    }

    /// `(|0⟩ + |1⟩ + |2⟩)/√3`, stored with exact equal amplitudes.
    pub fn equal_superposition() -> Self {
        let a = c(1.0 / 3f64.sqrt(), 0.0);
        Self {
            xi: 2.0 * 2f64.sqrt().atan(),
            theta: FRAC_PI_2,
            phi01: 0.0,
            phi02: 0.0,
            amplitudes: [a, a, a],
        }
    }

    pub fn is_equal_superposition(&self) -> bool {
        let a = 1.0 / 3f64.sqrt();
        self.amplitudes.iter().all(|z| (z - c(a, 0.0)).norm() < 1e-15)
    }

    pub fn angles(&self) -> [f64; 4] {
        [self.xi, self.theta, self.phi01, self.phi02]
    }

    pub fn ket(&self) -> Ket {
        Ket(self.amplitudes.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Target {
    Qubit(QubitTarget),
    Qutrit(QutritTarget),
}

impl Target {
    pub fn dim(&self) -> usize {
        match self {
            Target::Qubit(_) => 2,
            Target::Qutrit(_) => 3,
        }
    }

    pub fn ket(&self) -> Ket {
        target_ket(self)
    }

    /// Catalog label (`0`, `1`, `+`, `-`, `i`, `-i`, `qutrit-equal`) or an
    /// explicit angle tuple.
    pub fn label(&self) -> String {
        match self {
            Target::Qubit(q) => stabilizer_catalog()
                .iter()
                .find(|e| (e.theta - q.theta).abs() < 1e-12 && (e.phi - q.phi).abs() < 1e-12)
                .map(|e| String::from(e.label))
                .unwrap_or_else(|| format!("qubit({},{})", q.theta, q.phi)),
            Target::Qutrit(q) if q.is_equal_superposition() => String::from("qutrit-equal"),
            Target::Qutrit(q) => format!("qutrit({},{},{},{})", q.xi, q.theta, q.phi01, q.phi02),
        }
    }

    /// Parses a catalog label or `theta,phi` / `xi,theta,phi01,phi02`
    /// (radians). The Unicode minus is accepted in labels.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().replace('\u{2212}', "-");
        if t == "qutrit-equal" {
            return Ok(Target::Qutrit(QutritTarget::equal_superposition()));
        }
        if let Some(e) = stabilizer_catalog().into_iter().find(|e| e.label == t) {
            return Ok(Target::Qubit(e.target()));
        }
        let inner = t
            .trim_start_matches("qubit")
            .trim_start_matches("qutrit")
            .trim_start_matches('(')
            .trim_end_matches(')');
        let nums: core::result::Result<Vec<f64>, _> = inner.split(',').map(|s| s.trim().parse::<f64>()).collect();
        match nums.as_deref() {
            Ok([theta, phi]) => Ok(Target::Qubit(QubitTarget::new(*theta, *phi)?)),
            Ok([xi, theta, p1, p2]) => Ok(Target::Qutrit(QutritTarget::new(*xi, *theta, *p1, *p2)?)),
            _ => Err(Error::Unsupported(format!("target {text:?}"))),
        }
    }
}

/// Unit-norm target ket with its first nonzero amplitude real and positive.
pub fn target_ket(target: &Target) -> Ket {
    match target {
        Target::Qubit(q) => q.ket(),
        Target::Qutrit(q) => q.ket(),
    }
}

/// Single-qubit Bloch vector `s_k = Tr(ρ σ_k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(s: [f64; 3]) -> Result<Self> {
        let v = BlochVector(s);
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(v.norm() <= 1.0 + 1e-9) {
            return Err(Error::InvalidState(format!("Bloch vector norm {} exceeds 1", v.norm())));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }
}

/// Qutrit coordinates `n_i = ½ Tr(ρ λ_i)` with `ρ = I/3 + n·λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GellMannVector(pub [f64; 8]);

/// The Gell-Mann matrices λ₁…λ₈ in the usual order: λ₁, λ₄, λ₆ symmetric,
/// λ₂, λ₅, λ₇ antisymmetric, λ₃, λ₈ diagonal, normalized to
/// `Tr(λ_a λ_b) = 2δ_ab`.
pub fn gell_mann() -> [ComplexMatrix; 8] {
    let (o, z, i) = (c(1.0, 0.0), ZERO, c(0.0, 1.0));
    let r = 1.0 / 3f64.sqrt();
    [
        ComplexMatrix::from_rows([[z, o, z], [o, z, z], [z, z, z]]),
        ComplexMatrix::from_rows([[z, -i, z], [i, z, z], [z, z, z]]),
        ComplexMatrix::from_rows([[o, z, z], [z, -o, z], [z, z, z]]),
        ComplexMatrix::from_rows([[z, z, o], [z, z, z], [o, z, z]]),
        ComplexMatrix::from_rows([[z, z, -i], [z, z, z], [i, z, z]]),
        ComplexMatrix::from_rows([[z, z, z], [z, z, o], [z, o, z]]),
        ComplexMatrix::from_rows([[z, z, z], [z, z, -i], [z, i, z]]),
        ComplexMatrix::from_rows([[c(r, 0.0), z, z], [z, c(r, 0.0), z], [z, z, c(-2.0 * r, 0.0)]]),
    ]
}

/// Density operator on a register with declared subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityState {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityState {
    /// Validates trace, hermiticity and positivity.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let s = Self::from_raw(matrix, dims)?;
        s.validate()?;
        Ok(s)
    }

    /// Single-subsystem state.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.dim();
        Self::new(matrix, vec![d])
    }

    /// Checks only that `dims` match; used for states produced by channels
    /// that preserve the density-state properties up to rounding.
    pub fn from_raw(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != matrix.dim() || dims.is_empty() {
            return Err(Error::SubsystemMismatch {
                dims,
                dim: matrix.dim(),
            });
        }
        Ok(Self { matrix, dims })
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > TOL.reconstruction {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let herr = self.matrix.hermiticity_error();
        if herr > TOL.hermiticity {
            return Err(Error::NotHermitian(herr));
        }
        let min = herm_eig(&self.matrix)?.values[0];
        if min < -TOL.equality {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn pure(ket: &Ket) -> Self {
        let d = ket.len();
        Self {
            matrix: ket.normalized().projector(),
            dims: vec![d],
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
            dims: vec![dim],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.inner(&self.matrix).re
    }

    pub fn tensor(&self, other: &DensityState) -> DensityState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    pub fn partial_trace(&self, keep: usize) -> Result<DensityState> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let d = m.dim();
        Ok(Self { matrix: m, dims: vec![d] })
    }

    /// `(I + s·σ)/2`.
    pub fn from_bloch(s: BlochVector) -> Result<Self> {
        let s = BlochVector::new(s.0)?;
        let mut m = ComplexMatrix::identity(2);
        for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
            m = &m + &p.matrix().scale_re(s.0[k]);
        }
        Ok(Self {
            matrix: m.scale_re(0.5),
            dims: vec![2],
        })
    }

    pub fn bloch(&self) -> Result<BlochVector> {
        self.expect_dim(2)?;
        let s = [Pauli::X, Pauli::Y, Pauli::Z].map(|p| p.matrix().inner(&self.matrix).re);
        Ok(BlochVector(s))
    }

    /// `I/3 + n·λ`.
    pub fn from_gellmann(n: GellMannVector) -> Result<Self> {
        let mut m = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        for (k, l) in gell_mann().iter().enumerate() {
            m = &m + &l.scale_re(n.0[k]);
        }
        Self::new(m, vec![3])
    }

    pub fn gellmann(&self) -> Result<GellMannVector> {
        self.expect_dim(3)?;
        let lambdas = gell_mann();
        let mut n = [0.0; 8];
        for (k, l) in lambdas.iter().enumerate() {
            n[k] = 0.5 * l.inner(&self.matrix).re;
        }
        Ok(GellMannVector(n))
    }

    fn expect_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// `⟨ψ|ρ|ψ⟩` clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityState, target: &Ket) -> Result<f64> {
    let v = rho.matrix.apply(target)?;
    Ok(target.inner(&v).re.clamp(0.0, 1.0))
}

/// Ginibre-distributed mixed state `GG†/Tr(GG†)`.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityState> {
    if ![2, 3, 4, 6].contains(&dim) {
        return Err(Error::Unsupported(format!("random states of dimension {dim}")));
    }
    Ok(random_density_with(dim, &mut SplitMix64::new(seed)))
}

/// As [`random_density`], drawing from an existing generator.
pub fn random_density_with(dim: usize, rng: &mut SplitMix64) -> DensityState {
    let g = ginibre(dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityState {
        matrix: w.scale_re(1.0 / tr).hermitian_part(),
        dims: vec![dim],
    }
}

/// One signed two-qubit Pauli term `sign · σ_ancilla ⊗ σ_system`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliTerm {
    pub sign: f64,
    pub ancilla: Pauli,
    pub system: Pauli,
}

impl PauliTerm {
    const fn new(sign: f64, ancilla: Pauli, system: Pauli) -> Self {
        Self { sign, ancilla, system }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        kron(&self.ancilla.matrix(), &self.system.matrix()).scale_re(self.sign)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StabilizerEntry {
    pub label: &'static str,
    pub theta: f64,
    pub phi: f64,
    pub bloch: BlochVector,
    /// `H = (J/2)(t₁ + t₂)`.
    pub terms: [PauliTerm; 2],
}

impl StabilizerEntry {
    pub fn target(&self) -> QubitTarget {
        QubitTarget::new(self.theta, self.phi).expect("catalog angles are in range")
    }

    pub fn hamiltonian(&self, coupling: f64) -> ComplexMatrix {
        (&self.terms[0].matrix() + &self.terms[1].matrix()).scale_re(coupling / 2.0)
    }
}

/// The six single-qubit stabilizer states with their steering Hamiltonians.
pub fn stabilizer_catalog() -> Vec<StabilizerEntry> {
    use Pauli::{X, Y, Z};
    let entry = |label, theta, phi, s, t: [PauliTerm; 2]| StabilizerEntry {
        label,
        theta,
        phi,
        bloch: BlochVector(s),
        terms: t,
    };
    let t = PauliTerm::new;
    vec![
        entry("0", 0.0, 0.0, [0.0, 0.0, 1.0], [t(-1.0, X, X), t(-1.0, Y, Y)]),
        entry("1", PI, 0.0, [0.0, 0.0, -1.0], [t(1.0, X, X), t(-1.0, Y, Y)]),
        entry("+", FRAC_PI_2, 0.0, [1.0, 0.0, 0.0], [t(1.0, X, Z), t(-1.0, Y, Y)]),
        entry("-", FRAC_PI_2, PI, [-1.0, 0.0, 0.0], [t(1.0, X, Z), t(1.0, Y, Y)]),
        entry("i", FRAC_PI_2, FRAC_PI_2, [0.0, 1.0, 0.0], [t(1.0, X, Z), t(1.0, Y, X)]),
        entry("-i", FRAC_PI_2, 3.0 * FRAC_PI_2, [0.0, -1.0, 0.0], [t(1.0, X, Z), t(-1.0, Y, X)]),
    ]
}

#[cfg(test)]
mod tests;
