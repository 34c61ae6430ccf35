//! Simulated measurements, state and process tomography.
//!
//! Process reconstructions use linear inversion followed by a physicality
//! projection of the Choi matrix. Passing [`Shots::Infinite`] replaces
//! sampling with exact Born expectations.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c, herm_eig, kron, kron_all, ComplexMatrix, Ket, Lu, C64, ONE};
use crate::pauli::{Pauli, PauliString};
use crate::readout::ConfusionMatrix;
use crate::rng::SplitMix64;
use crate::states::{gell_mann, DensityState};
use crate::{Error, Result};

pub use crate::readout::{mitigate_readout, MitigatedDistribution};

/// Label attached to process reconstructions.
pub const QPT_METHOD: &str = "linear-inversion+choi-projection";

/// Projective measurement in the eigenbasis of an observable.
///
/// Outcome `k` corresponds to the state `rotation† |k⟩` and carries the
/// observable value `values[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    pub label: String,
    pub rotation: ComplexMatrix,
    pub values: Vec<f64>,
}

impl MeasurementBasis {
    pub fn computational(dim: usize) -> Self {
        Self {
            label: String::from("Z"),
            rotation: ComplexMatrix::identity(dim),
            values: (0..dim).map(|k| k as f64).collect(),
        }
    }

    /// Product basis of a Pauli string. Identity factors are measured in `Z`
    /// and contribute `+1` to the outcome value.
    pub fn pauli(string: &PauliString) -> Self {
        let factors: Vec<ComplexMatrix> = string.0.iter().map(|&p| pauli_rotation(p)).collect();
        let n = string.len();
        let values = (0..1usize << n)
            .map(|k| {
                let mut v = 1.0;
                for (w, &p) in string.0.iter().enumerate() {
                    let bit = (k >> (n - 1 - w)) & 1;
                    if p != Pauli::I && bit == 1 {
                        v = -v;
                    }
                }
                v
            })
            .collect();
        Self {
            label: format!("{string}"),
            rotation: kron_all(&factors),
            values,
        }
    }

    /// Eigenbasis of a Hermitian observable.
    pub fn observable(label: impl Into<String>, obs: &ComplexMatrix) -> Result<Self> {
        obs.ensure_hermitian()?;
        let eig = herm_eig(obs)?;
        Ok(Self {
            label: label.into(),
            rotation: eig.vectors.adjoint(),
            values: eig.values,
        })
    }

    pub fn dim(&self) -> usize {
        self.rotation.dim()
    }

    /// Born probabilities of each outcome.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let r = self.rotation.sandwich(rho);
        Ok((0..self.dim()).map(|k| r[(k, k)].re.max(0.0)).collect())
    }

    /// Exact expectation of the observable.
    pub fn expectation(&self, rho: &ComplexMatrix) -> Result<f64> {
        Ok(self.probabilities(rho)?.iter().zip(&self.values).map(|(p, v)| p * v).sum())
    }
}

/// Rotation taking the Pauli eigenbasis to the computational basis.
fn pauli_rotation(p: Pauli) -> ComplexMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    match p {
        Pauli::X => ComplexMatrix::from_real([[h, h], [h, -h]]),
        // ⟨+i| and ⟨−i| as rows.
        Pauli::Y => ComplexMatrix::from_rows([[c(h, 0.0), c(0.0, -h)], [c(h, 0.0), c(0.0, h)]]),
        _ => ComplexMatrix::identity(2),
    }
}

/// Histogram of recorded outcomes for one measurement setting.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShotCounts {
    pub basis: String,
    pub counts: Vec<usize>,
    pub shots: usize,
}

impl ShotCounts {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&n| n as f64 / self.shots as f64).collect()
    }

    /// Sample mean of the observable values.
    pub fn mean(&self, values: &[f64]) -> f64 {
        self.frequencies().iter().zip(values).map(|(f, v)| f * v).sum()
    }
}

/// Multinomial sampling of the Born distribution, then per-shot confusion.
pub fn simulate_shots(rho: &DensityState, basis: &MeasurementBasis, shots: usize, confusion: Option<&ConfusionMatrix>, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
            range: "positive integers",
        });
    }
    let probs = basis.probabilities(rho.matrix())?;
    if let Some(cm) = confusion {
        if cm.outcomes() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: cm.outcomes(),
            });
        }
    }
    let mut rng = SplitMix64::new(seed);
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..shots {
        let k = rng.categorical(&probs);
        let recorded = match confusion {
            Some(cm) => cm.corrupt(k, &mut rng),
            None => k,
        };
        counts[recorded] += 1;
    }
    Ok(ShotCounts {
        basis: basis.label.clone(),
        counts,
        shots,
    })
}

/// Closest state in eigenvalue 2-norm: negative eigenvalues are zeroed from
/// the most negative up, their weight spread evenly over the survivors.
pub fn mle_project(raw: &ComplexMatrix) -> Result<DensityState> {
    let herr = raw.hermiticity_error();
    if herr > 1e-9 {
        return Err(Error::NotHermitian(herr));
    }
    let tr = raw.trace();
    if (tr - ONE).norm() > 1e-9 {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let eig = herm_eig(&raw.hermitian_part())?;
    if eig.values[0] >= 0.0 {
        return DensityState::single(raw.hermitian_part());
    }
    let values = truncate_spectrum(&eig.values);
    let m = eig.map_values(&values);
    DensityState::single(m)
}

/// Eigenvalue step of [`mle_project`] on an ascending spectrum.
pub fn truncate_spectrum(ascending: &[f64]) -> Vec<f64> {
    let d = ascending.len();
    let mut mu: Vec<f64> = ascending.iter().rev().copied().collect();
    let mut deficit = 0.0;
    let mut i = d;
    while i > 0 && mu[i - 1] + deficit / (i as f64) < 0.0 {
        deficit += mu[i - 1];
        mu[i - 1] = 0.0;
        i -= 1;
    }
    for m in mu.iter_mut().take(i) {
        *m += deficit / i as f64;
    }
    mu.reverse();
    mu
}

/// `ρ = (I + a·σ)/2`, projected if unphysical.
pub fn qubit_state_tomo(expectations: [f64; 3]) -> Result<DensityState> {
    let raw = linear_qubit(expectations)?;
    mle_project(&raw)
}

/// Unprojected qubit estimate.
pub fn linear_qubit(expectations: [f64; 3]) -> Result<ComplexMatrix> {
    if expectations.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidState(String::from("non-finite expectation")));
    }
    let mut m = ComplexMatrix::identity(2);
    for (a, p) in expectations.iter().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
        m = &m + &p.matrix().scale_re(*a);
    }
    Ok(m.scale_re(0.5))
}

/// `ρ = I/3 + Σ (⟨λ_i⟩/2) λ_i`, projected if unphysical.
pub fn qutrit_state_tomo(expectations: [f64; 8]) -> Result<DensityState> {
    let raw = linear_qutrit(expectations)?;
    mle_project(&raw)
}

/// Unprojected qutrit estimate.
pub fn linear_qutrit(expectations: [f64; 8]) -> Result<ComplexMatrix> {
    if expectations.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidState(String::from("non-finite expectation")));
    }
    let mut m = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
    for (a, l) in expectations.iter().zip(gell_mann().iter()) {
        m = &m + &l.scale_re(a / 2.0);
    }
    Ok(m)
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn state_fidelity(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let sqrt_rho = herm_eig(rho.matrix())?.map(|x| c(x.max(0.0).sqrt(), 0.0));
    let inner = sqrt_rho.sandwich(sigma.matrix()).hermitian_part();
    let s: f64 = herm_eig(&inner)?.values.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Observables measured by single-register state tomography: `X, Y, Z` for
/// a qubit, the eight Gell-Mann matrices for a qutrit.
pub fn tomography_bases(dim: usize) -> Result<Vec<MeasurementBasis>> {
    match dim {
        2 => Ok([Pauli::X, Pauli::Y, Pauli::Z].iter().map(|&p| MeasurementBasis::pauli(&PauliString(vec![p]))).collect()),
        3 => gell_mann()
            .iter()
            .enumerate()
            .map(|(i, l)| MeasurementBasis::observable(format!("lambda{}", i + 1), l))
            .collect(),
        _ => Err(Error::Unsupported(format!("state tomography of dimension {dim}"))),
    }
}

/// Shot count, or exact expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Shots {
    Infinite,
    Finite(usize),
}

/// Result of state tomography.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEstimate {
    pub expectations: Vec<f64>,
    /// Multinomial standard error of each expectation (zero for exact).
    pub std_errors: Vec<f64>,
    pub counts: Vec<ShotCounts>,
    /// Linear-inversion estimate before projection.
    pub linear: ComplexMatrix,
    pub state: DensityState,
}

impl StateEstimate {
    /// `⟨ψ|ρ_lin|ψ⟩` and its standard error, both linear in the expectations.
    pub fn linear_fidelity(&self, target: &Ket) -> Result<(f64, f64)> {
        let dim = self.linear.dim();
        let obs: Vec<ComplexMatrix> = tomography_bases(dim)?.iter().map(observable_matrix).collect();
        let f = target.inner(&self.linear.apply(target)?).re;
        // F = 1/d + Σ w_i ⟨O_i⟩ with w_i = ⟨ψ|O_i|ψ⟩ / (Tr O_i²).
        let var: f64 = obs
            .iter()
            .zip(&self.std_errors)
            .map(|(o, s)| {
                let w = target.inner(&o.apply(target).expect("dims")).re / o.inner(o).re;
                (w * s).powi(2)
            })
            .sum();
        Ok((f, var.sqrt()))
    }
}

fn observable_matrix(b: &MeasurementBasis) -> ComplexMatrix {
    let d = ComplexMatrix::diag(&b.values.iter().map(|&v| c(v, 0.0)).collect::<Vec<C64>>());
    b.rotation.adjoint().sandwich(&d)
}

/// Qubit or qutrit state tomography with optional readout confusion. Each
/// setting draws from its own seed stream.
pub fn state_tomography(rho: &DensityState, shots: Shots, confusion: Option<&ConfusionMatrix>, seed: u64) -> Result<StateEstimate> {
    let dim = rho.dim();
    let bases = tomography_bases(dim)?;
    let mut expectations = Vec::with_capacity(bases.len());
    let mut std_errors = Vec::with_capacity(bases.len());
    let mut counts = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        match shots {
            Shots::Infinite => {
                expectations.push(b.expectation(rho.matrix())?);
                std_errors.push(0.0);
            }
            Shots::Finite(n) => {
                let sc = simulate_shots(rho, b, n, confusion, SplitMix64::stream(seed, i as u64).next_u64())?;
                let mean = sc.mean(&b.values);
                let second: f64 = sc.frequencies().iter().zip(&b.values).map(|(f, v)| f * v * v).sum();
                expectations.push(mean);
                std_errors.push(((second - mean * mean).max(0.0) / n as f64).sqrt());
                counts.push(sc);
            }
        }
    }
    let linear = match dim {
        2 => linear_qubit([expectations[0], expectations[1], expectations[2]])?,
        _ => {
            let mut e = [0.0; 8];
            e.copy_from_slice(&expectations);
            linear_qutrit(e)?
        }
    };
    let state = mle_project(&linear)?;
    Ok(StateEstimate {
        expectations,
        std_errors,
        counts,
        linear,
        state,
    })
}

/// Real `4ⁿ × 4ⁿ` matrix `R_ij = Tr(P_i E(P_j)) / 2ⁿ` over Pauli strings in
/// lexicographic order (`I, X, Y, Z` per wire, wire 0 most significant).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliTransferMatrix {
    pub n_qubits: usize,
    pub r: Vec<Vec<f64>>,
}

impl PauliTransferMatrix {
    pub fn from_rows(n_qubits: usize, r: Vec<Vec<f64>>) -> Result<Self> {
        let size = 1usize << (2 * n_qubits);
        if r.len() != size || r.iter().any(|row| row.len() != size) {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: r.len(),
            });
        }
        Ok(Self { n_qubits, r })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let size = 1usize << (2 * n_qubits);
        let r = (0..size).map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self { n_qubits, r }
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let d = kraus.first().map(|k| k.dim()).ok_or_else(|| Error::InvalidState(String::from("empty Kraus set")))?;
        let n = qubit_count(d)?;
        let paulis: Vec<ComplexMatrix> = PauliString::all(n).iter().map(|p| p.matrix()).collect();
        let mut r = vec![vec![0.0; paulis.len()]; paulis.len()];
        for (j, pj) in paulis.iter().enumerate() {
            let out = kraus.iter().fold(ComplexMatrix::zeros(d), |acc, k| &acc + &k.sandwich(pj));
            for (i, pi) in paulis.iter().enumerate() {
                let v = pi.inner(&out) / d as f64;
                if v.im.abs() > 1e-10 {
                    return Err(Error::InvalidState(format!("PTM entry ({i},{j}) has imaginary part {}", v.im)));
                }
                r[i][j] = v.re;
            }
        }
        Ok(Self { n_qubits: n, r })
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        u.ensure_unitary()?;
        Self::from_kraus(core::slice::from_ref(u))
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn labels(&self) -> Vec<PauliString> {
        PauliString::all(self.n_qubits)
    }

    fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.size(), |i, j| c(self.r[i][j], 0.0))
    }

    fn from_matrix(n_qubits: usize, m: &ComplexMatrix) -> Self {
        let size = m.dim();
        Self {
            n_qubits,
            r: (0..size).map(|i| (0..size).map(|j| m[(i, j)].re).collect()).collect(),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &PauliTransferMatrix) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self::from_matrix(self.n_qubits, &(&self.as_matrix() * &other.as_matrix())))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self::from_matrix(self.n_qubits, &Lu::new(&self.as_matrix())?.inverse()))
    }

    /// Entrywise `|R − I|`.
    pub fn deviation_from_identity(&self) -> Vec<Vec<f64>> {
        self.r
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| (x - if i == j { 1.0 } else { 0.0 }).abs()).collect())
            .collect()
    }

    pub fn max_deviation_from_identity(&self) -> f64 {
        self.deviation_from_identity().iter().flatten().fold(0.0, |a, &b| a.max(b))
    }

    pub fn max_abs_diff(&self, other: &PauliTransferMatrix) -> f64 {
        self.r.iter().flatten().zip(other.r.iter().flatten()).fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Deviation of the first row from `(1, 0, …, 0)`.
    pub fn trace_preservation_error(&self) -> f64 {
        self.r[0].iter().enumerate().fold(0.0, |a, (j, &x)| a.max((x - if j == 0 { 1.0 } else { 0.0 }).abs()))
    }

    /// Choi matrix `Σ_ij R_ij P_i ⊗ P_jᵀ / d` (output ⊗ input), trace `d`.
    pub fn to_choi(&self) -> ComplexMatrix {
        let d = self.dim();
        let paulis: Vec<ComplexMatrix> = self.labels().iter().map(|p| p.matrix()).collect();
        let mut choi = ComplexMatrix::zeros(d * d);
        for (i, pi) in paulis.iter().enumerate() {
            for (j, pj) in paulis.iter().enumerate() {
                if self.r[i][j] != 0.0 {
                    choi = &choi + &kron(pi, &pj.transpose()).scale_re(self.r[i][j] / d as f64);
                }
            }
        }
        choi
    }

    pub fn from_choi(n_qubits: usize, choi: &ComplexMatrix) -> Self {
        let d = 1usize << n_qubits;
        let paulis: Vec<ComplexMatrix> = PauliString::all(n_qubits).iter().map(|p| p.matrix()).collect();
        let r = paulis
            .iter()
            .map(|pi| paulis.iter().map(|pj| kron(pi, &pj.transpose()).inner(choi).re / d as f64).collect())
            .collect();
        Self { n_qubits, r }
    }

    /// `Tr(R_idealᵀ R) / d²`.
    pub fn process_fidelity(&self, ideal: &PauliTransferMatrix) -> Result<f64> {
        self.same_size(ideal)?;
        let d = self.dim() as f64;
        let s: f64 = self.r.iter().flatten().zip(ideal.r.iter().flatten()).map(|(a, b)| a * b).sum();
        Ok(s / (d * d))
    }

    fn same_size(&self, other: &PauliTransferMatrix) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }
}

fn qubit_count(d: usize) -> Result<usize> {
    match d {
        2 => Ok(1),
        4 => Ok(2),
        _ => Err(Error::Unsupported(format!("Pauli transfer matrices of dimension {d}"))),
    }
}

/// `F_avg = (d·F_pro + 1)/(d + 1)`, clamped to `[0, 1]`.
pub fn average_gate_fidelity(reconstructed: &PauliTransferMatrix, ideal: &PauliTransferMatrix) -> Result<f64> {
    let d = reconstructed.dim() as f64;
    let f_pro = reconstructed.process_fidelity(ideal)?;
    Ok(((d * f_pro + 1.0) / (d + 1.0)).clamp(0.0, 1.0))
}

/// Output of process tomography.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessEstimate {
    pub method: &'static str,
    /// Linear-inversion PTM.
    pub linear: PauliTransferMatrix,
    /// PTM of the projected Choi matrix.
    pub ptm: PauliTransferMatrix,
    pub choi: ComplexMatrix,
    /// Most negative Choi eigenvalue before projection.
    pub min_choi_eigenvalue: f64,
}

/// Single-qubit preparations `|0⟩, |1⟩, |+⟩, |+i⟩`.
pub fn qpt_inputs() -> [Ket; 4] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [
        Ket::basis(2, 0),
        Ket::basis(2, 1),
        Ket(vec![c(h, 0.0), c(h, 0.0)]),
        Ket(vec![c(h, 0.0), c(0.0, h)]),
    ]
}

fn apply_channel(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    kraus.iter().fold(ComplexMatrix::zeros(rho.dim()), |acc, k| &acc + &k.sandwich(rho))
}

/// Process tomography on `n_wires ∈ {1, 2}` qubits: `4ⁿ` product inputs,
/// `3ⁿ` Pauli measurement settings, linear inversion, Choi projection.
pub fn process_tomography(kraus: &[ComplexMatrix], n_wires: usize, shots: Shots, confusion: Option<&ConfusionMatrix>, seed: u64) -> Result<ProcessEstimate> {
    if !(1..=2).contains(&n_wires) {
        return Err(Error::OutOfRange {
            name: "n_wires",
            value: n_wires as f64,
            range: "{1, 2}",
        });
    }
    let d = 1usize << n_wires;
    if kraus.is_empty() || kraus.iter().any(|k| k.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: kraus.first().map_or(0, |k| k.dim()),
        });
    }
    let strings = PauliString::all(n_wires);
    let size = strings.len();
    let paulis: Vec<ComplexMatrix> = strings.iter().map(|p| p.matrix()).collect();
    let settings: Vec<PauliString> = (0..3usize.pow(n_wires as u32))
        .map(|k| PauliString((0..n_wires).map(|w| [Pauli::X, Pauli::Y, Pauli::Z][(k / 3usize.pow((n_wires - 1 - w) as u32)) % 3]).collect()))
        .collect();
    let bases: Vec<MeasurementBasis> = settings.iter().map(MeasurementBasis::pauli).collect();

    let single = qpt_inputs();
    let mut r_in = ComplexMatrix::zeros(size);
    let mut r_out = ComplexMatrix::zeros(size);
    for col in 0..size {
        let kets: Vec<&Ket> = (0..n_wires).map(|w| &single[(col / 4usize.pow((n_wires - 1 - w) as u32)) % 4]).collect();
        let ket = kets[1..].iter().fold(kets[0].clone(), |acc, k| acc.kron(k));
        let rho_in = ket.projector();
        let rho_out = DensityState::single(apply_channel(kraus, &rho_in).hermitian_part())?;
        for (i, p) in paulis.iter().enumerate() {
            r_in[(i, col)] = c(p.inner(&rho_in).re, 0.0);
        }
        // Pauli expectations from every compatible setting, averaged.
        let mut sums = vec![0.0; size];
        let mut hits = vec![0usize; size];
        for (s_idx, (setting, basis)) in settings.iter().zip(&bases).enumerate() {
            let freqs = match shots {
                Shots::Infinite => basis.probabilities(rho_out.matrix())?,
                Shots::Finite(n) => {
                    let stream = (col * settings.len() + s_idx) as u64;
                    simulate_shots(&rho_out, basis, n, confusion, SplitMix64::stream(seed, stream).next_u64())?.frequencies()
                }
            };
            for (i, s) in strings.iter().enumerate() {
                if s.0.iter().zip(&setting.0).any(|(&a, &b)| a != Pauli::I && a != b) {
                    continue;
                }
                let value: f64 = freqs.iter().enumerate().map(|(k, f)| f * parity(s, k, n_wires)).sum();
                sums[i] += value;
                hits[i] += 1;
            }
        }
        for i in 0..size {
            r_out[(i, col)] = c(sums[i] / hits[i] as f64, 0.0);
        }
    }
    let r = &r_out * &Lu::new(&r_in)?.inverse();
    let linear = PauliTransferMatrix::from_matrix(n_wires, &r);
    let raw_choi = linear.to_choi().hermitian_part();
    let eig = herm_eig(&raw_choi)?;
    let min_choi_eigenvalue = eig.values[0];
    let clipped: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::Singular(total));
    }
    let scaled: Vec<f64> = clipped.iter().map(|x| x * d as f64 / total).collect();
    let choi = eig.map_values(&scaled);
    let ptm = PauliTransferMatrix::from_choi(n_wires, &choi);
    Ok(ProcessEstimate {
        method: QPT_METHOD,
        linear,
        ptm,
        choi,
        min_choi_eigenvalue,
    })
}

/// Eigenvalue of string `s` on computational outcome `k`.
fn parity(s: &PauliString, k: usize, n: usize) -> f64 {
    let mut v = 1.0;
    for (w, &p) in s.0.iter().enumerate() {
        if p != Pauli::I && (k >> (n - 1 - w)) & 1 == 1 {
            v = -v;
        }
    }
    v
}
