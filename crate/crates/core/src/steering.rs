//! Steering Hamiltonians, unitaries and the induced Kraus channels.
//!
//! The joint register is ordered ancilla first, system second. The ancilla
//! starts in `|ψ_A⟩` (default `|0⟩`); after the coupling unitary it is
//! measured in the computational basis, giving the Kraus operators
//! `A_k = ⟨k|_A U |ψ_A⟩`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c, expm_i_herm, kron, partial_trace, ComplexMatrix, Ket, C64, TOL};
use crate::pauli::Pauli;
use crate::states::{BlochVector, DensityState, QubitTarget, QutritTarget, Target};
use crate::{Error, Result};

/// A target state together with the coupling strength `J`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TargetSpec {
    pub target: Target,
    pub coupling: f64,
}

impl TargetSpec {
    pub fn new(target: Target, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::OutOfRange {
                name: "J",
                value: coupling,
                range: "finite reals",
            });
        }
        Ok(Self { target, coupling })
    }
}

/// Qubit steering Hamiltonian (ancilla ⊗ system):
///
/// ```text
/// H = (J/2)(−cosφ cosθ XX − cosφ YY + sinφ YX + sinθ XZ − sinφ cosθ XY)
/// ```
///
/// For ancilla `|0⟩` it acts as `J(|1⟩⟨0| ⊗ |ψ⟩⟨ψ⊥| + h.c.)` up to phases,
/// so every measured `1` flips the system onto the target.
pub fn build_qubit_hamiltonian(theta: f64, phi: f64, coupling: f64) -> Result<ComplexMatrix> {
    QubitTarget::new(theta, phi)?;
    use Pauli::{X, Y, Z};
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let terms = [
        (-cp * ct, X, X),
        (-cp, Y, Y),
        (sp, Y, X),
        (st, X, Z),
        (-sp * ct, X, Y),
    ];
    let mut h = ComplexMatrix::zeros(4);
    for (w, a, s) in terms {
        if w != 0.0 {
            h = &h + &kron(&a.matrix(), &s.matrix()).scale_re(w);
        }
    }
    Ok(h.scale_re(coupling / 2.0))
}

/// Orthonormal basis of the complement of a qutrit target.
///
/// For the equal superposition these are `(|0⟩ + ν|1⟩ + ν*|2⟩)/√3` and its
/// conjugate with `ν = e^{2πi/3}`; otherwise Gram–Schmidt on the
/// computational basis, keeping the two largest residuals.
pub fn complement_basis(target: &QutritTarget) -> [Ket; 2] {
    if target.is_equal_superposition() {
        let r = 1.0 / 3f64.sqrt();
        let nu = C64::from_polar(1.0, core::f64::consts::TAU / 3.0);
        let a = Ket(vec![c(r, 0.0), nu * r, nu.conj() * r]);
        let b = Ket(vec![c(r, 0.0), nu.conj() * r, nu * r]);
        return [a, b];
    }
    let psi = target.ket();
    let mut residuals: Vec<Ket> = (0..3)
        .map(|k| {
            let e = Ket::basis(3, k);
            let p = psi.inner(&e);
            Ket((0..3).map(|i| e[i] - psi[i] * p).collect())
        })
        .collect();
    residuals.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    let first = residuals[0].normalized();
    let mut second = residuals[1].clone();
    let p = first.inner(&second);
    for i in 0..3 {
        second[i] -= first[i] * p;
    }
    if second.norm() < 1e-8 {
        second = residuals[2].clone();
        let p = first.inner(&second);
        for i in 0..3 {
            second[i] -= first[i] * p;
        }
    }
    [first, second.normalized()]
}

/// Unit-coupling qutrit steering Hamiltonian
/// `|0⟩⟨1|_A ⊗ (|ψ⊥₁⟩ + |ψ⊥₂⟩)⟨ψ| + h.c.`.
///
/// The equal-superposition target reproduces the exact block matrix with
/// rows `(2,2,2)/3, (−1,−1,−1)/3, (−1,−1,−1)/3`. For any target the coupling
/// block has largest singular value `√2`.
pub fn build_qutrit_hamiltonian(target: &QutritTarget) -> ComplexMatrix {
    let block = if target.is_equal_superposition() {
        let rows = [2.0, -1.0, -1.0];
        ComplexMatrix::from_fn(3, |i, _| c(rows[i] / 3.0, 0.0))
    } else {
        let [a, b] = complement_basis(target);
        let w = Ket((0..3).map(|i| a[i] + b[i]).collect());
        w.outer(&target.ket())
    };
    let mut h = ComplexMatrix::zeros(6);
    for i in 0..3 {
        for j in 0..3 {
            h[(i, 3 + j)] = block[(i, j)];
            h[(3 + j, i)] = block[(i, j)].conj();
        }
    }
    h
}

/// Coupling Hamiltonian, its unitary and the ancilla preparation.
#[derive(Clone, Debug)]
pub struct SteeringOperator {
    hamiltonian: ComplexMatrix,
    unitary: ComplexMatrix,
    ancilla_init: Ket,
    system_dim: usize,
    coupling: f64,
    target: Ket,
    label: String,
}

pub const ANCILLA_DIM: usize = 2;

impl SteeringOperator {
    /// Builds an operator from an arbitrary joint Hamiltonian (ancilla
    /// first); `target` is recorded for fidelity bookkeeping only.
    pub fn from_hamiltonian(hamiltonian: ComplexMatrix, system_dim: usize, target: Ket, coupling: f64) -> Result<Self> {
        if hamiltonian.dim() != ANCILLA_DIM * system_dim {
            return Err(Error::DimensionMismatch {
                expected: ANCILLA_DIM * system_dim,
                found: hamiltonian.dim(),
            });
        }
        let unitary = expm_i_herm(&hamiltonian)?;
        Ok(Self {
            hamiltonian,
            unitary,
            ancilla_init: Ket::basis(ANCILLA_DIM, 0),
            system_dim,
            coupling,
            target,
            label: String::from("custom"),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Replaces the ancilla preparation.
    pub fn with_ancilla(mut self, ket: Ket) -> Result<Self> {
        if ket.len() != ANCILLA_DIM {
            return Err(Error::DimensionMismatch {
                expected: ANCILLA_DIM,
                found: ket.len(),
            });
        }
        self.ancilla_init = ket.normalized();
        Ok(self)
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ancilla_init(&self) -> &Ket {
        &self.ancilla_init
    }

    pub fn ancilla_dim(&self) -> usize {
        ANCILLA_DIM
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn target(&self) -> &Ket {
        &self.target
    }

    pub fn kraus(&self) -> KrausSet {
        KrausSet::from_unitary(&self.unitary, self.system_dim, &[(1.0, self.ancilla_init.clone())])
            .expect("dimensions fixed at construction")
    }

    /// Kraus set when the ancilla reset fails with probability `epsilon`,
    /// leaving it in the state orthogonal to `|ψ_A⟩`.
    pub fn kraus_with_reset_error(&self, epsilon: f64) -> Result<KrausSet> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidNoise(format!("reset error {epsilon} outside [0, 1]")));
        }
        let a = &self.ancilla_init;
        let perp = Ket(vec![-a[1].conj(), a[0].conj()]);
        KrausSet::from_unitary(&self.unitary, self.system_dim, &[(1.0 - epsilon, a.clone()), (epsilon, perp)])
    }
}

pub fn make_steering_operator(spec: &TargetSpec) -> Result<SteeringOperator> {
    let op = match &spec.target {
        Target::Qubit(q) => {
            let h = build_qubit_hamiltonian(q.theta(), q.phi(), spec.coupling)?;
            SteeringOperator::from_hamiltonian(h, 2, q.ket(), spec.coupling)
        }
        Target::Qutrit(q) => {
            let h = build_qutrit_hamiltonian(q).scale_re(spec.coupling);
            SteeringOperator::from_hamiltonian(h, 3, q.ket(), spec.coupling)
        }
    }?;
    Ok(op.with_label(spec.target.label()))
}

/// Kraus operators labelled by the ancilla outcome that produces them.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
    outcomes: Vec<usize>,
    n_outcomes: usize,
}

impl KrausSet {
    /// `A_{k,i} = √p_i ⟨k|U|ψ_i⟩` for an ancilla mixture `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn from_unitary(u: &ComplexMatrix, system_dim: usize, ancilla: &[(f64, Ket)]) -> Result<Self> {
        if !u.dim().is_multiple_of(system_dim) {
            return Err(Error::DimensionMismatch {
                expected: system_dim,
                found: u.dim(),
            });
        }
        let da = u.dim() / system_dim;
        let ds = system_dim;
        let mut operators = Vec::new();
        let mut outcomes = Vec::new();
        for k in 0..da {
            for (p, psi) in ancilla {
                if *p == 0.0 {
                    continue;
                }
                if psi.len() != da {
                    return Err(Error::DimensionMismatch {
                        expected: da,
                        found: psi.len(),
                    });
                }
                let w = p.sqrt();
                let op = ComplexMatrix::from_fn(ds, |s, t| {
                    (0..da).map(|a| u[(k * ds + s, a * ds + t)] * psi[a]).sum::<C64>() * w
                });
                operators.push(op);
                outcomes.push(k);
            }
        }
        Ok(Self {
            operators,
            outcomes,
            n_outcomes: da,
        })
    }

    /// A set with one operator per outcome.
    pub fn from_operators(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let d = operators.first().map(|m| m.dim()).unwrap_or(0);
        if let Some(bad) = operators.iter().find(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let n = operators.len();
        Ok(Self {
            operators,
            outcomes: (0..n).collect(),
            n_outcomes: n,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// Operators belonging to outcome `k`.
    pub fn for_outcome(&self, k: usize) -> impl Iterator<Item = &ComplexMatrix> {
        self.operators
            .iter()
            .zip(&self.outcomes)
            .filter(move |(_, &o)| o == k)
            .map(|(m, _)| m)
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn system_dim(&self) -> usize {
        self.operators.first().map(|m| m.dim()).unwrap_or(0)
    }

    /// `max |Σ A†A − I|`.
    pub fn completeness_error(&self) -> f64 {
        let d = self.system_dim();
        let mut s = ComplexMatrix::zeros(d);
        for a in &self.operators {
            s = &s + &(&a.adjoint() * a);
        }
        s.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Unnormalized post-measurement state for outcome `k`.
    pub fn branch(&self, rho: &ComplexMatrix, k: usize) -> ComplexMatrix {
        self.for_outcome(k)
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, a| &acc + &a.sandwich(rho))
    }

    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        (0..self.n_outcomes)
            .map(|k| self.branch(rho, k).trace().re.max(0.0))
            .collect()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, a| &acc + &a.sandwich(rho))
            .hermitian_part()
    }
}

pub fn kraus_from_unitary(op: &SteeringOperator) -> KrausSet {
    op.kraus()
}

/// One cycle of the outcome-averaged channel `ρ → Σ_k A_k ρ A_k†`.
pub fn averaged_step(rho: &DensityState, kraus: &KrausSet) -> Result<DensityState> {
    if rho.dim() != kraus.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: kraus.system_dim(),
            found: rho.dim(),
        });
    }
    DensityState::from_raw(kraus.apply(rho.matrix()), rho.dims().to_vec())
}

/// The same cycle evaluated on the joint register:
/// `Tr_A[U (|ψ_A⟩⟨ψ_A| ⊗ ρ) U†]`.
pub fn joint_step(rho: &DensityState, op: &SteeringOperator) -> Result<DensityState> {
    if rho.dim() != op.system_dim {
        return Err(Error::DimensionMismatch {
            expected: op.system_dim,
            found: rho.dim(),
        });
    }
    let joint = kron(&op.ancilla_init.projector(), rho.matrix());
    let out = partial_trace(&op.unitary.sandwich(&joint), &[ANCILLA_DIM, op.system_dim], 1)?;
    DensityState::from_raw(out.hermitian_part(), rho.dims().to_vec())
}

/// Outcome of the monotonicity check on a fidelity sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SteeringCheck {
    pub holds: bool,
    /// Index `n + 1` of the first entry with `f[n+1] < f[n] − 1e-12`.
    pub first_violation: Option<usize>,
}

pub fn steering_inequality_holds(fidelities: &[f64]) -> SteeringCheck {
    let first_violation = fidelities
        .windows(2)
        .position(|w| w[1] < w[0] - 1e-12)
        .map(|n| n + 1);
    SteeringCheck {
        holds: first_violation.is_none(),
        first_violation,
    }
}

/// Closed-form Bloch vector after `n` averaged steps towards `|+⟩`:
///
/// ```text
/// s_x(n) = 1 − cos^{2n}(J) (1 − s_x(0))
/// s_y(n) = cosⁿ(J) s_y(0)
/// s_z(n) = cosⁿ(J) s_z(0)
/// ```
pub fn analytic_plus_trajectory(s0: BlochVector, coupling: f64, n: u32) -> Result<BlochVector> {
    if !(coupling > 0.0 && coupling < core::f64::consts::PI) {
        return Err(Error::OutOfRange {
            name: "J",
            value: coupling,
            range: "(0, π)",
        });
    }
    if n == 0 {
        return Ok(s0);
    }
    let cn = coupling.cos().powi(n as i32);
    let s = s0.0;
    Ok(BlochVector([1.0 - cn * cn * (1.0 - s[0]), cn * s[1], cn * s[2]]))
}

/// Checks the operator invariants: unitarity, `U = exp(−iH)` and Kraus
/// completeness.
pub fn verify_operator(op: &SteeringOperator) -> Result<()> {
    op.unitary.ensure_unitary()?;
    let err = op.kraus().completeness_error();
    if err > TOL.reconstruction {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
