//! Gate-level circuits: IR, evaluation and synthesis of steering unitaries.
//!
//! Wires are listed most significant first, matching [`crate::linalg::kron`].
//! Single-wire rotations on a qutrit act on the `{|0⟩,|1⟩}` subspace; the
//! `*12` variants act on `{|1⟩,|2⟩}`. Rotation conventions:
//!
//! ```text
//! Rx(t) = exp(−i t X/2)      Rz(t) = exp(−i t Z/2)
//! U3(θ, φ, λ) = Rz(φ) · Ry(θ) · Rz(λ)
//! ```
//!
//! The circuit unitary is `e^{iγ} G_n ⋯ G_1` with `γ` the phase accumulator.

mod text;

pub use text::{emit_text, parse_text};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::kak_decompose;
use crate::linalg::{c, cis, embed, ComplexMatrix, Ket, C64, I, ONE};
use crate::pauli::{Pauli, PauliString};
use crate::states::{QutritTarget, Target};
use crate::steering::{build_qubit_hamiltonian, build_qutrit_hamiltonian, make_steering_operator, TargetSpec};
use crate::{Error, Result};

/// Default first-order Trotter step count for non-commuting Pauli sums.
pub const DEFAULT_TROTTER_STEPS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Rz,
    U3,
    /// Qubit–qubit CNOT, control first.
    Cnot,
    /// Qubit control, qutrit target: `|1⟩|0⟩ ↔ |1⟩|1⟩`, `|1⟩|2⟩ → i|1⟩|2⟩`.
    QubitQutritCnot,
    Rx12,
    Rz12,
    /// Global phase `e^{iγ}`; folded into the circuit accumulator.
    Phase,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::Rx,
        GateKind::Rz,
        GateKind::U3,
        GateKind::Cnot,
        GateKind::QubitQutritCnot,
        GateKind::Rx12,
        GateKind::Rz12,
        GateKind::Phase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "rx",
            GateKind::Rz => "rz",
            GateKind::U3 => "u3",
            GateKind::Cnot => "cx",
            GateKind::QubitQutritCnot => "cxq",
            GateKind::Rx12 => "rx12",
            GateKind::Rz12 => "rz12",
            GateKind::Phase => "phase",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn n_params(self) -> usize {
        match self {
            GateKind::U3 => 3,
            GateKind::Cnot | GateKind::QubitQutritCnot => 0,
            _ => 1,
        }
    }

    pub fn n_wires(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::QubitQutritCnot => 2,
            GateKind::Phase => 0,
            _ => 1,
        }
    }

    pub fn is_entangling(self) -> bool {
        self.n_wires() == 2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, params: Vec<f64>, wires: Vec<usize>) -> Self {
        Self { kind, params, wires }
    }

    pub fn rx(t: f64, w: usize) -> Self {
        Self::new(GateKind::Rx, vec![t], vec![w])
    }

    pub fn rz(t: f64, w: usize) -> Self {
        Self::new(GateKind::Rz, vec![t], vec![w])
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, w: usize) -> Self {
        Self::new(GateKind::U3, vec![theta, phi, lambda], vec![w])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![], vec![control, target])
    }

    pub fn cnot_qq(control: usize, target: usize) -> Self {
        Self::new(GateKind::QubitQutritCnot, vec![], vec![control, target])
    }

    pub fn rx12(t: f64, w: usize) -> Self {
        Self::new(GateKind::Rx12, vec![t], vec![w])
    }

    pub fn rz12(t: f64, w: usize) -> Self {
        Self::new(GateKind::Rz12, vec![t], vec![w])
    }

    pub fn phase(g: f64) -> Self {
        Self::new(GateKind::Phase, vec![g], vec![])
    }

    fn validate(&self, dims: &[usize]) -> Result<()> {
        let bad = |msg: String| Err(Error::Circuit(msg));
        let name = self.kind.name();
        if self.params.len() != self.kind.n_params() {
            return bad(format!("{name} takes {} parameters, got {}", self.kind.n_params(), self.params.len()));
        }
        if let Some(p) = self.params.iter().find(|p| !p.is_finite()) {
            return bad(format!("{name} parameter {p} is not finite"));
        }
        if self.wires.len() != self.kind.n_wires() {
            return bad(format!("{name} acts on {} wires, got {}", self.kind.n_wires(), self.wires.len()));
        }
        if let Some(w) = self.wires.iter().find(|&&w| w >= dims.len()) {
            return bad(format!("{name} wire w{w} out of range"));
        }
        if self.wires.len() == 2 && self.wires[0] == self.wires[1] {
            return bad(format!("{name} wires must be distinct"));
        }
        let d: Vec<usize> = self.wires.iter().map(|&w| dims[w]).collect();
        let ok = match self.kind {
            GateKind::Rx | GateKind::Rz | GateKind::U3 => d[0] == 2 || d[0] == 3,
            GateKind::Cnot => d == [2, 2],
            GateKind::QubitQutritCnot => d == [2, 3],
            GateKind::Rx12 | GateKind::Rz12 => d[0] == 3,
            GateKind::Phase => true,
        };
        if !ok {
            return bad(format!("{name} cannot act on wire dimensions {d:?}"));
        }
        Ok(())
    }

    /// Local matrix on the operand wires with the given dimensions.
    pub fn matrix(&self, dims: &[usize]) -> ComplexMatrix {
        let p = &self.params;
        match self.kind {
            GateKind::Rx => lift01(&rx(p[0]), dims[0]),
            GateKind::Rz => lift01(&rz(p[0]), dims[0]),
            GateKind::U3 => lift01(&u3(p[0], p[1], p[2]), dims[0]),
            GateKind::Rx12 => lift12(&rx(p[0])),
            GateKind::Rz12 => lift12(&rz(p[0])),
            GateKind::Cnot => ComplexMatrix::from_real([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            GateKind::QubitQutritCnot => {
                let mut m = ComplexMatrix::zeros(6);
                for k in 0..3 {
                    m[(k, k)] = ONE;
                }
                m[(4, 3)] = ONE;
                m[(3, 4)] = ONE;
                m[(5, 5)] = I;
                m
            }
            GateKind::Phase => ComplexMatrix::diag(&[cis(p[0])]),
        }
    }
}

pub fn rx(t: f64) -> ComplexMatrix {
    let (s, co) = (t / 2.0).sin_cos();
    ComplexMatrix::from_rows([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
}

pub fn ry(t: f64) -> ComplexMatrix {
    let (s, co) = (t / 2.0).sin_cos();
    ComplexMatrix::from_real([[co, -s], [s, co]])
}

pub fn rz(t: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[cis(-t / 2.0), cis(t / 2.0)])
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    &(&rz(phi) * &ry(theta)) * &rz(lambda)
}

fn lift01(m: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    if dim == 2 {
        return m.clone();
    }
    let mut out = ComplexMatrix::identity(dim);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

fn lift12(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(3);
    for i in 0..2 {
        for j in 0..2 {
            out[(i + 1, j + 1)] = m[(i, j)];
        }
    }
    out
}

/// `m = e^{iα} U3(θ, φ, λ)`; returns `([θ, φ, λ], α)`.
pub fn zyz_angles(m: &ComplexMatrix) -> ([f64; 3], f64) {
    let (s, alpha) = su2_part(m);
    let (a, b) = (s[(0, 0)], s[(1, 0)]);
    let theta = 2.0 * b.norm().atan2(a.norm());
    ([theta, b.arg() - a.arg(), -a.arg() - b.arg()], alpha)
}

/// `m = e^{iα} Rz(a)·Rx(b)·Rz(c)`; returns `([a, b, c], α)`.
pub fn zxz_angles(m: &ComplexMatrix) -> ([f64; 3], f64) {
    let (s, alpha) = su2_part(m);
    let (p, q) = (s[(0, 0)], s[(1, 0)]);
    let b = 2.0 * q.norm().atan2(p.norm());
    ([-p.arg() + q.arg() + FRAC_PI_2, b, -p.arg() - q.arg() - FRAC_PI_2], alpha)
}

fn su2_part(m: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = det.arg() / 2.0;
    (m.scale(cis(-alpha)), alpha)
}

fn wrap_phase(g: f64) -> f64 {
    let w = num_traits::Euclid::rem_euclid(&(g + PI), &TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Gate list over wires of fixed dimension plus a global-phase accumulator.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    dims: Vec<usize>,
    gates: Vec<Gate>,
    phase: f64,
    pub target: Option<String>,
    pub coupling: Option<f64>,
}

impl Circuit {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d != 2 && d != 3) {
            return Err(Error::Circuit(format!("wire dimensions must be 2 or 3, got {dims:?}")));
        }
        Ok(Self {
            dims,
            ..Self::default()
        })
    }

    pub fn with_metadata(mut self, target: impl Into<String>, coupling: f64) -> Self {
        self.target = Some(target.into());
        self.coupling = Some(coupling);
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(&self.dims)?;
        if gate.kind == GateKind::Phase {
            self.phase = wrap_phase(self.phase + gate.params[0]);
        } else {
            self.gates.push(gate);
        }
        Ok(())
    }

    pub fn add_phase(&mut self, g: f64) {
        self.phase = wrap_phase(self.phase + g);
    }

    /// Overwrites the accumulator; used by the text parser.
    pub fn set_phase(&mut self, g: f64) {
        self.phase = g;
    }

    /// `X^t = e^{iπt/2} Rx(πt)`.
    pub fn push_x_power(&mut self, t: f64, w: usize) -> Result<()> {
        self.push(Gate::rx(PI * t, w))?;
        self.add_phase(PI * t / 2.0);
        Ok(())
    }

    /// `Z^t = e^{iπt/2} Rz(πt)`.
    pub fn push_z_power(&mut self, t: f64, w: usize) -> Result<()> {
        self.push(Gate::rz(PI * t, w))?;
        self.add_phase(PI * t / 2.0);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.dims != self.dims {
            return Err(Error::Circuit(format!("cannot append circuit on {:?} to {:?}", other.dims, self.dims)));
        }
        self.gates.extend(other.gates.iter().cloned());
        self.add_phase(other.phase);
        Ok(())
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn entangling_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_entangling()).count()
    }

    pub fn single_wire_count(&self) -> usize {
        self.gates.len() - self.entangling_count()
    }

    pub fn validate(&self) -> Result<()> {
        Circuit::new(self.dims.clone())?;
        self.gates.iter().try_for_each(|g| g.validate(&self.dims))
    }
}

/// `e^{iγ} G_n ⋯ G_1`.
pub fn evaluate_circuit(circuit: &Circuit) -> Result<ComplexMatrix> {
    circuit.validate()?;
    let dims = circuit.dims();
    let total: usize = dims.iter().product();
    let mut u = ComplexMatrix::identity(total);
    for g in circuit.gates() {
        let local: Vec<usize> = g.wires.iter().map(|&w| dims[w]).collect();
        let full = embed(&g.matrix(&local), &g.wires, dims)?;
        u = &full * &u;
    }
    Ok(u.scale(cis(circuit.phase())))
}

/// Two-CNOT circuit for a qubit steering unitary, built from its Cartan
/// decomposition. The non-local core for `c = (c₁, c₂, 0)` is
/// `W · CNOT · (X^{−c₁/π} ⊗ Z^{−c₂/π}) · CNOT · W†` with `W = Rx(π/2)⊗Rx(π/2)`.
pub fn synth_kak_circuit(spec: &TargetSpec) -> Result<Circuit> {
    if let Target::Qutrit(_) = spec.target {
        return Err(Error::Unsupported("two-CNOT synthesis needs a qubit target".into()));
    }
    let op = make_steering_operator(spec)?;
    kak_circuit(op.unitary()).map(|c| c.with_metadata(spec.target.label(), spec.coupling))
}

/// Two-CNOT circuit for any two-qubit unitary with `c₃ = 0`.
pub fn kak_circuit(u: &ComplexMatrix) -> Result<Circuit> {
    let k = kak_decompose(u)?;
    if k.c[2].abs() > 1e-9 {
        return Err(Error::Unsupported(format!("interaction {:?} needs three CNOTs", k.c)));
    }
    let w = rx(FRAC_PI_2);
    let w_inv = rx(-FRAC_PI_2);
    let mut circ = Circuit::new(vec![2, 2])?;
    let mut phase = k.global_phase;
    for wire in 0..2 {
        let (a, alpha) = zyz_angles(&(&w_inv * &k.k2_local[wire]));
        circ.push(Gate::u3(a[0], a[1], a[2], wire))?;
        phase += alpha;
    }
    circ.push(Gate::cnot(0, 1))?;
    circ.push_x_power(-k.c[0] / PI, 0)?;
    circ.push_z_power(-k.c[1] / PI, 1)?;
    circ.push(Gate::cnot(0, 1))?;
    for wire in 0..2 {
        let (a, alpha) = zyz_angles(&(&k.k1_local[wire] * &w));
        circ.push(Gate::u3(a[0], a[1], a[2], wire))?;
        phase += alpha;
    }
    // The power gates already added e^{−i(c₁+c₂)/2}.
    circ.add_phase(phase + (k.c[0] + k.c[1]) / 2.0);
    Ok(circ)
}

/// `exp(−i·angle·P)` for a Pauli string `P`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliRotation {
    pub angle: f64,
    pub string: PauliString,
}

impl PauliRotation {
    pub fn new(angle: f64, string: PauliString) -> Self {
        Self { angle, string }
    }

    pub fn generator(&self) -> ComplexMatrix {
        self.string.matrix().scale_re(self.angle)
    }
}

/// Pauli rotations whose product (or Trotterized product) is the qubit
/// steering unitary `exp(−iH)`; zero terms are dropped.
pub fn steering_pauli_terms(theta: f64, phi: f64, coupling: f64) -> Result<Vec<PauliRotation>> {
    build_qubit_hamiltonian(theta, phi, coupling)?;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let h = coupling / 2.0;
    let p = |s: &str| s.parse::<PauliString>().expect("valid literal");
    let raw = [(-cp * ct, "XX"), (-cp, "YY"), (sp, "YX"), (st, "XZ"), (-sp * ct, "XY")];
    Ok(raw
        .into_iter()
        .filter(|(w, _)| w.abs() > 1e-14)
        .map(|(w, s)| PauliRotation::new(h * w, p(s)))
        .collect())
}

fn basis_change(p: Pauli, w: usize, inverse: bool) -> Option<Gate> {
    let s = if inverse { -1.0 } else { 1.0 };
    match p {
        Pauli::X => Some(Gate::u3(-s * FRAC_PI_2, 0.0, 0.0, w)),
        Pauli::Y => Some(Gate::rx(s * FRAC_PI_2, w)),
        _ => None,
    }
}

fn push_pauli_rotation(circ: &mut Circuit, rot: &PauliRotation) -> Result<()> {
    let support = rot.string.support();
    if support.is_empty() {
        circ.add_phase(-rot.angle);
        return Ok(());
    }
    for &w in &support {
        if let Some(g) = basis_change(rot.string.0[w], w, false) {
            circ.push(g)?;
        }
    }
    for pair in support.windows(2) {
        circ.push(Gate::cnot(pair[0], pair[1]))?;
    }
    circ.push(Gate::rz(2.0 * rot.angle, *support.last().expect("nonempty")))?;
    for pair in support.windows(2).rev() {
        circ.push(Gate::cnot(pair[0], pair[1]))?;
    }
    for &w in &support {
        if let Some(g) = basis_change(rot.string.0[w], w, true) {
            circ.push(g)?;
        }
    }
    Ok(())
}

/// Circuit for `exp(−i Σ angle_j P_j)`: an exact product when the strings
/// commute pairwise, otherwise `steps` first-order Trotter slices.
pub fn synth_pauli_string_circuit(terms: &[PauliRotation], steps: usize) -> Result<Circuit> {
    let n = terms.first().map(|t| t.string.len()).ok_or_else(|| Error::Circuit("no Pauli terms".into()))?;
    if terms.iter().any(|t| t.string.len() != n) {
        return Err(Error::Circuit("Pauli strings differ in length".into()));
    }
    if let Some(t) = terms.iter().find(|t| !t.angle.is_finite()) {
        return Err(Error::Circuit(format!("angle {} is not finite", t.angle)));
    }
    let commuting = terms.iter().enumerate().all(|(i, a)| terms[i + 1..].iter().all(|b| a.string.commutes_with(&b.string)));
    let slices = if commuting { 1 } else { steps.max(1) };
    let mut circ = Circuit::new(vec![2; n])?;
    for _ in 0..slices {
        for t in terms {
            push_pauli_rotation(&mut circ, &PauliRotation::new(t.angle / slices as f64, t.string.clone()))?;
        }
    }
    Ok(circ)
}

/// Qutrit unitary `V` with rows `⟨ψ|`, `⟨b|`, `⟨e|`: sends the target to
/// `|0⟩` and the coupled complement direction `b` to `|1⟩`.
fn frame_unitary(psi: &Ket, b: &Ket) -> ComplexMatrix {
    let (p, q) = (psi.0.iter().map(|z| z.conj()).collect::<Vec<_>>(), b.0.iter().map(|z| z.conj()).collect::<Vec<_>>());
    let e = [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]];
    ComplexMatrix::from_fn(3, |i, j| match i {
        0 => p[j],
        1 => q[j],
        _ => e[j].conj(),
    })
}

/// Givens rotation in `SU(2)` sending `(x, y)` to `(|(x,y)|, 0)`.
fn givens(x: C64, y: C64) -> ComplexMatrix {
    let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if n < 1e-300 {
        return ComplexMatrix::identity(2);
    }
    ComplexMatrix::from_rows([[x.conj() / n, y.conj() / n], [-y / n, x / n]])
}

fn two_level(g: &ComplexMatrix, low: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(3);
    for i in 0..2 {
        for j in 0..2 {
            out[(low + i, low + j)] = g[(i, j)];
        }
    }
    out
}

/// Steps of `V = G₁†·G₂†·G₃†·D`: `(subspace low level, SU(2) block)` and the
/// diagonal phases of `D`.
fn reduce_qutrit(v: &ComplexMatrix) -> (Vec<(usize, ComplexMatrix)>, [f64; 3]) {
    let mut m = v.clone();
    let mut steps = Vec::new();
    for (low, col) in [(1, 0), (0, 0), (1, 1)] {
        let g = givens(m[(low, col)], m[(low + 1, col)]);
        m = &two_level(&g, low) * &m;
        steps.push((low, g));
    }
    (steps, [m[(0, 0)].arg(), m[(1, 1)].arg(), m[(2, 2)].arg()])
}

fn push_su2_on_qutrit(circ: &mut Circuit, low: usize, g: &ComplexMatrix, w: usize) -> Result<()> {
    if low == 0 {
        let (a, _) = zyz_angles(g);
        circ.push(Gate::u3(a[0], a[1], a[2], w))
    } else {
        let (a, _) = zxz_angles(g);
        circ.push(Gate::rz12(a[2], w))?;
        circ.push(Gate::rx12(a[1], w))?;
        circ.push(Gate::rz12(a[0], w))
    }
}

fn push_qutrit_diagonal(circ: &mut Circuit, delta: [f64; 3], w: usize) -> Result<()> {
    let g = (delta[0] + delta[1] + delta[2]) / 3.0;
    circ.push(Gate::rz(2.0 * (g - delta[0]), w))?;
    circ.push(Gate::rz12(2.0 * (delta[2] - g), w))?;
    circ.add_phase(g);
    Ok(())
}

/// Gates for the qutrit unitary `V` (or `V†`), exact including phase.
fn push_qutrit_unitary(circ: &mut Circuit, v: &ComplexMatrix, w: usize, adjoint: bool) -> Result<()> {
    let (steps, delta) = reduce_qutrit(v);
    if adjoint {
        // V† = D†·G₃·G₂·G₁.
        for (low, g) in &steps {
            push_su2_on_qutrit(circ, *low, g, w)?;
        }
        push_qutrit_diagonal(circ, delta.map(|d| -d), w)
    } else {
        push_qutrit_diagonal(circ, delta, w)?;
        for (low, g) in steps.iter().rev() {
            push_su2_on_qutrit(circ, *low, &g.adjoint(), w)?;
        }
        Ok(())
    }
}

/// `exp(−iφ Z ⊗ Z₀₁)` via `CNOTqq · Rz₀₁(2φ) · CNOTqq³`.
fn push_zz01(circ: &mut Circuit, phi: f64) -> Result<()> {
    circ.push(Gate::cnot_qq(0, 1))?;
    circ.push(Gate::rz(2.0 * phi, 1))?;
    for _ in 0..3 {
        circ.push(Gate::cnot_qq(0, 1))?;
    }
    Ok(())
}

/// Qubit–qutrit steering circuit. In the frame `V` the coupling is
/// `√2 J (X⊗X₀₁ + Y⊗Y₀₁)/2`, realised as two commuting exchange rotations.
pub fn synth_qutrit_circuit(spec: &TargetSpec) -> Result<Circuit> {
    let target = match &spec.target {
        Target::Qutrit(t) => t,
        Target::Qubit(_) => return Err(Error::Unsupported("qutrit synthesis needs a qutrit target".into())),
    };
    let mut circ = qutrit_circuit(target, spec.coupling)?;
    circ = circ.with_metadata(spec.target.label(), spec.coupling);
    Ok(circ)
}

fn qutrit_circuit(target: &QutritTarget, coupling: f64) -> Result<Circuit> {
    let h = build_qutrit_hamiltonian(target);
    let psi = target.ket();
    // Coupled direction w = block·ψ, with block = ⟨0|_A H |1⟩_A.
    let w = Ket((0..3).map(|i| (0..3).map(|j| h[(i, 3 + j)] * psi[j]).sum()).collect());
    let norm = w.norm();
    if (norm - SQRT_2).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("coupled direction has norm {norm}, expected √2")));
    }
    let v = frame_unitary(&psi, &w.normalized());
    let phi = SQRT_2 * coupling / 2.0;

    let mut circ = Circuit::new(vec![2, 3])?;
    push_qutrit_unitary(&mut circ, &v, 1, false)?;
    for p in [Pauli::X, Pauli::Y] {
        for wire in 0..2 {
            if let Some(g) = basis_change(p, wire, false) {
                circ.push(g)?;
            }
        }
        push_zz01(&mut circ, phi)?;
        for wire in 0..2 {
            if let Some(g) = basis_change(p, wire, true) {
                circ.push(g)?;
            }
        }
    }
    push_qutrit_unitary(&mut circ, &v, 1, true)?;
    Ok(circ)
}
