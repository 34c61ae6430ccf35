use std::collections::BTreeMap;

use qsteer_core::circuits::{
    emit_text, evaluate_circuit, parse_text, steering_pauli_terms, synth_kak_circuit, synth_pauli_string_circuit,
    synth_qutrit_circuit, Circuit, GateKind, DEFAULT_TROTTER_STEPS,
};
use qsteer_core::linalg::phase_invariant_distance;
use qsteer_core::states::Target;
use qsteer_core::steering::make_steering_operator;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Output, ResultBundle};

#[derive(Serialize)]
struct CircuitReport {
    target: String,
    coupling: f64,
    method: Method,
    trotter_steps: Option<usize>,
    dims: Vec<usize>,
    gate_counts: BTreeMap<&'static str, usize>,
    entangling: usize,
    single_wire: usize,
    phase: f64,
    /// `1 − |Tr(U†V)|/d` between the circuit and `exp(−iH)`.
    phase_invariant_distance: f64,
    text_roundtrip: bool,
}

/// Synthesizes the steering circuit, writes it as text and checks it
/// against the exact unitary.
pub fn cmd_circuit(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let spec = cfg.single_spec()?;
    let method = match (cfg.method, &spec.target) {
        (Method::Auto, Target::Qubit(_)) => Method::Kak,
        (Method::Auto, Target::Qutrit(_)) => Method::Qutrit,
        (m, _) => m,
    };
    let mut steps = None;
    let circuit: Circuit = match (method, &spec.target) {
        (Method::Kak, _) => synth_kak_circuit(&spec)?,
        (Method::Qutrit, _) => synth_qutrit_circuit(&spec)?,
        (Method::Pauli, Target::Qubit(q)) => {
            let r = cfg.trotter_steps.unwrap_or(DEFAULT_TROTTER_STEPS);
            steps = Some(r);
            let terms = steering_pauli_terms(q.theta(), q.phi(), spec.coupling)?;
            synth_pauli_string_circuit(&terms, r)?.with_metadata(spec.target.label(), spec.coupling)
        }
        (Method::Pauli, Target::Qutrit(_)) => {
            return Err(CliError::config("Pauli-string synthesis needs a qubit target"));
        }
        (Method::Auto, _) => unreachable!("resolved above"),
    };
    let op = make_steering_operator(&spec)?;
    let distance = phase_invariant_distance(&evaluate_circuit(&circuit)?, op.unitary())?;
    let text = emit_text(&circuit);
    let text_roundtrip = parse_text(&text).map(|c| emit_text(&c) == text).unwrap_or(false);
    out.text("circuit.txt", &text)?;

    let gate_counts = GateKind::ALL
        .iter()
        .filter(|&&k| k != GateKind::Phase)
        .map(|&k| (k.name(), circuit.count(k)))
        .filter(|&(_, n)| n > 0)
        .collect();
    let report = CircuitReport {
        target: spec.target.label(),
        coupling: spec.coupling,
        method,
        trotter_steps: steps,
        dims: circuit.dims().to_vec(),
        gate_counts,
        entangling: circuit.entangling_count(),
        single_wire: circuit.single_wire_count(),
        phase: circuit.phase(),
        phase_invariant_distance: distance,
        text_roundtrip,
    };
    let headline = json!({ "phase_invariant_distance": distance, "entangling": report.entangling });
    out.json("circuit.json", &ResultBundle::new("circuit", cfg, report))?;
    Ok(headline)
}
