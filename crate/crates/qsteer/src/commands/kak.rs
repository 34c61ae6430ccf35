use qsteer_core::circuits::{evaluate_circuit, parse_text};
use qsteer_core::geometry::{chamber_distance, kak_decompose, locally_equivalent, weyl_coordinates};
use qsteer_core::states::Target;
use qsteer_core::steering::{make_steering_operator, TargetSpec};
use qsteer_core::ComplexMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Output, ResultBundle};
use crate::table::{Cell, Table};

#[derive(Serialize)]
struct KakRow {
    label: String,
    coupling: Option<f64>,
    /// Interaction coefficients as returned by the decomposition.
    c: [f64; 3],
    /// Canonical Weyl-chamber point.
    weyl: [f64; 3],
    k1_local: [ComplexMatrix; 2],
    k2_local: [ComplexMatrix; 2],
    global_phase: f64,
    reassembly_error: f64,
    cnot_equivalent: bool,
    cphase_equivalent: bool,
    distance_to_cnot_class: f64,
}

fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]])
}

fn cphase() -> ComplexMatrix {
    ComplexMatrix::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, -1.0]])
}

fn named_gate(name: &str) -> CliResult<ComplexMatrix> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "cnot" | "cx" => cnot(),
        "cz" | "cphase" => cphase(),
        "swap" => ComplexMatrix::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]),
        "identity" | "id" => ComplexMatrix::identity(4),
        other => return Err(CliError::config(format!("unknown gate {other:?} (cnot, cz, swap, identity)"))),
    })
}

fn analyse(label: String, coupling: Option<f64>, u: &ComplexMatrix) -> CliResult<KakRow> {
    let kak = kak_decompose(u)?;
    let weyl = weyl_coordinates(u)?;
    Ok(KakRow {
        label,
        coupling,
        c: kak.c,
        weyl,
        reassembly_error: kak.reassemble().max_abs_diff(u),
        k1_local: kak.k1_local,
        k2_local: kak.k2_local,
        global_phase: kak.global_phase,
        cnot_equivalent: locally_equivalent(u, &cnot())?,
        cphase_equivalent: locally_equivalent(u, &cphase())?,
        distance_to_cnot_class: chamber_distance(weyl, weyl_coordinates(&cnot())?),
    })
}

/// Decomposes a named gate, a circuit file, or steering unitaries over every
/// target × J.
pub fn cmd_kak(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let mut rows = Vec::new();
    if let Some(g) = &cfg.gate {
        rows.push(analyse(g.clone(), None, &named_gate(g)?)?);
    }
    if let Some(path) = &cfg.circuit {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let circuit = parse_text(&text)?;
        if circuit.dims() != [2, 2] {
            return Err(CliError::config(format!("{}: kak needs a two-qubit circuit", path.display())));
        }
        rows.push(analyse(path.display().to_string(), circuit.coupling, &evaluate_circuit(&circuit)?)?);
    }
    if !cfg.target.is_empty() {
        for target in cfg.targets()? {
            if !matches!(target, Target::Qubit(_)) {
                return Err(CliError::config("kak needs a qubit target (the unitary must be two-qubit)"));
            }
            for &j in cfg.couplings()? {
                let op = make_steering_operator(&TargetSpec::new(target.clone(), j)?)?;
                rows.push(analyse(target.label(), Some(j), op.unitary())?);
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::config("kak needs a gate, a circuit file, or a target and J"));
    }

    let mut table = Table::new(&["label", "J", "c1", "c2", "c3", "cnot_equivalent", "cphase_equivalent"]);
    for r in &rows {
        table.push(vec![
            r.label.as_str().into(),
            r.coupling.map_or(Cell::Text(String::new()), Cell::Float),
            r.weyl[0].into(),
            r.weyl[1].into(),
            r.weyl[2].into(),
            r.cnot_equivalent.into(),
            r.cphase_equivalent.into(),
        ]);
    }
    out.table("kak", &table)?;
    let headline = json!({
        "rows": rows.len(),
        "max_reassembly_error": rows.iter().map(|r| r.reassembly_error).fold(0.0, f64::max),
    });
    out.json("kak.json", &ResultBundle::new("kak", cfg, rows))?;
    Ok(headline)
}
