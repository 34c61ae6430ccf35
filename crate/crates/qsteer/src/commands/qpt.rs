use qsteer_core::linalg::{embed, ComplexMatrix};
use qsteer_core::protocol::{amplitude_damping_kraus, depolarizing_kraus_qubit, NoiseConfig};
use qsteer_core::states::Target;
use qsteer_core::steering::make_steering_operator;
use qsteer_core::tomography::{average_gate_fidelity, process_tomography, PauliTransferMatrix, Shots};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Channel, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Output, ResultBundle};
use crate::table::Table;

#[derive(Serialize)]
struct QptResults {
    method: &'static str,
    channel: Channel,
    n_qubits: usize,
    ptm: PauliTransferMatrix,
    linear: PauliTransferMatrix,
    ideal: PauliTransferMatrix,
    /// `error_channel` when the ideal map is invertible (`R·R_ideal⁻¹`
    /// compared with the identity), `difference` otherwise (`R − R_ideal`).
    deviation_kind: &'static str,
    deviation: Vec<Vec<f64>>,
    max_deviation: f64,
    min_choi_eigenvalue: f64,
    average_gate_fidelity: f64,
    process_fidelity: f64,
}

/// `{B_j A_i}`: apply `first`, then `then`.
fn compose(first: &[ComplexMatrix], then: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    then.iter().flat_map(|b| first.iter().map(move |a| b * a)).collect()
}

/// Depolarizing then amplitude damping on every wire.
fn wire_noise(noise: &NoiseConfig, wires: usize) -> CliResult<Vec<ComplexMatrix>> {
    let d = 1usize << wires;
    let dims = vec![2; wires];
    let mut ks = vec![ComplexMatrix::identity(d)];
    for w in 0..wires {
        if noise.depolarizing_p > 0.0 {
            let local: Vec<_> = depolarizing_kraus_qubit(noise.depolarizing_p)
                .iter()
                .map(|k| embed(k, &[w], &dims))
                .collect::<Result<_, _>>()?;
            ks = compose(&ks, &local);
        }
    }
    for w in 0..wires {
        if noise.amplitude_damping_gamma > 0.0 {
            let local: Vec<_> = amplitude_damping_kraus(2, noise.amplitude_damping_gamma)
                .iter()
                .map(|k| embed(k, &[w], &dims))
                .collect::<Result<_, _>>()?;
            ks = compose(&ks, &local);
        }
    }
    Ok(ks)
}

/// Kraus set, wire count and ideal PTM of the configured channel.
fn build(cfg: &RunConfig, channel: &Channel) -> CliResult<(Vec<ComplexMatrix>, usize, PauliTransferMatrix)> {
    cfg.noise.validate(2)?;
    let qubit_op = || -> CliResult<_> {
        let spec = cfg.single_spec()?;
        if !matches!(spec.target, Target::Qubit(_)) {
            return Err(CliError::config("process tomography needs a qubit target"));
        }
        Ok(make_steering_operator(&spec)?)
    };
    Ok(match channel {
        Channel::Identity { wires } => {
            if !(1..=2).contains(wires) {
                return Err(CliError::config("identity channel needs 1 or 2 wires"));
            }
            let ks = compose(&[ComplexMatrix::identity(1 << wires)], &wire_noise(&cfg.noise, *wires)?);
            (ks, *wires, PauliTransferMatrix::identity(*wires))
        }
        Channel::Depolarizing { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(CliError::config(format!("depolarizing p = {p} outside [0, 1]")));
            }
            (depolarizing_kraus_qubit(*p), 1, PauliTransferMatrix::identity(1))
        }
        Channel::Steering => {
            let u = qubit_op()?.unitary().clone();
            let ideal = PauliTransferMatrix::from_unitary(&u)?;
            (compose(&[u], &wire_noise(&cfg.noise, 2)?), 2, ideal)
        }
        Channel::Cycle => {
            let op = qubit_op()?;
            let ideal = PauliTransferMatrix::from_kraus(op.kraus().operators())?;
            let steering = if cfg.noise.reset_error > 0.0 {
                op.kraus_with_reset_error(cfg.noise.reset_error)?
            } else {
                op.kraus()
            };
            (compose(steering.operators(), &wire_noise(&cfg.noise, 1)?), 1, ideal)
        }
    })
}

pub fn cmd_qpt(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let channel = cfg.channel.clone().unwrap_or(Channel::Steering);
    let (kraus, n_qubits, ideal) = build(cfg, &channel)?;
    let shots = cfg.shots.map_or(Shots::Infinite, Shots::Finite);
    let est = process_tomography(&kraus, n_qubits, shots, cfg.tomography_confusion.as_ref(), cfg.seed)?;

    let (deviation_kind, deviation) = match ideal.inverse() {
        Ok(inv) => ("error_channel", est.ptm.compose(&inv)?.deviation_from_identity()),
        Err(_) => (
            "difference",
            est.ptm
                .r
                .iter()
                .zip(&ideal.r)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
                .collect(),
        ),
    };
    let max_deviation = deviation.iter().flatten().fold(0.0, |m: f64, &x| m.max(x));
    let labels: Vec<String> = est.ptm.labels().iter().map(|s| s.to_string()).collect();
    out.table("ptm", &Table::matrix(&labels, &est.ptm.r))?;
    out.table("ptm_deviation", &Table::matrix(&labels, &deviation))?;

    let results = QptResults {
        method: est.method,
        channel,
        n_qubits,
        average_gate_fidelity: average_gate_fidelity(&est.ptm, &ideal)?,
        process_fidelity: est.ptm.process_fidelity(&ideal)?,
        ptm: est.ptm,
        linear: est.linear,
        ideal,
        deviation_kind,
        deviation,
        max_deviation,
        min_choi_eigenvalue: est.min_choi_eigenvalue,
    };
    let headline = json!({
        "average_gate_fidelity": results.average_gate_fidelity,
        "max_deviation": max_deviation,
        "deviation_kind": deviation_kind,
    });
    out.json("qpt.json", &ResultBundle::new("qpt", cfg, results))?;
    Ok(headline)
}
