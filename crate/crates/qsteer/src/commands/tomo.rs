use qsteer_core::protocol::CycleChannel;
use qsteer_core::rng::SplitMix64;
use qsteer_core::states::fidelity;
use qsteer_core::steering::make_steering_operator;
use qsteer_core::tomography::{state_fidelity, state_tomography, ShotCounts, Shots};
use qsteer_core::DensityState;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::batch::initial_key;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Output, ResultBundle};
use crate::table::Table;

#[derive(Serialize)]
struct TomoStep {
    n: usize,
    exact_fidelity: f64,
    /// `⟨ψ|ρ_lin|ψ⟩` from the unprojected estimate.
    linear_fidelity: f64,
    sigma: f64,
    /// Fidelity of the projected estimate with the target.
    mle_fidelity: f64,
    /// Fidelity of the projected estimate with the exact state.
    state_fidelity: f64,
    expectations: Vec<f64>,
    std_errors: Vec<f64>,
    counts: Vec<ShotCounts>,
    exact: DensityState,
    reconstructed: DensityState,
}

/// Blind run followed by state tomography after every cycle.
pub fn cmd_tomo(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let spec = cfg.single_spec()?;
    let n_steps = cfg.n_steps.unwrap_or(0);
    let op = make_steering_operator(&spec)?;
    let channel = CycleChannel::new(&op, &cfg.noise)?;
    let dim = spec.target.dim();
    let shots = cfg.shots.map_or(Shots::Infinite, Shots::Finite);

    let mut states = vec![cfg.initial.sample(dim, initial_key(cfg.seed), 0)];
    for _ in 0..n_steps {
        let next = channel.apply(states.last().expect("nonempty").matrix());
        states.push(DensityState::from_raw(next, vec![dim])?);
    }
    let steps: Vec<TomoStep> = states
        .into_par_iter()
        .enumerate()
        .map(|(n, rho)| -> CliResult<TomoStep> {
            let seed = SplitMix64::stream(cfg.seed, n as u64).next_u64();
            let est = state_tomography(&rho, shots, cfg.tomography_confusion.as_ref(), seed)?;
            let (linear_fidelity, sigma) = est.linear_fidelity(op.target())?;
            Ok(TomoStep {
                n,
                exact_fidelity: fidelity(&rho, op.target())?,
                linear_fidelity,
                sigma,
                mle_fidelity: fidelity(&est.state, op.target())?,
                state_fidelity: state_fidelity(&est.state, &rho)?,
                expectations: est.expectations,
                std_errors: est.std_errors,
                counts: est.counts,
                exact: rho,
                reconstructed: est.state,
            })
        })
        .collect::<CliResult<_>>()?;

    let mut table = Table::new(&["n", "exact_fid", "linear_fid", "sigma", "mle_fid", "within_3sigma"]);
    for s in &steps {
        let within = (s.linear_fidelity - s.exact_fidelity).abs() <= 3.0 * s.sigma + 1e-12;
        table.push(vec![
            s.n.into(),
            s.exact_fidelity.into(),
            s.linear_fidelity.into(),
            s.sigma.into(),
            s.mle_fidelity.into(),
            within.into(),
        ]);
    }
    out.table("tomo", &table)?;
    let last = steps.last().expect("at least the initial state");
    let headline = json!({ "final_exact_fidelity": last.exact_fidelity, "final_mle_fidelity": last.mle_fidelity });
    out.json("tomo.json", &ResultBundle::new("tomo", cfg, steps))?;
    Ok(headline)
}
