use qsteer_core::protocol::{repetition_stats, CycleChannel, RepetitionStats, Run, RunMode, RunRecord};
use qsteer_core::states::fidelity;
use qsteer_core::steering::make_steering_operator;
use serde::Serialize;
use serde_json::{json, Value};

use super::mean_std;
use crate::batch::{blind_runs, initial_key, trajectories};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Output, ResultBundle};
use crate::table::Table;

#[derive(Serialize)]
struct RepetitionSummary {
    #[serde(flatten)]
    stats: RepetitionStats,
    fitted_geometric_p: Option<f64>,
    ks_distance_geometric: Option<f64>,
}

#[derive(Serialize)]
struct SteerResults {
    target: String,
    coupling: f64,
    n_steps: usize,
    mode: RunMode,
    final_mean_fidelity: f64,
    /// Fidelity of the channel's fixed point (absent when not unique).
    fixed_point_fidelity: Option<f64>,
    repetitions: Option<RepetitionSummary>,
    records: Vec<RunRecord>,
}

/// Fidelity after `n` cycles; a trajectory that stopped early keeps its
/// last value.
fn held(record: &RunRecord, n: usize) -> f64 {
    let f = &record.fidelities;
    f[n.min(f.len() - 1)]
}

pub fn cmd_steer(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let spec = cfg.single_spec()?;
    let n_steps = cfg.n_steps()?;
    let op = make_steering_operator(&spec)?;
    let dim = spec.target.dim();
    let key = initial_key(cfg.seed);
    let label = spec.target.label();

    let runs: Vec<Run> = match cfg.mode {
        RunMode::Blind => {
            let initial: Vec<_> = (0..cfg.repeats as u64).map(|r| cfg.initial.sample(dim, key, r)).collect();
            blind_runs(&op, n_steps, &cfg.noise, &initial)?
        }
        RunMode::NonBlind => trajectories(&op, n_steps, &cfg.noise, cfg.seed, cfg.trajectories, cfg.stop, |i| {
            cfg.initial.sample(dim, key, i)
        })?,
    };
    let records: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();

    let stats = (cfg.mode == RunMode::NonBlind).then(|| repetition_stats(&records));
    let mut columns = vec!["target", "J", "n", "mean_fid", "std"];
    if stats.is_some() {
        columns.push("cdf");
    }
    let mut table = Table::new(&columns);
    let mut final_mean = 0.0;
    for n in 0..=n_steps {
        let fs: Vec<f64> = records.iter().map(|r| held(r, n)).collect();
        let (mean, std) = mean_std(&fs);
        final_mean = mean;
        let mut row = vec![label.as_str().into(), spec.coupling.into(), n.into(), mean.into(), std.into()];
        if stats.is_some() {
            let done = records.iter().filter(|r| r.repetitions_to_success.is_some_and(|k| k <= n)).count();
            row.push((done as f64 / records.len() as f64).into());
        }
        table.push(row);
    }
    out.table("fidelity_vs_n", &table)?;

    let repetitions = stats.map(|stats| {
        let p = stats.fitted_geometric_p();
        RepetitionSummary {
            fitted_geometric_p: p,
            ks_distance_geometric: p.map(|p| stats.ks_distance_geometric(p)),
            stats,
        }
    });
    if let Some(rep) = &repetitions {
        let mut hist = Table::new(&["repetitions", "count", "frequency", "cdf"]);
        let total = records.len() as f64;
        let mut cum = 0;
        for &(k, count) in &rep.stats.histogram {
            cum += count;
            hist.push(vec![k.into(), count.into(), (count as f64 / total).into(), (cum as f64 / total).into()]);
        }
        out.table("repetitions_hist", &hist)?;
    }

    let fixed_point_fidelity = CycleChannel::new(&op, &cfg.noise)?
        .fixed_point()
        .ok()
        .and_then(|rho| fidelity(&rho, op.target()).ok());
    let results = SteerResults {
        target: label,
        coupling: spec.coupling,
        n_steps,
        mode: cfg.mode,
        final_mean_fidelity: final_mean,
        fixed_point_fidelity,
        repetitions,
        records,
    };
    let headline = json!({
        "final_mean_fidelity": results.final_mean_fidelity,
        "mean_repetitions": results.repetitions.as_ref().and_then(|r| r.stats.mean),
    });
    out.json("records.json", &ResultBundle::new("steer", cfg, results))?;
    Ok(headline)
}
