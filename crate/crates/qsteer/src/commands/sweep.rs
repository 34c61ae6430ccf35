use qsteer_core::protocol::{sweep, SweepConfig, SweepTable};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::batch::initial_key;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Output, ResultBundle};
use crate::table::Table;

/// Blind sweep over targets × J; each J runs on its own thread.
pub fn cmd_sweep(cfg: &RunConfig, out: &mut Output) -> CliResult<Value> {
    let targets = cfg.targets_or_catalog()?;
    let couplings = cfg.couplings()?;
    let n_steps = cfg.n_steps()?;
    let parts: Vec<SweepTable> = couplings
        .par_iter()
        .map(|&j| {
            sweep(&SweepConfig {
                targets: targets.clone(),
                couplings: vec![j],
                n_steps,
                noise: cfg.noise.clone(),
                repeats: cfg.repeats,
                initial: cfg.initial,
                seed: initial_key(cfg.seed),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut merged = SweepTable::default();
    for p in parts {
        merged.rows.extend(p.rows);
        merged.averages.extend(p.averages);
    }

    let mut table = Table::new(&["target", "J", "n", "mean_fid", "std", "avg_fid"]);
    for row in &merged.rows {
        let avg = merged
            .averages
            .iter()
            .find(|a| a.coupling == row.coupling && a.n == row.n)
            .map_or(f64::NAN, |a| a.mean_fidelity);
        table.push(vec![
            row.target.as_str().into(),
            row.coupling.into(),
            row.n.into(),
            row.mean_fidelity.into(),
            row.std.into(),
            avg.into(),
        ]);
    }
    out.table("sweep", &table)?;
    let headline = json!({ "rows": merged.rows.len(), "targets": targets.len(), "couplings": couplings.len() });
    out.json("sweep.json", &ResultBundle::new("sweep", cfg, merged))?;
    Ok(headline)
}
