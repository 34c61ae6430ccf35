//! The six subcommands.

mod circuit;
mod kak;
mod qpt;
mod steer;
mod sweep;
mod tomo;

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Output;

pub use circuit::cmd_circuit;
pub use kak::cmd_kak;
pub use qpt::cmd_qpt;
pub use steer::cmd_steer;
pub use sweep::cmd_sweep;
pub use tomo::cmd_tomo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Steer,
    Sweep,
    Kak,
    Circuit,
    Tomo,
    Qpt,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Steer => "steer",
            Command::Sweep => "sweep",
            Command::Kak => "kak",
            Command::Circuit => "circuit",
            Command::Tomo => "tomo",
            Command::Qpt => "qpt",
        }
    }
}

/// What a command wrote, plus a few headline numbers for stdout.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub out: String,
    pub files: Vec<String>,
    pub headline: Value,
}

pub fn run_command(command: Command, cfg: &RunConfig, out_dir: &Path) -> CliResult<Summary> {
    cfg.check()?;
    let mut out = Output::create(out_dir, cfg.format)?;
    let headline = match command {
        Command::Steer => cmd_steer(cfg, &mut out)?,
        Command::Sweep => cmd_sweep(cfg, &mut out)?,
        Command::Kak => cmd_kak(cfg, &mut out)?,
        Command::Circuit => cmd_circuit(cfg, &mut out)?,
        Command::Tomo => cmd_tomo(cfg, &mut out)?,
        Command::Qpt => cmd_qpt(cfg, &mut out)?,
    };
    Ok(Summary {
        command: command.name(),
        out: out.dir().display().to_string(),
        files: out.files().to_vec(),
        headline,
    })
}

/// Mean and sample standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
