//! JSON run configuration shared by every command.
//!
//! Unknown keys are rejected. Command-line flags override file values; the
//! merged configuration is echoed into every JSON result so a run can be
//! replayed from its own output.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use qsteer_core::protocol::{InitialState, NoiseConfig, RunMode, StopRule};
use qsteer_core::readout::ConfusionMatrix;
use qsteer_core::states::{stabilizer_catalog, Target};
use qsteer_core::steering::TargetSpec;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Circuit synthesis route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `kak` for qubit targets, `qutrit` otherwise.
    #[default]
    Auto,
    Kak,
    Pauli,
    Qutrit,
}

/// Channel reconstructed by process tomography.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Channel {
    Identity {
        #[serde(default = "one")]
        wires: usize,
    },
    Depolarizing {
        p: f64,
    },
    /// The two-qubit steering unitary (ancilla first), followed by the
    /// configured noise on each wire.
    Steering,
    /// One averaged protocol cycle acting on the system qubit.
    Cycle,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog labels or explicit angle tuples.
    #[serde(deserialize_with = "one_or_many")]
    pub target: Vec<String>,
    #[serde(rename = "J", deserialize_with = "one_or_many")]
    pub coupling: Vec<f64>,
    #[serde(rename = "N")]
    pub n_steps: Option<usize>,
    pub mode: RunMode,
    pub trajectories: usize,
    /// Initial states per blind run or sweep cell.
    pub repeats: usize,
    pub initial: InitialState,
    pub stop: StopRule,
    pub noise: NoiseConfig,
    pub seed: u64,
    /// Shots per measurement setting; absent means exact expectations.
    pub shots: Option<usize>,
    pub channel: Option<Channel>,
    pub method: Method,
    pub trotter_steps: Option<usize>,
    /// Named two-qubit gate for `kak`.
    pub gate: Option<String>,
    /// Circuit text file for `kak`.
    pub circuit: Option<PathBuf>,
    pub tomography_confusion: Option<ConfusionMatrix>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            target: Vec::new(),
            coupling: Vec::new(),
            n_steps: None,
            mode: RunMode::Blind,
            trajectories: 1000,
            repeats: 1,
            initial: InitialState::Ground,
            stop: StopRule::FirstOne,
            noise: NoiseConfig::default(),
            seed: 0,
            shots: None,
            channel: None,
            method: Method::Auto,
            trotter_steps: None,
            gate: None,
            circuit: None,
            tomography_confusion: None,
            out: None,
            format: Format::Csv,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn one_or_many<'de, D, T>(d: D) -> Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::from_json(&read(path)?).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn targets(&self) -> CliResult<Vec<Target>> {
        self.target
            .iter()
            .map(|t| Target::parse(t).map_err(|e| CliError::config(format!("target {t:?}: {e}"))))
            .collect()
    }

    /// Targets, or the six-state stabilizer catalog when none are given.
    pub fn targets_or_catalog(&self) -> CliResult<Vec<Target>> {
        if self.target.is_empty() {
            Ok(stabilizer_catalog().iter().map(|e| Target::Qubit(e.target())).collect())
        } else {
            self.targets()
        }
    }

    pub fn n_steps(&self) -> CliResult<usize> {
        match self.n_steps {
            Some(n) if n > 0 => Ok(n),
            Some(_) => Err(CliError::config("N must be at least 1")),
            None => Err(CliError::config("N is required")),
        }
    }

    pub fn couplings(&self) -> CliResult<&[f64]> {
        if self.coupling.is_empty() {
            return Err(CliError::config("J is required"));
        }
        if let Some(j) = self.coupling.iter().find(|j| !j.is_finite()) {
            return Err(CliError::config(format!("J = {j} is not finite")));
        }
        Ok(&self.coupling)
    }

    /// Exactly one target and one coupling.
    pub fn single_spec(&self) -> CliResult<TargetSpec> {
        let targets = self.targets()?;
        let couplings = self.couplings()?;
        match (targets.as_slice(), couplings) {
            ([t], [j]) => Ok(TargetSpec::new(t.clone(), *j)?),
            ([], _) => Err(CliError::config("target is required")),
            _ => Err(CliError::config("this command takes a single target and a single J")),
        }
    }

    pub fn check(&self) -> CliResult<()> {
        if self.repeats == 0 {
            return Err(CliError::config("repeats must be at least 1"));
        }
        if self.trajectories == 0 {
            return Err(CliError::config("trajectories must be at least 1"));
        }
        if self.shots == Some(0) {
            return Err(CliError::config("shots must be at least 1 (omit for exact expectations)"));
        }
        if self.trotter_steps == Some(0) {
            return Err(CliError::config("trotter_steps must be at least 1"));
        }
        Ok(())
    }
}

/// Reads a noise block from its own JSON file.
pub fn load_noise(path: &Path) -> CliResult<NoiseConfig> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::config(format!("{}: invalid noise: {e}", path.display())))
}

/// Parses `a,b,c`, `start:stop:count` (inclusive linspace) or a mix; `pi`
/// and `pi/k` are accepted as literals.
pub fn parse_couplings(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [x] => out.push(parse_angle(x)?),
            [a, b, n] => {
                let (a, b) = (parse_angle(a)?, parse_angle(b)?);
                let n: usize = n.trim().parse().map_err(|_| format!("bad count in {part:?}"))?;
                match n {
                    0 => return Err(format!("empty range {part:?}")),
                    1 => out.push(a),
                    _ => out.extend((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64)),
                }
            }
            _ => return Err(format!("bad coupling {part:?}")),
        }
    }
    if out.is_empty() {
        return Err(String::from("no coupling given"));
    }
    Ok(out)
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let d: f64 = den.trim().parse().map_err(|_| format!("bad angle {s:?}"))?;
            parse_angle(num)? / d
        }
        None if s == "pi" => PI,
        None => s.parse().map_err(|_| format!("bad angle {s:?}"))?,
    };
    Ok(value)
}

/// `first-one`, `never` or `fidelity:F`.
pub fn parse_stop(text: &str) -> Result<StopRule, String> {
    match text.trim() {
        "first-one" | "first_one" => Ok(StopRule::FirstOne),
        "never" => Ok(StopRule::Never),
        other => other
            .strip_prefix("fidelity:")
            .and_then(|f| f.parse().ok())
            .map(StopRule::FidelityAtLeast)
            .ok_or_else(|| format!("bad stop rule {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::from_json(r#"{"target": "+", "J": 1.5, "N": 3}"#).unwrap();
        assert_eq!(c.target, vec!["+"]);
        assert_eq!(c.coupling, vec![1.5]);
        assert_eq!(c.n_steps, Some(3));
        assert_eq!(c.mode, RunMode::Blind);
        let c = RunConfig::from_json(r#"{"target": ["0", "1"], "J": [0.1, 0.2], "mode": "nonblind"}"#).unwrap();
        assert_eq!(c.target.len(), 2);
        assert_eq!(c.mode, RunMode::NonBlind);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::from_json(r#"{"target": "+", "coupling": 1.0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"noise": {"depolarising_p": 0.1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"channel": {"kind": "depolarizing", "p": 0.1, "q": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"mode": "sometimes"}"#).is_err());
    }

    #[test]
    fn echo_roundtrips() {
        let mut c = RunConfig::from_json(
            r#"{"target": "i", "J": [0.25], "N": 4, "stop": {"fidelity_at_least": 0.9},
                "noise": {"depolarizing_p": 0.01, "readout_confusion": {"rows": [[0.9, 0.1], [0.2, 0.8]]}},
                "channel": {"kind": "identity"}, "shots": 100}"#,
        )
        .unwrap();
        c.out = None;
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        assert_eq!(c.channel, Some(Channel::Identity { wires: 1 }));
    }

    #[test]
    fn couplings_and_stops() {
        assert_eq!(parse_couplings("0.5, 1").unwrap(), vec![0.5, 1.0]);
        assert_eq!(parse_couplings("pi/2").unwrap(), vec![PI / 2.0]);
        let g = parse_couplings("0:1:5").unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_couplings("1:2").is_err());
        assert!(parse_couplings("").is_err());
        assert_eq!(parse_stop("never").unwrap(), StopRule::Never);
        assert_eq!(parse_stop("fidelity:0.9").unwrap(), StopRule::FidelityAtLeast(0.9));
        assert!(parse_stop("later").is_err());
    }

    #[test]
    fn single_spec_errors() {
        let mut c = RunConfig::default();
        assert!(matches!(c.single_spec(), Err(CliError::Config(_))));
        c.target = vec!["+".into()];
        c.coupling = vec![0.1, 0.2];
        assert!(c.single_spec().is_err());
        c.coupling = vec![0.1];
        assert!(c.single_spec().is_ok());
        c.target = vec!["nonsense".into()];
        assert!(c.single_spec().is_err());
    }
}
