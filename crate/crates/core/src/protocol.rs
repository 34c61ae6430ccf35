//! Blind and non-blind protocol runs, noise and run statistics.
//!
//! A blind run iterates the outcome-averaged channel. A non-blind run samples
//! ancilla outcomes: the back-action uses the true outcome, the readout
//! confusion corrupts only the recorded one, and by default the run stops at
//! the first recorded `1`.

mod noise;
mod stats;

pub use noise::{
    amplitude_damp, amplitude_damping_kraus, depolarize, depolarizing_kraus_qubit, CycleChannel, NoiseConfig,
};
pub use stats::{repetition_stats, RepetitionStats, StateMoments};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::ComplexMatrix;
use crate::rng::SplitMix64;
use crate::states::{fidelity, random_density_with, DensityState, Target};
use crate::steering::{make_steering_operator, SteeringOperator, TargetSpec};
use crate::{Error, Result};

/// Probability below which an ancilla outcome is treated as impossible.
pub const IMPOSSIBLE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RunMode {
    Blind,
    #[cfg_attr(feature = "serde", serde(rename = "nonblind"))]
    NonBlind,
}

/// When a non-blind run ends early.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopRule {
    /// First recorded ancilla outcome `1`.
    #[default]
    FirstOne,
    /// First step whose state fidelity reaches the threshold.
    FidelityAtLeast(f64),
    /// Run all steps.
    Never,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub seed: Option<u64>,
    pub mode: RunMode,
    /// Fidelity before the first cycle and after each cycle.
    pub fidelities: Vec<f64>,
    /// Recorded ancilla outcomes, one per cycle (non-blind only).
    pub outcomes: Vec<usize>,
    pub repetitions_to_success: Option<usize>,
    pub coupling: f64,
    pub target: String,
}

/// A record together with the system state at its end.
#[derive(Clone, Debug)]
pub struct Run {
    pub record: RunRecord,
    pub final_state: DensityState,
}

fn check_input(rho0: &DensityState, op: &SteeringOperator, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::OutOfRange {
            name: "N",
            value: 0.0,
            range: "N ≥ 1",
        });
    }
    if rho0.dim() != op.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: op.system_dim(),
            found: rho0.dim(),
        });
    }
    Ok(())
}

/// Iterates the averaged cycle `n_steps` times.
pub fn run_blind(rho0: &DensityState, op: &SteeringOperator, n_steps: usize, noise: &NoiseConfig) -> Result<Run> {
    check_input(rho0, op, n_steps)?;
    let channel = CycleChannel::new(op, noise)?;
    let target = op.target();
    let mut rho = rho0.matrix().clone();
    let mut fidelities = Vec::with_capacity(n_steps + 1);
    let state = |m: &ComplexMatrix| DensityState::from_raw(m.clone(), rho0.dims().to_vec());
    fidelities.push(fidelity(rho0, target)?);
    for _ in 0..n_steps {
        rho = channel.apply(&rho);
        fidelities.push(fidelity(&state(&rho)?, target)?);
    }
    Ok(Run {
        record: RunRecord {
            seed: None,
            mode: RunMode::Blind,
            fidelities,
            outcomes: Vec::new(),
            repetitions_to_success: None,
            coupling: op.coupling(),
            target: op.label().into(),
        },
        final_state: state(&rho)?,
    })
}

/// Number of blind cycles until the fidelity first reaches `threshold`.
pub fn blind_steps_to_fidelity(
    rho0: &DensityState,
    op: &SteeringOperator,
    threshold: f64,
    max_steps: usize,
    noise: &NoiseConfig,
) -> Result<Option<usize>> {
    let run = run_blind(rho0, op, max_steps, noise)?;
    Ok(run.record.fidelities.iter().position(|&f| f >= threshold))
}

/// Projects the ancilla of a joint `ancilla ⊗ system` state onto `|k⟩`.
///
/// Returns the normalized system state and `p_k = Tr[Π_k ρ]`.
pub fn measure_ancilla(joint: &DensityState, k: usize) -> Result<(DensityState, f64)> {
    let dims = joint.dims();
    if dims.len() != 2 {
        return Err(Error::SubsystemMismatch {
            dims: dims.to_vec(),
            dim: joint.dim(),
        });
    }
    let (da, ds) = (dims[0], dims[1]);
    if k >= da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: k,
        });
    }
    let block = joint.matrix().sub_block(k * ds, k * ds, ds);
    let p = block.trace().re;
    if p < IMPOSSIBLE {
        return Err(Error::ImpossibleOutcome {
            outcome: k,
            probability: p,
        });
    }
    Ok((DensityState::from_raw(block.scale_re(1.0 / p), vec![ds])?, p))
}

/// Seed of trajectory `index` in a batch keyed by `seed`.
pub fn trajectory_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::stream(seed, index).next_u64()
}

/// One stochastic trajectory.
pub fn run_nonblind(
    rho0: &DensityState,
    op: &SteeringOperator,
    max_steps: usize,
    noise: &NoiseConfig,
    seed: u64,
    stop: StopRule,
) -> Result<Run> {
    check_input(rho0, op, max_steps)?;
    let channel = CycleChannel::new(op, noise)?;
    run_trajectory(rho0, op, &channel, max_steps, noise, seed, stop)
}

fn run_trajectory(
    rho0: &DensityState,
    op: &SteeringOperator,
    channel: &CycleChannel,
    max_steps: usize,
    noise: &NoiseConfig,
    seed: u64,
    stop: StopRule,
) -> Result<Run> {
    let mut rng = SplitMix64::new(seed);
    let target = op.target();
    let kraus = channel.kraus();
    let dims = rho0.dims().to_vec();
    let mut rho = rho0.matrix().clone();
    let mut fidelities = vec![fidelity(rho0, target)?];
    let mut outcomes = Vec::new();
    let mut success = None;
    for step in 1..=max_steps {
        let probs = kraus.probabilities(&rho);
        let k = rng.categorical(&probs);
        let branch = kraus.branch(&rho, k);
        let p = branch.trace().re;
        if p < IMPOSSIBLE {
            return Err(Error::ImpossibleOutcome {
                outcome: k,
                probability: p,
            });
        }
        rho = channel.apply_noise(&branch.scale_re(1.0 / p)).hermitian_part();
        let recorded = match &noise.readout_confusion {
            Some(cm) => cm.corrupt(k, &mut rng),
            None => k,
        };
        outcomes.push(recorded);
        let f = fidelity(&DensityState::from_raw(rho.clone(), dims.clone())?, target)?;
        fidelities.push(f);
        let done = match stop {
            StopRule::FirstOne => recorded == 1,
            StopRule::FidelityAtLeast(t) => f >= t,
            StopRule::Never => false,
        };
        if success.is_none() && (done || (stop == StopRule::Never && recorded == 1)) {
            success = Some(step);
        }
        if done {
            break;
        }
    }
    Ok(Run {
        record: RunRecord {
            seed: Some(seed),
            mode: RunMode::NonBlind,
            fidelities,
            outcomes,
            repetitions_to_success: success,
            coupling: op.coupling(),
            target: op.label().into(),
        },
        final_state: DensityState::from_raw(rho, dims)?,
    })
}

/// `count` trajectories with seeds `trajectory_seed(seed, i)`.
pub fn run_nonblind_batch(
    rho0: &DensityState,
    op: &SteeringOperator,
    max_steps: usize,
    noise: &NoiseConfig,
    seed: u64,
    count: usize,
    stop: StopRule,
) -> Result<Vec<Run>> {
    check_input(rho0, op, max_steps)?;
    let channel = CycleChannel::new(op, noise)?;
    (0..count as u64)
        .map(|i| run_trajectory(rho0, op, &channel, max_steps, noise, trajectory_seed(seed, i), stop))
        .collect()
}

/// Initial states used by [`sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitialState {
    /// `|0⟩⟨0|`.
    Ground,
    MaximallyMixed,
    /// Ginibre-random, one per repeat.
    Random,
}

impl InitialState {
    pub fn sample(&self, dim: usize, seed: u64, repeat: u64) -> DensityState {
        match self {
            InitialState::Ground => DensityState::pure(&crate::linalg::Ket::basis(dim, 0)),
            InitialState::MaximallyMixed => DensityState::maximally_mixed(dim),
            InitialState::Random => random_density_with(dim, &mut SplitMix64::stream(seed, repeat)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub targets: Vec<Target>,
    pub couplings: Vec<f64>,
    pub n_steps: usize,
    pub noise: NoiseConfig,
    pub repeats: usize,
    pub initial: InitialState,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub target: String,
    pub coupling: f64,
    pub n: usize,
    pub mean_fidelity: f64,
    pub std: f64,
}

/// Mean over targets at fixed `(J, n)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepAverage {
    pub coupling: f64,
    pub n: usize,
    pub mean_fidelity: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub averages: Vec<SweepAverage>,
}

/// Blind runs over the full `target × J` grid.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    if cfg.targets.is_empty() || cfg.couplings.is_empty() || cfg.repeats == 0 {
        return Err(Error::Unsupported("sweep over an empty grid".into()));
    }
    let mut table = SweepTable::default();
    for &j in &cfg.couplings {
        let mut sums = vec![0.0; cfg.n_steps + 1];
        for target in &cfg.targets {
            let op = make_steering_operator(&TargetSpec::new(target.clone(), j)?)?;
            let mut acc = vec![(0.0, 0.0); cfg.n_steps + 1];
            for r in 0..cfg.repeats {
                let rho0 = cfg.initial.sample(target.dim(), cfg.seed, r as u64);
                let run = run_blind(&rho0, &op, cfg.n_steps.max(1), &cfg.noise)?;
                for (n, f) in run.record.fidelities.iter().take(cfg.n_steps + 1).enumerate() {
                    acc[n].0 += f;
                    acc[n].1 += f * f;
                }
            }
            let reps = cfg.repeats as f64;
            for (n, (s, s2)) in acc.into_iter().enumerate() {
                let mean = s / reps;
                let var = if cfg.repeats > 1 {
                    ((s2 - reps * mean * mean) / (reps - 1.0)).max(0.0)
                } else {
                    0.0
                };
                sums[n] += mean;
                table.rows.push(SweepRow {
                    target: target.label(),
                    coupling: j,
                    n,
                    mean_fidelity: mean,
                    std: var.sqrt(),
                });
            }
        }
        for (n, s) in sums.into_iter().enumerate() {
            table.averages.push(SweepAverage {
                coupling: j,
                n,
                mean_fidelity: s / cfg.targets.len() as f64,
            });
        }
    }
    Ok(table)
}
