//! Parallel trajectory batches.
//!
//! Work is split across threads but results are collected in index order and
//! reduced sequentially, so every output is independent of the thread count.

use qsteer_core::protocol::{run_blind, run_nonblind, trajectory_seed, NoiseConfig, Run, StateMoments, StopRule};
use qsteer_core::rng::SplitMix64;
use qsteer_core::steering::SteeringOperator;
use qsteer_core::{DensityState, Result};
use rayon::prelude::*;

/// Key of the initial-state family for a run seeded with `seed`, kept apart
/// from the trajectory streams.
pub fn initial_key(seed: u64) -> u64 {
    SplitMix64::stream(seed, u64::MAX).next_u64()
}

/// Trajectory `i` starts from `initial(i)` and uses `trajectory_seed(seed, i)`.
pub fn trajectories<F>(
    op: &SteeringOperator,
    max_steps: usize,
    noise: &NoiseConfig,
    seed: u64,
    count: usize,
    stop: StopRule,
    initial: F,
) -> Result<Vec<Run>>
where
    F: Fn(u64) -> DensityState + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| run_nonblind(&initial(i), op, max_steps, noise, trajectory_seed(seed, i), stop))
        .collect()
}

pub fn blind_runs(op: &SteeringOperator, n_steps: usize, noise: &NoiseConfig, initial: &[DensityState]) -> Result<Vec<Run>> {
    initial.par_iter().map(|rho| run_blind(rho, op, n_steps, noise)).collect()
}

/// Moments of the final state over `count` full-length trajectories from
/// `rho0` (no early stop).
pub fn trajectory_moments(
    rho0: &DensityState,
    op: &SteeringOperator,
    steps: usize,
    noise: &NoiseConfig,
    seed: u64,
    count: usize,
) -> Result<StateMoments> {
    let finals: Vec<DensityState> = (0..count as u64)
        .into_par_iter()
        .map(|i| run_nonblind(rho0, op, steps, noise, trajectory_seed(seed, i), StopRule::Never).map(|r| r.final_state))
        .collect::<Result<_>>()?;
    let mut m = StateMoments::new(rho0.dim());
    for s in &finals {
        m.push(s.matrix());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsteer_core::protocol::run_nonblind_batch;
    use qsteer_core::states::{random_density, QubitTarget, Target};
    use qsteer_core::steering::{make_steering_operator, TargetSpec};

    fn op() -> SteeringOperator {
        let t = Target::Qubit(QubitTarget::new(1.0, 0.4).unwrap());
        make_steering_operator(&TargetSpec::new(t, 0.6).unwrap()).unwrap()
    }

    #[test]
    fn parallel_batch_matches_sequential() {
        let rho = random_density(2, 3).unwrap();
        let noise = NoiseConfig::default();
        let par = trajectories(&op(), 6, &noise, 9, 200, StopRule::FirstOne, |_| rho.clone()).unwrap();
        let seq = run_nonblind_batch(&rho, &op(), 6, &noise, 9, 200, StopRule::FirstOne).unwrap();
        for (a, b) in par.iter().zip(&seq) {
            assert_eq!(a.record, b.record);
        }
    }

    #[test]
    fn moments_are_thread_count_independent() {
        let rho = random_density(2, 4).unwrap();
        let noise = NoiseConfig::default();
        let a = trajectory_moments(&rho, &op(), 3, &noise, 1, 500).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| trajectory_moments(&rho, &op(), 3, &noise, 1, 500)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count(), 500);
    }
}
