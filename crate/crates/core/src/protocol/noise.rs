use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{c, ComplexMatrix, Lu, ONE, ZERO};
use crate::pauli::Pauli;
use crate::readout::ConfusionMatrix;
use crate::states::DensityState;
use crate::steering::{KrausSet, SteeringOperator};
use crate::{Error, Result};

/// Per-cycle imperfections. Depolarizing and amplitude damping act on the
/// system after each cycle (in that order); the confusion corrupts only the
/// recorded ancilla outcome; `reset_error` leaves the ancilla in the
/// orthogonal state with that probability.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields, default))]
pub struct NoiseConfig {
    pub depolarizing_p: f64,
    pub amplitude_damping_gamma: f64,
    pub readout_confusion: Option<ConfusionMatrix>,
    pub reset_error: f64,
}

impl NoiseConfig {
    pub fn validate(&self, ancilla_dim: usize) -> Result<()> {
        for (name, v) in [
            ("depolarizing_p", self.depolarizing_p),
            ("amplitude_damping_gamma", self.amplitude_damping_gamma),
            ("reset_error", self.reset_error),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidNoise(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if let Some(cm) = &self.readout_confusion {
            if cm.outcomes() != ancilla_dim {
                return Err(Error::InvalidNoise(format!(
                    "confusion over {} outcomes, ancilla has {ancilla_dim}",
                    cm.outcomes()
                )));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.depolarizing_p == 0.0
            && self.amplitude_damping_gamma == 0.0
            && self.reset_error == 0.0
            && self.readout_confusion.as_ref().is_none_or(|c| c.is_identity())
    }
}

/// `(1 − p)ρ + p Tr(ρ) I/d`.
pub fn depolarize(rho: &ComplexMatrix, p: f64) -> ComplexMatrix {
    if p == 0.0 {
        return rho.clone();
    }
    let d = rho.dim();
    let mixed = ComplexMatrix::identity(d).scale(rho.trace() * (p / d as f64));
    &rho.scale_re(1.0 - p) + &mixed
}

/// Ladder amplitude damping: `K₀ = |0⟩⟨0| + √(1−γ) Σ_{j≥1} |j⟩⟨j|`,
/// `K_j = √γ |j−1⟩⟨j|`.
pub fn amplitude_damping_kraus(dim: usize, gamma: f64) -> Vec<ComplexMatrix> {
    let mut k0 = ComplexMatrix::identity(dim);
    for j in 1..dim {
        k0[(j, j)] = c((1.0 - gamma).sqrt(), 0.0);
    }
    let mut ops = alloc::vec![k0];
    for j in 1..dim {
        let mut k = ComplexMatrix::zeros(dim);
        k[(j - 1, j)] = c(gamma.sqrt(), 0.0);
        ops.push(k);
    }
    ops
}

pub fn amplitude_damp(rho: &ComplexMatrix, gamma: f64) -> ComplexMatrix {
    if gamma == 0.0 {
        return rho.clone();
    }
    amplitude_damping_kraus(rho.dim(), gamma)
        .iter()
        .fold(ComplexMatrix::zeros(rho.dim()), |acc, k| &acc + &k.sandwich(rho))
}

/// Single-qubit depolarizing Kraus operators
/// `√(1 − 3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z`.
pub fn depolarizing_kraus_qubit(p: f64) -> Vec<ComplexMatrix> {
    let w = [1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0];
    Pauli::ALL
        .iter()
        .zip(w)
        .map(|(q, w)| q.matrix().scale_re(w.sqrt()))
        .collect()
}

/// One full protocol cycle: coupling, ancilla measurement (outcome
/// discarded or conditioned on), then system noise.
#[derive(Clone, Debug)]
pub struct CycleChannel {
    kraus: KrausSet,
    depolarizing_p: f64,
    damping: Option<Vec<ComplexMatrix>>,
}

impl CycleChannel {
    pub fn new(op: &SteeringOperator, noise: &NoiseConfig) -> Result<Self> {
        noise.validate(op.ancilla_dim())?;
        let kraus = if noise.reset_error > 0.0 {
            op.kraus_with_reset_error(noise.reset_error)?
        } else {
            op.kraus()
        };
        let damping = (noise.amplitude_damping_gamma > 0.0)
            .then(|| amplitude_damping_kraus(op.system_dim(), noise.amplitude_damping_gamma));
        Ok(Self {
            kraus,
            depolarizing_p: noise.depolarizing_p,
            damping,
        })
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus.system_dim()
    }

    /// System noise applied after the measurement.
    pub fn apply_noise(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let r = depolarize(rho, self.depolarizing_p);
        match &self.damping {
            Some(ks) => ks
                .iter()
                .fold(ComplexMatrix::zeros(r.dim()), |acc, k| &acc + &k.sandwich(&r)),
            None => r,
        }
    }

    /// Outcome-averaged cycle.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.apply_noise(&self.kraus.apply(rho)).hermitian_part()
    }

    /// Matrix of the cycle acting on row-major `vec(ρ)`.
    pub fn transfer_matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut s = ComplexMatrix::zeros(d * d);
        for a in 0..d {
            for b in 0..d {
                let mut e = ComplexMatrix::zeros(d);
                e[(a, b)] = ONE;
                let out = self.apply_noise(
                    &self
                        .kraus
                        .operators()
                        .iter()
                        .fold(ComplexMatrix::zeros(d), |acc, k| &acc + &k.sandwich(&e)),
                );
                for i in 0..d {
                    for j in 0..d {
                        s[(i * d + j, a * d + b)] = out[(i, j)];
                    }
                }
            }
        }
        s
    }

    /// The unique state with `Φ(ρ) = ρ`; errors if the fixed point is not
    /// unique.
    pub fn fixed_point(&self) -> Result<DensityState> {
        let d = self.dim();
        let s = self.transfer_matrix();
        let mut m = &s - &ComplexMatrix::identity(d * d);
        for col in 0..d * d {
            m[(0, col)] = ZERO;
        }
        for i in 0..d {
            m[(0, i * d + i)] = ONE;
        }
        let mut rhs = alloc::vec![ZERO; d * d];
        rhs[0] = ONE;
        let x = Lu::new(&m)?.solve(&rhs)?;
        let rho = ComplexMatrix::from_vec(d, x)?.hermitian_part();
        DensityState::single(rho)
    }
}

