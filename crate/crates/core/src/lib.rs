//! Measurement-induced steering of qubit and qutrit states.
//!
//! A system is coupled to an ancilla by a fixed unitary, the ancilla is
//! measured and reset, and the cycle is repeated. Averaged over outcomes the
//! system undergoes a Kraus channel whose unique fixed point is the target
//! state; conditioned on outcomes it follows a stochastic trajectory that can
//! be stopped early.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; stochastic routines take an explicit seed and use
//! the counter-based [`rng::SplitMix64`] generator, so runs replay bit-for-bit
//! on every platform.
//!
//! Modules:
//!
//! - [`linalg`]: dense complex matrices up to 16×16, Hermitian
//!   eigendecomposition, `exp(-iH)`, general eigenvalues, LU.
//! - [`states`]: target parametrizations, density states, Bloch and
//!   Gell-Mann coordinates, the single-qubit stabilizer catalog.
//! - [`steering`]: steering Hamiltonians, unitaries, Kraus sets, the averaged
//!   step and the monotonicity check.
//! - [`protocol`]: blind and non-blind runs, noise, sweeps, repetition
//!   statistics.
//! - [`geometry`]: KAK decomposition and Weyl-chamber coordinates.
//! - [`circuits`]: gate IR, steering-circuit synthesis, evaluation.
//! - [`tomography`]: simulated shots, state and process tomography, readout
//!   mitigation.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuits;
mod error;
pub mod geometry;
pub mod linalg;
pub mod pauli;
pub mod protocol;
pub mod readout;
pub mod rng;
pub mod states;
pub mod steering;
pub mod tomography;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Ket, C64, TOL};
pub use states::DensityState;
