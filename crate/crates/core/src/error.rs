use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem dimensions {dims:?} do not multiply to {dim}")]
    SubsystemMismatch { dims: Vec<usize>, dim: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("not a density state: {0}")]
    InvalidState(String),

    #[error("`{name}` = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("outcome {outcome} is impossible (probability {probability:e})")]
    ImpossibleOutcome { outcome: usize, probability: f64 },

    #[error("singular matrix (condition number {0:e})")]
    Singular(f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),

    #[error("malformed circuit: {0}")]
    Circuit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
