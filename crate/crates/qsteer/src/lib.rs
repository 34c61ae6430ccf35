//! Command-line layer over [`qsteer_core`]: JSON configuration, CSV/JSON
//! result files and parallel trajectory batches.
//!
//! Every command is also a library function taking a [`RunConfig`] and an
//! output directory, which is what the binary calls.

pub mod batch;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod table;

pub use commands::{run_command, Command, Summary};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
