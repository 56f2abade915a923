//! Command-line front end for the `wvbound` library: problem files in,
//! deterministic JSON reports and CSV sweeps out.

pub mod commands;
pub mod error;
pub mod output;
pub mod problem;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
