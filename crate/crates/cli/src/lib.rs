//! Command-line driver: presets, config files and CSV/JSON output for the `qnls` binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod presets;
pub mod run;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
