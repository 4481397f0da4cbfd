//! Batch front end: parse a chart description, build the context and run
//! one command with deterministic text output.

mod commands;
mod config;

pub use commands::{dispatch, run, Command, Outcome, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
pub use config::{parse_config, Config, ConfigError};
