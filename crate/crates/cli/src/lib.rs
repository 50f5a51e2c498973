//! Library surface of the polygonflow command-line driver; the binary in
//! `main.rs` is a thin wrapper so that integration tests can exercise
//! configuration, file formats, and command runs directly.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod report;
pub mod svg;

pub use commands::{run, CommandKind};
pub use config::{parse_config, validate, RawConfig, RunConfig};
pub use error::{CliError, CliResult};
