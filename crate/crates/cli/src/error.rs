//! CLI error type with the exit-code contract: 2 for configuration
//! problems, 1 for runtime failures.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed JSON config or unknown keys.
    Parse(String),
    /// A config field failed validation; message names the field.
    Validation(String),
    /// A data file is malformed; 1-based line number included.
    Format { line: usize, message: String },
    /// Filesystem failure with the path involved.
    Io { path: String, source: std::io::Error },
    /// Any failure during the run itself.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) | Self::Validation(_) => 2,
            Self::Format { .. } | Self::Io { .. } | Self::Runtime(_) => 1,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse(msg) => write!(f, "config parse error: {}", msg),
            Self::Validation(msg) => write!(f, "invalid configuration: {}", msg),
            Self::Format { line, message } => write!(f, "format error at line {}: {}", line, message),
            Self::Io { path, source } => write!(f, "io error on {}: {}", path, source),
            Self::Runtime(msg) => write!(f, "runtime error: {}", msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<polygonflow_core::Error> for CliError {
    fn from(e: polygonflow_core::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
