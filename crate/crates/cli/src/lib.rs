//! Configuration, execution and CSV output for the `ntn-outage` tool.

pub mod config;
pub mod output;
pub mod runner;

use thiserror::Error;

pub use config::{parse_config, Mode, RawConfig, RunConfig};
pub use output::{emit_csv, write_metadata, HEADER};
pub use runner::{run, ResultRow};

#[derive(Debug, Error)]
pub enum CliError {
    /// Line 0 means a command-line override.
    #[error("line {line}, key `{key}`: {message}")]
    Parse { line: usize, key: String, message: String },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Core(#[from] ntn_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub(crate) fn parse(line: usize, key: &str, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }
}
