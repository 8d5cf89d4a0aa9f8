//! The `mgr` command-line tool as a library: argument types, dispatch, the
//! result cache and the table harness.

pub mod args;
pub mod cache;
mod commands;
mod output;
pub mod table;

pub use commands::run;
pub use output::{Doc, Emitted};

use thiserror::Error;

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("node budget exceeded")]
    Budget,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}
