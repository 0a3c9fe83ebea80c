//! Scenario ingestion, deterministic input generation, pipeline runs and
//! reports.
//!
//! Exit-code contract of [`Report::exit_code`] and the binary: `0` every
//! configured check passed, `1` a check failed, `2` a pipeline stage failed,
//! `3` an I/O or scenario error.

mod cache;
mod generate;
mod report;
mod scenario;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

pub use cache::{cache_dir, cache_key, load_levels, store_levels, CACHE_ENV};
pub use generate::{build_inputs, generate, local_permutation, Inputs};
pub use report::{
    distortion_csv, ghost_csv, report_diff, run, run_with_inputs, write_outputs, CheckVerdict, DiffEntry,
    InputSummary, ProbeResults, Report, Timing, Verdict,
};
pub use scenario::{CheckSpec, GroupSpec, IsometrySpec, OnlProbeSpec, ProbeSpec, Scenario, SpaceSpec, SCHEMA_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_STAGE_FAILED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid scenario: {0}")]
    Spec(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_IO
    }
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
