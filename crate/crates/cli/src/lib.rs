//! Batch front-end for the `cuntz-core` checkers: model descriptions, suite
//! orchestration and report output.

pub mod error;
pub mod grammar;
pub mod run;

pub use error::CliError;
pub use grammar::{load_model, parse_model, ModelSpec};
pub use run::{run, CapParams, ExitStatus, RunConfig, RunResult, Suite, SuiteResult};
