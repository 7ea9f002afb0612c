//! Command-line harness around `desc-core`: configuration, dataset
//! ingestion, the train / evaluate / predict / extract-features / profile
//! commands and the on-disk model directory.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod pipeline;

pub use error::{CliError, Result};
