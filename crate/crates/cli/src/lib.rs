//! Command-line front end for `foothills-core`: curve samples, moment tables,
//! cosine-series data and the identity validation report.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;
pub mod validate;

pub use config::{OutputFormat, RunConfig};
pub use error::{CliError, CliResult};
pub use validate::{ValidateOptions, ValidationReport};
