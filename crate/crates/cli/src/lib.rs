//! Command-line harness around `verma_ext_core`: enumeration, single
//! R-polynomials and subspaces, the verification suites and table reports.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod suites;

pub use config::{OutputFormat, RunConfig};
pub use error::CliError;
