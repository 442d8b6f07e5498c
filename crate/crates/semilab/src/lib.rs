//! File formats, fixtures and the experiment runner around `semilab-core`.
//!
//! An experiment reads an operator file (and optionally a probe file),
//! runs one of the named studies and writes `report.json` plus CSV tables
//! into an output directory. Reports depend only on the configuration and
//! the seed, never on the number of worker threads.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod experiments;
pub mod fixtures;
pub mod parse;
pub mod report;

pub use config::{Experiment, ExperimentConfig};
pub use error::{LabError, EXIT_PASS, EXIT_SCIENTIFIC_FAIL, EXIT_USAGE};
pub use experiments::{run, run_with_threads, Outcome};
