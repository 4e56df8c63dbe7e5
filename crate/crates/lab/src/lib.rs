//! Experiment harness for the regularized fractional Schrödinger equation:
//! configuration files, ε-sweeps, the moderateness, uniqueness and
//! consistency experiments, figure data and CSV output.
//!
//! The numerics live in [`fschro_core`]; this crate adds files, threads
//! and the `fschro` command line.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{LabError, Result};
