//! Experiment harness for the blind-restoration sampler: configs, file
//! formats, synthetic problems, run orchestration, calibration, and plots.
//! The `gibbsddrm` binary in this crate exposes it all as subcommands.

pub mod calibrate;
pub mod config;
pub mod formats;
pub mod harness;
pub mod plot;
pub mod problem;
pub mod schema;
