//! File formats, experiment orchestration and reporting around `slrf-core`.

pub mod config;
pub mod csv_io;
pub mod model_io;
pub mod output;
pub mod report;
pub mod runner;
pub mod synthetic;

pub use slrf_core as core;
