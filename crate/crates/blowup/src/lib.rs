//! Experiment runner for `blowup-core`: JSON configuration, report and
//! time-series file formats, and the parallel parameter scans.

pub mod config;
pub mod output;
pub mod pipeline;

pub use config::{load_config, parse_config, ConfigError, ExperimentConfig, Mode};
pub use pipeline::{run_experiment, Outcome, PipelineError, Status};
