//! Benchmark harness behind the `ego-bench` binary: run configuration,
//! repeated seeded runs and CSV output.

mod config;
mod output;
mod runner;

pub use config::{parse_points, Algorithm, RunConfig, RunSettings};
pub use output::{
    aggregate_dir, median_best, read_records, run_file_name, run_files, trace_file_name,
    write_aggregate, write_records, write_trace,
};
pub use runner::{initial_design, run_benchmark, run_repetition, RepetitionResult};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Library(#[from] crate::Error),
    #[error("runs failed: {0}")]
    RunsFailed(String),
}
