use std::fs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Algorithm, RunConfig};
use super::output::{
    median_best, run_file_name, trace_file_name, write_aggregate, write_records, write_trace,
};
use super::BenchError;
use crate::design::{lhs, BenchmarkFunction};
use crate::kriging::DesignOfExperiments;
use crate::optimizers::{
    run_ego, run_ensemble_ego, run_greedy_sweep, theta_grid, ConvergenceRecord, EgoConfig,
    EnsembleConfig, EnsembleState, RunFailure, SweepConfig, SweepTrace,
};

const DESIGN_STREAM: u64 = 0;
const ALGORITHM_STREAM: u64 = 1;

/// Everything produced by one repetition, complete or not.
#[derive(Debug, Clone)]
pub struct RepetitionResult {
    pub repetition: usize,
    pub seed: u64,
    pub records: Vec<ConvergenceRecord>,
    pub ensemble_states: Vec<EnsembleState>,
    pub sweep_traces: Vec<SweepTrace>,
    pub error: Option<String>,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The initial design of repetition `k`; identical for every algorithm.
pub fn initial_design(config: &RunConfig, k: usize) -> crate::Result<DesignOfExperiments> {
    let f = BenchmarkFunction::new(config.function, config.dim);
    let x = match &config.initial_design {
        Some(points) => {
            DesignOfExperiments::from_rows(points, &vec![0.0; points.len()])?.x().clone()
        }
        None => {
            let mut rng = stream_rng(config.base_seed + k as u64, DESIGN_STREAM);
            lhs(config.init_size, &config.domain, &mut rng)
        }
    };
    DesignOfExperiments::evaluate(x, &f)
}

pub fn run_repetition(config: &RunConfig, k: usize) -> RepetitionResult {
    let seed = config.base_seed + k as u64;
    let mut result = RepetitionResult {
        repetition: k,
        seed,
        records: Vec::new(),
        ensemble_states: Vec::new(),
        sweep_traces: Vec::new(),
        error: None,
    };
    let doe = match initial_design(config, k) {
        Ok(d) => d,
        Err(e) => {
            result.error = Some(e.to_string());
            return result;
        }
    };
    let f = BenchmarkFunction::new(config.function, config.dim);
    let mut rng = stream_rng(seed, ALGORITHM_STREAM);

    let outcome: Result<(), RunFailure> = match config.algorithm {
        Algorithm::Ego => {
            let mut c = EgoConfig::new(config.domain.clone());
            c.ei_search_budget = config.ei_search_budget;
            c.run_id = k;
            run_ego(&f, &doe, config.budget, &c, &mut rng).map(|r| result.records = r)
        }
        Algorithm::Ensemble => {
            let mut c = EnsembleConfig::new(config.domain.clone());
            c.ei_search_budget = config.ei_search_budget;
            c.q = config.q;
            c.densify_on_updated_doe = config.densify_on_updated_doe;
            c.max_evaluations = config.max_evaluations;
            c.run_id = k;
            run_ensemble_ego(&f, &doe, config.budget, &c, &mut rng).map(|r| {
                result.records = r.records;
                result.ensemble_states = r.states;
            })
        }
        Algorithm::GreedySweep => {
            let mut c = SweepConfig::new(config.domain.clone());
            c.ei_search_budget = config.ei_search_budget;
            c.run_id = k;
            let grid = theta_grid(config.theta_min, config.theta_max, config.theta_count);
            run_greedy_sweep(&f, &doe, &grid, config.budget, &c, &mut rng).map(|r| {
                result.records = r.records;
                result.sweep_traces = r.traces;
            })
        }
    };
    if let Err(failure) = outcome {
        result.error = Some(failure.source.to_string());
        result.records = failure.records;
    }
    result
}

/// Runs all repetitions and writes run files, the aggregate curve, sweep
/// traces and the manifest to the output directory.
///
/// Partial results are written before a failed run is reported as an error.
pub fn run_benchmark(config: &RunConfig) -> Result<Vec<RepetitionResult>, BenchError> {
    fs::create_dir_all(&config.output_dir)?;
    let results: Vec<RepetitionResult> =
        (0..config.repetitions).into_par_iter().map(|k| run_repetition(config, k)).collect();

    let dir = &config.output_dir;
    for r in &results {
        write_records(&dir.join(run_file_name(r.repetition)), config.dim, &r.records)?;
        for trace in &r.sweep_traces {
            write_trace(&dir.join(trace_file_name(r.repetition, trace.iteration)), trace)?;
        }
    }
    let curves: Vec<Vec<f64>> =
        results.iter().map(|r| r.records.iter().map(|c| c.best_so_far).collect()).collect();
    write_aggregate(&dir.join("aggregate.csv"), &median_best(&curves))?;

    let mut manifest = config.to_settings_text();
    for r in &results {
        let status = match &r.error {
            None => "ok".to_string(),
            Some(e) => format!("failed: {e}"),
        };
        manifest.push_str(&format!(
            "# run {:03} seed {}: {} evaluations, {status}\n",
            r.repetition,
            r.seed,
            r.records.len()
        ));
    }
    fs::write(dir.join("manifest.txt"), manifest)?;

    let failed: Vec<String> = results
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("run {}: {e}", r.repetition)))
        .collect();
    if failed.is_empty() {
        Ok(results)
    } else {
        Err(BenchError::RunsFailed(failed.join("; ")))
    }
}
