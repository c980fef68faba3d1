use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kriging_ego::bench::{
    aggregate_dir, parse_points, run_benchmark, Algorithm, BenchError, RunSettings,
};
use kriging_ego::design::BenchmarkKind;

#[derive(Parser)]
#[command(name = "ego-bench", about = "Kriging-based optimization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated optimizations and write per-run CSV files.
    Run(Box<RunArgs>),
    /// Recompute the median convergence curve from run files.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ego, ensemble or greedy-sweep.
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Option<Algorithm>,
    /// sphere, ackley or rastrigin.
    #[arg(long, value_parser = parse_function)]
    function: Option<BenchmarkKind>,
    #[arg(long)]
    dim: Option<usize>,
    /// Evaluations for ego, iterations for ensemble and greedy-sweep.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    init_size: Option<usize>,
    #[arg(long)]
    ei_search_budget: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<f64>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    theta_count: Option<usize>,
    /// Points as `x0,x1;x0,x1;...`.
    #[arg(long, allow_hyphen_values = true)]
    initial_design: Option<String>,
    #[arg(long)]
    densify_on_updated_doe: Option<bool>,
    #[arg(long)]
    max_evaluations: Option<usize>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: BenchError| e.to_string())
}

fn parse_function(s: &str) -> Result<BenchmarkKind, String> {
    s.parse().map_err(|e: kriging_ego::Error| e.to_string())
}

impl RunArgs {
    fn settings(self) -> Result<RunSettings, BenchError> {
        let base = match &self.config {
            Some(path) => RunSettings::from_file(path)?,
            None => RunSettings::default(),
        };
        let cli = RunSettings {
            algorithm: self.algorithm,
            function: self.function,
            dim: self.dim,
            lower: self.lower,
            upper: self.upper,
            init_size: self.init_size,
            budget: self.budget,
            reps: self.reps,
            seed: self.seed,
            ei_search_budget: self.ei_search_budget,
            out: self.out,
            q: self.q,
            theta_min: self.theta_min,
            theta_max: self.theta_max,
            theta_count: self.theta_count,
            initial_design: self.initial_design.as_deref().map(parse_points).transpose()?,
            densify_on_updated_doe: self.densify_on_updated_doe,
            max_evaluations: self.max_evaluations,
        };
        Ok(base.merged_with(cli))
    }
}

fn run(args: RunArgs) -> Result<(), BenchError> {
    let config = args.settings()?.resolve()?;
    if config.algorithm == Algorithm::GreedySweep && config.dim > 2 {
        eprintln!("warning: sweep traces are only plottable for dim 1 or 2");
    }
    let results = run_benchmark(&config)?;
    for r in &results {
        if let Some(last) = r.records.last() {
            println!(
                "run {:03}: {} evaluations, best {}",
                r.repetition,
                r.records.len(),
                last.best_so_far
            );
        }
    }
    println!("results written to {}", config.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Run(args) => run(*args),
        Command::Aggregate { input, out } => aggregate_dir(&input, &out).map(|_| ()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
