//! Optimization loops: ML-tuned EGO, the greedy length-scale sweep and the
//! small-ensemble EGO.

mod ego;
mod ensemble;
mod schedule;
mod sweep;

pub use ego::{run_ego, EgoConfig};
pub use ensemble::{
    dedup_tolerance, run_ensemble_ego, select_candidates, EnsembleConfig, EnsembleRun,
    EnsembleState, Selection,
};
pub use schedule::{densify_lengthscales, initial_radius, RadiusSchedule};
pub use sweep::{run_greedy_sweep, sweep_group, theta_grid, SweepConfig, SweepRun, SweepTrace};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::acquisition::{maximize_ei, AcquisitionProblem};
use crate::design::{BoxDomain, Objective};
use crate::error::{Error, Result};
use crate::kriging::{fit, DesignOfExperiments};

/// Why a point was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Init,
    Selected,
    Densified,
    Fallback,
    MlEgo,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Init => "init",
            Provenance::Selected => "selected",
            Provenance::Densified => "densified",
            Provenance::Fallback => "fallback",
            Provenance::MlEgo => "ml-ego",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Provenance::Init,
            Provenance::Selected,
            Provenance::Densified,
            Provenance::Fallback,
            Provenance::MlEgo,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
        .ok_or_else(|| Error::invalid(format!("unknown provenance `{s}`")))
    }
}

/// One objective evaluation of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub run_id: usize,
    /// Cumulative objective evaluations, starting at 1.
    pub eval_index: usize,
    pub point: Vec<f64>,
    pub f_value: f64,
    pub best_so_far: f64,
    pub provenance: Provenance,
}

/// A run stopped by an error, with every record written before it.
#[derive(Debug, Error)]
#[error("run stopped after {} evaluations: {source}", records.len())]
pub struct RunFailure {
    pub records: Vec<ConvergenceRecord>,
    #[source]
    pub source: Error,
}

impl RunFailure {
    fn new(records: Vec<ConvergenceRecord>, source: Error) -> Self {
        Self { records, source }
    }
}

pub(crate) struct RecordLog {
    run_id: usize,
    records: Vec<ConvergenceRecord>,
    best: f64,
}

impl RecordLog {
    pub(crate) fn new(run_id: usize, doe: &DesignOfExperiments) -> Self {
        let mut log = Self { run_id, records: Vec::new(), best: f64::INFINITY };
        for i in 0..doe.len() {
            log.push(doe.point(i), doe.y()[i], Provenance::Init);
        }
        log
    }

    pub(crate) fn push(&mut self, point: Vec<f64>, f_value: f64, provenance: Provenance) {
        self.best = self.best.min(f_value);
        self.records.push(ConvergenceRecord {
            run_id: self.run_id,
            eval_index: self.records.len() + 1,
            point,
            f_value,
            best_so_far: self.best,
            provenance,
        });
    }

    pub(crate) fn len(&self) -> usize {
        self.records.len()
    }

    pub(crate) fn fail(self, source: Error) -> RunFailure {
        RunFailure::new(self.records, source)
    }

    pub(crate) fn into_records(self) -> Vec<ConvergenceRecord> {
        self.records
    }
}

pub(crate) fn evaluate<O: Objective + ?Sized>(f: &O, x: &[f64]) -> Result<f64> {
    let value = f.evaluate(x)?;
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective { point: x.to_vec(), value });
    }
    Ok(value)
}

pub(crate) fn check_initial_design(doe: &DesignOfExperiments, domain: &BoxDomain) -> Result<()> {
    if doe.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: doe.dim() });
    }
    if let Some(i) = (0..doe.len()).find(|&i| !domain.contains(&doe.point(i))) {
        return Err(Error::invalid(format!("initial design point {i} lies outside the domain")));
    }
    Ok(())
}

/// Independent generator per model, so concurrent maximizations reproduce the
/// sequential result.
pub(crate) fn substream_seeds<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<u64> {
    (0..k).map(|_| rng.next_u64()).collect()
}

/// Infill point of the model with length-scale `theta`.
pub(crate) fn infill_point(
    doe: &DesignOfExperiments,
    theta: f64,
    domain: &BoxDomain,
    search_budget: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let model = fit(doe, theta)?;
    let problem = AcquisitionProblem::new(&model, domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(maximize_ei(&problem, search_budget, &mut rng).x)
}
