use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use super::schedule::{densify_lengthscales, initial_radius, RadiusSchedule};
use super::{
    check_initial_design, evaluate, infill_point, substream_seeds, ConvergenceRecord, Provenance,
    RecordLog, RunFailure,
};
use crate::acquisition::default_search_budget;
use crate::design::{
    euclidean_distance, min_distance, sample_lengthscales, BoxDomain, Objective, LOG10_THETA_RANGE,
};
use crate::error::{Error, Result};
use crate::kriging::DesignOfExperiments;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub domain: BoxDomain,
    pub ei_search_budget: usize,
    /// Ensemble size before densification.
    pub q: usize,
    pub log10_theta_range: (f64, f64),
    /// The exclusion radius reaches zero after this percentage of `t_max`.
    pub threshold_percent: usize,
    /// Fit the two densified models on the design already extended by the
    /// selected points instead of the design at the start of the iteration.
    pub densify_on_updated_doe: bool,
    /// Optional cap on total objective evaluations, initial design included.
    pub max_evaluations: Option<usize>,
    pub run_id: usize,
}

impl EnsembleConfig {
    pub fn new(domain: BoxDomain) -> Self {
        Self {
            ei_search_budget: default_search_budget(domain.dim()),
            domain,
            q: 5,
            log10_theta_range: LOG10_THETA_RANGE,
            threshold_percent: 70,
            densify_on_updated_doe: false,
            max_evaluations: None,
            run_id: 0,
        }
    }
}

/// Bookkeeping of one completed ensemble iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    /// 1-based iteration counter `t`.
    pub iteration: usize,
    pub radius: f64,
    /// Design size when the iteration started.
    pub doe_size: usize,
    /// Ascending ensemble length-scales.
    pub thetas: Vec<f64>,
    /// Infill point of each ensemble model, in `thetas` order.
    pub candidates: Vec<Vec<f64>>,
    /// Indices into `candidates` that were evaluated.
    pub selected: Vec<usize>,
    pub fallback: bool,
    pub theta_star: f64,
    pub densified: (f64, f64),
    pub new_points: Vec<Vec<f64>>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub records: Vec<ConvergenceRecord>,
    pub states: Vec<EnsembleState>,
}

/// Outcome of the eligibility filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Candidate indices to evaluate, ascending.
    pub selected: Vec<usize>,
    /// No candidate was eligible; `selected` holds the maximin candidate.
    pub fallback: bool,
    /// Distance of each candidate to the design.
    pub clearance: Vec<f64>,
}

/// Candidates closer than this are treated as the same point.
pub fn dedup_tolerance(domain: &BoxDomain) -> f64 {
    1e-8 * domain.max_width()
}

/// Keeps candidates at distance at least `radius` from every design point.
///
/// Candidates within `tolerance` of an earlier candidate or of a design point
/// are skipped. When nothing survives, the candidate farthest from the design
/// is selected (first one on ties) and the fallback flag is set.
pub fn select_candidates(
    candidates: &[Vec<f64>],
    x: &DMatrix<f64>,
    radius: f64,
    tolerance: f64,
) -> Selection {
    let clearance: Vec<f64> = candidates.iter().map(|c| min_distance(c, x)).collect();
    let mut selected = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let repeated = candidates[..i].iter().any(|p| euclidean_distance(p, c) <= tolerance);
        if !repeated && clearance[i] > tolerance && clearance[i] >= radius {
            selected.push(i);
        }
    }
    if !selected.is_empty() || candidates.is_empty() {
        return Selection { selected, fallback: false, clearance };
    }
    let far = clearance
        .iter()
        .enumerate()
        .fold(0, |best, (i, &d)| if d > clearance[best] { i } else { best });
    Selection { selected: vec![far], fallback: true, clearance }
}

/// EGO driven by a small ensemble of kriging models.
///
/// Each iteration draws `q` length-scales on a log-LHS, adds every infill point
/// that clears the current exclusion radius (or the maximin one), picks the
/// length-scale `theta*` whose point scored best (smallest length-scale on
/// ties), and adds the infill points of two models densified around `theta*`.
pub fn run_ensemble_ego<O, R>(
    f: &O,
    doe_init: &DesignOfExperiments,
    t_max: usize,
    config: &EnsembleConfig,
    rng: &mut R,
) -> Result<EnsembleRun, RunFailure>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    let mut log = RecordLog::new(config.run_id, doe_init);
    let setup = (|| {
        check_initial_design(doe_init, &config.domain)?;
        if t_max == 0 {
            return Err(Error::invalid("t_max must be at least 1"));
        }
        if config.q < 2 {
            return Err(Error::invalid("ensemble needs at least two length-scales"));
        }
        RadiusSchedule::with_threshold_percent(
            initial_radius(doe_init)?,
            t_max,
            config.threshold_percent,
        )
    })();
    let schedule = match setup {
        Ok(s) => s,
        Err(e) => return Err(log.fail(e)),
    };

    let mut doe = doe_init.clone();
    let mut states = Vec::with_capacity(t_max);
    let mut budget = Budget { cap: config.max_evaluations };

    for t in 1..=t_max {
        if budget.remaining(log.len()) == 0 {
            break;
        }
        match iterate(f, &mut doe, &mut log, &mut budget, t, &schedule, config, rng) {
            Ok(Some(state)) => states.push(state),
            Ok(None) => break,
            Err(e) => return Err(log.fail(e)),
        }
    }
    Ok(EnsembleRun { records: log.into_records(), states })
}

struct Budget {
    cap: Option<usize>,
}

impl Budget {
    fn remaining(&self, used: usize) -> usize {
        self.cap.map_or(usize::MAX, |c| c.saturating_sub(used))
    }
}

/// One ensemble iteration; `None` when the evaluation cap cut it short.
#[allow(clippy::too_many_arguments)]
fn iterate<O, R>(
    f: &O,
    doe: &mut DesignOfExperiments,
    log: &mut RecordLog,
    budget: &mut Budget,
    t: usize,
    schedule: &RadiusSchedule,
    config: &EnsembleConfig,
    rng: &mut R,
) -> Result<Option<EnsembleState>>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    let radius = schedule.radius(t);
    let doe_size = doe.len();
    let thetas = sample_lengthscales(config.q, config.log10_theta_range, rng);
    let seeds = substream_seeds(rng, thetas.len() + 2);
    let candidates = infill_points(doe, &thetas, &seeds[..thetas.len()], config)?;

    let selection =
        select_candidates(&candidates, doe.x(), radius, dedup_tolerance(&config.domain));
    let provenance = if selection.fallback { Provenance::Fallback } else { Provenance::Selected };

    let allowed = selection.selected.len().min(budget.remaining(log.len()));
    let selected_points: Vec<&Vec<f64>> =
        selection.selected[..allowed].iter().map(|&i| &candidates[i]).collect();
    let y_sel = evaluate_all(f, &selected_points)?;
    let mut extended = doe.clone();
    for (x, &y) in selected_points.iter().zip(&y_sel) {
        log.push(x.to_vec(), y, provenance);
        extended.push(x, y)?;
    }
    if allowed < selection.selected.len() {
        *doe = extended;
        return Ok(None);
    }

    // Candidates are in ascending theta order, so the first minimum is the
    // smallest length-scale among ties.
    let best =
        y_sel.iter().enumerate().fold(0, |best, (i, &v)| if v < y_sel[best] { i } else { best });
    let star = selection.selected[best];
    let densified = densify_lengthscales(&thetas, star)?;

    let base = if config.densify_on_updated_doe { &extended } else { &*doe };
    let new_points =
        infill_points(base, &[densified.0, densified.1], &seeds[thetas.len()..], config)?;
    let allowed = new_points.len().min(budget.remaining(log.len()));
    let new_refs: Vec<&Vec<f64>> = new_points[..allowed].iter().collect();
    let y_new = evaluate_all(f, &new_refs)?;
    for (x, &y) in new_refs.iter().zip(&y_new) {
        log.push(x.to_vec(), y, Provenance::Densified);
        extended.push(x, y)?;
    }
    *doe = extended;
    if allowed < new_points.len() {
        return Ok(None);
    }

    Ok(Some(EnsembleState {
        iteration: t,
        radius,
        doe_size,
        thetas: thetas.clone(),
        candidates,
        selected: selection.selected,
        fallback: selection.fallback,
        theta_star: thetas[star],
        densified,
        new_points,
        evaluations: doe.len() - doe_size,
    }))
}

fn infill_points(
    doe: &DesignOfExperiments,
    thetas: &[f64],
    seeds: &[u64],
    config: &EnsembleConfig,
) -> Result<Vec<Vec<f64>>> {
    thetas
        .par_iter()
        .zip(seeds)
        .map(|(&theta, &seed)| {
            infill_point(doe, theta, &config.domain, config.ei_search_budget, seed)
        })
        .collect()
}

fn evaluate_all<O: Objective + ?Sized>(f: &O, points: &[&Vec<f64>]) -> Result<Vec<f64>> {
    points.par_iter().map(|x| evaluate(f, x)).collect()
}
