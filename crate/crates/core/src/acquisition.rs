//! Expected Improvement and its maximization over a box.

use libm::erfc;
use rand::Rng;

use crate::design::{lhs, BoxDomain};
use crate::error::{Error, Result};
use crate::kriging::KrigingModel;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Multistart points per dimension.
pub const STARTS_PER_DIM: usize = 20;
/// Default EI evaluations per dimension for one maximization.
pub const SEARCH_BUDGET_PER_DIM: usize = 2000;
/// Pattern-search evaluations allowed for a single start, per dimension.
const REFINE_BUDGET_PER_DIM: usize = 200;
const INITIAL_STEP: f64 = 0.05;
const STEP_TOLERANCE: f64 = 1e-6;
const PERTURBATION: f64 = 0.01;

pub fn default_search_budget(d: usize) -> usize {
    SEARCH_BUDGET_PER_DIM * d
}

/// A fitted model, its incumbent and the domain over which EI is maximized.
#[derive(Debug, Clone, Copy)]
pub struct AcquisitionProblem<'a> {
    model: &'a KrigingModel,
    f_min: f64,
    domain: &'a BoxDomain,
}

impl<'a> AcquisitionProblem<'a> {
    pub fn new(model: &'a KrigingModel, domain: &'a BoxDomain) -> Result<Self> {
        if model.doe().dim() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: model.doe().dim(),
            });
        }
        Ok(Self { model, f_min: model.doe().best_value(), domain })
    }

    pub fn model(&self) -> &KrigingModel {
        self.model
    }

    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn domain(&self) -> &BoxDomain {
        self.domain
    }

    /// Standard deviations below this use the zero-variance limit.
    fn std_floor(&self) -> f64 {
        1e-12 * self.model.sigma2_hat().sqrt().max(1.0)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(u: f64) -> f64 {
    0.5 * erfc(-u / std::f64::consts::SQRT_2)
}

pub fn normal_pdf(u: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * u * u).exp()
}

/// `E[max(f_min - Y, 0)]` for `Y ~ N(mean, std^2)`.
///
/// `(f_min - m) Phi(u) + s phi(u)` with `u = (f_min - m) / s`; below
/// `std_floor` this is `max(f_min - m, 0)`.
pub fn ei_closed_form(mean: f64, std: f64, f_min: f64, std_floor: f64) -> f64 {
    let gap = f_min - mean;
    if std < std_floor {
        return gap.max(0.0);
    }
    let u = gap / std;
    (std * (u * normal_cdf(u) + normal_pdf(u))).max(0.0)
}

pub fn expected_improvement(problem: &AcquisitionProblem<'_>, x: &[f64]) -> f64 {
    let p = problem.model.predict(x);
    ei_closed_form(p.mean, p.std_dev(), problem.f_min, problem.std_floor())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EiMaximum {
    pub x: Vec<f64>,
    pub ei: f64,
    pub evaluations: usize,
}

/// Multistart pattern search for `argmax EI` over the problem's domain.
///
/// Starts are a fresh LHS of `20 d` points plus the incumbent perturbed by 1%
/// of the domain width. Starts are refined in decreasing order of their EI by
/// a compass search in normalized coordinates, from a step of 5% down to
/// `1e-6` of the width, until `search_budget` EI evaluations are spent. Ties keep
/// the first point found.
pub fn maximize_ei<R: Rng + ?Sized>(
    problem: &AcquisitionProblem<'_>,
    search_budget: usize,
    rng: &mut R,
) -> EiMaximum {
    let domain = problem.domain;
    let d = domain.dim();
    let budget = search_budget.max(1);
    let mut search = Search { problem, budget, evaluations: 0 };

    let mut starts: Vec<Vec<f64>> = {
        let m = lhs(STARTS_PER_DIM * d, domain, rng);
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    let mut incumbent = problem.model.doe().point(problem.model.doe().best_index());
    for (j, v) in incumbent.iter_mut().enumerate() {
        *v += PERTURBATION * domain.width(j) * rng.random_range(-1.0..=1.0);
    }
    domain.clamp(&mut incumbent);
    starts.push(incumbent);

    let mut scored: Vec<(Vec<f64>, f64)> = Vec::with_capacity(starts.len());
    for s in starts {
        match search.eval(&s) {
            Some(v) => scored.push((s, v)),
            None => break,
        }
    }

    let mut best = scored
        .iter()
        .fold(None::<&(Vec<f64>, f64)>, |b, c| match b {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .cloned()
        .expect("search budget allows at least one evaluation");

    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[b].1.total_cmp(&scored[a].1));

    let cap = REFINE_BUDGET_PER_DIM * d;
    for i in order {
        if search.exhausted() {
            break;
        }
        let (x, v) = search.compass(&scored[i].0, scored[i].1, cap);
        if v > best.1 {
            best = (x, v);
        }
    }

    EiMaximum { x: best.0, ei: best.1, evaluations: search.evaluations }
}

struct Search<'p, 'a> {
    problem: &'p AcquisitionProblem<'a>,
    budget: usize,
    evaluations: usize,
}

impl Search<'_, '_> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        self.evaluations += 1;
        Some(expected_improvement(self.problem, x))
    }

    /// Opportunistic compass search; repeats a successful direction before
    /// polling the others and halves the step after a failed poll.
    fn compass(&mut self, start: &[f64], start_value: f64, cap: usize) -> (Vec<f64>, f64) {
        let domain = self.problem.domain;
        let d = domain.dim();
        let limit = (self.evaluations + cap).min(self.budget);
        let mut x = start.to_vec();
        let mut value = start_value;
        let mut step = INITIAL_STEP;
        let mut last_dir: Option<usize> = None;
        while step >= STEP_TOLERANCE && self.evaluations < limit {
            let mut improved = false;
            let dirs = last_dir.into_iter().chain((0..2 * d).filter(|k| Some(*k) != last_dir));
            for k in dirs {
                if self.evaluations >= limit {
                    break;
                }
                let j = k / 2;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let mut trial = x.clone();
                trial[j] = (trial[j] + sign * step * domain.width(j))
                    .clamp(domain.lower()[j], domain.upper()[j]);
                if trial[j] == x[j] {
                    continue;
                }
                let Some(v) = self.eval(&trial) else { break };
                if v > value {
                    x = trial;
                    value = v;
                    last_dir = Some(k);
                    improved = true;
                    break;
                }
            }
            if !improved {
                last_dir = None;
                step *= 0.5;
            }
        }
        (x, value)
    }
}
