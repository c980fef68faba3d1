use rand::Rng;

use super::{check_initial_design, evaluate, ConvergenceRecord, Provenance, RecordLog, RunFailure};
use crate::acquisition::{default_search_budget, maximize_ei, AcquisitionProblem};
use crate::design::{BoxDomain, Objective};
use crate::error::Error;
use crate::kriging::{estimate_theta_ml, fit, DesignOfExperiments, ML_THETA_BOUNDS};

#[derive(Debug, Clone, PartialEq)]
pub struct EgoConfig {
    pub domain: BoxDomain,
    /// EI evaluations per infill search.
    pub ei_search_budget: usize,
    pub theta_bounds: (f64, f64),
    pub run_id: usize,
}

impl EgoConfig {
    pub fn new(domain: BoxDomain) -> Self {
        Self {
            ei_search_budget: default_search_budget(domain.dim()),
            domain,
            theta_bounds: ML_THETA_BOUNDS,
            run_id: 0,
        }
    }
}

/// Classical EGO: re-estimate the length-scale by maximum likelihood, add the
/// EI maximizer, repeat until `budget` evaluations (initial design included).
pub fn run_ego<O, R>(
    f: &O,
    doe_init: &DesignOfExperiments,
    budget: usize,
    config: &EgoConfig,
    rng: &mut R,
) -> Result<Vec<ConvergenceRecord>, RunFailure>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    let mut log = RecordLog::new(config.run_id, doe_init);
    if let Err(e) = check_initial_design(doe_init, &config.domain) {
        return Err(log.fail(e));
    }
    if budget < doe_init.len() {
        let msg =
            format!("budget {budget} is smaller than the initial design ({})", doe_init.len());
        return Err(log.fail(Error::InvalidInput(msg)));
    }

    let mut doe = doe_init.clone();
    while log.len() < budget {
        let step = (|| {
            let theta = estimate_theta_ml(&doe, config.theta_bounds)?;
            let model = fit(&doe, theta)?;
            let problem = AcquisitionProblem::new(&model, &config.domain)?;
            let next = maximize_ei(&problem, config.ei_search_budget, rng).x;
            let value = evaluate(f, &next)?;
            Ok::<_, Error>((next, value))
        })();
        match step {
            Ok((x, y)) => {
                if let Err(e) = doe.push(&x, y) {
                    return Err(log.fail(e));
                }
                log.push(x, y, Provenance::MlEgo);
            }
            Err(e) => return Err(log.fail(e)),
        }
    }
    Ok(log.into_records())
}
