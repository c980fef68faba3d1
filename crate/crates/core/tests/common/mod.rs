//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use kriging_ego::design::{lhs, BoxDomain};
use kriging_ego::kriging::DesignOfExperiments;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn matern52_correlation(r: f64, theta: f64) -> f64 {
    let s = 5f64.sqrt() * r / theta;
    (1.0 + s + s * s / 3.0) * (-s).exp()
}

/// Correlation matrix plus `jitter` on the diagonal, built entry by entry.
pub fn dense_correlation(x: &DMatrix<f64>, theta: f64, jitter: f64) -> DMatrix<f64> {
    let n = x.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let r = (x.row(i) - x.row(j)).norm();
        matern52_correlation(r, theta) + if i == j { jitter } else { 0.0 }
    })
}

pub struct OracleFit {
    pub mu: f64,
    pub sigma2: f64,
    pub r_inv: DMatrix<f64>,
    pub log_det: f64,
}

/// Closed-form estimators from an explicit inverse of the correlation matrix.
pub fn oracle_fit(doe: &DesignOfExperiments, theta: f64, jitter: f64) -> OracleFit {
    let r = dense_correlation(doe.x(), theta, jitter);
    let n = r.nrows();
    let log_det = r.clone().lu().determinant().ln();
    let r_inv = r.try_inverse().expect("invertible correlation matrix");
    let ones = DVector::from_element(n, 1.0);
    let y = doe.y();
    let mu = (ones.transpose() * &r_inv * y)[0] / (ones.transpose() * &r_inv * &ones)[0];
    let res = y.add_scalar(-mu);
    let sigma2 = (res.transpose() * &r_inv * &res)[0] / n as f64;
    OracleFit { mu, sigma2, r_inv, log_det }
}

pub fn random_design<R: Rng>(n: usize, d: usize, rng: &mut R) -> DesignOfExperiments {
    let x = DMatrix::from_fn(n, d, |_, _| rng.random_range(-5.0..5.0));
    let y = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * 3.0 + 1.0);
    DesignOfExperiments::new(x, y).unwrap()
}

/// Latin hypercube design over `[-5, 5]^d` with random normal outputs.
pub fn random_lhs_design<R: Rng>(n: usize, d: usize, rng: &mut R) -> DesignOfExperiments {
    let x = lhs(n, &BoxDomain::cube(d, -5.0, 5.0).unwrap(), rng);
    let y = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * 3.0 + 1.0);
    DesignOfExperiments::new(x, y).unwrap()
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
