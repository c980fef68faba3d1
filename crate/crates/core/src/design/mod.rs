//! Search domains, space-filling designs, length-scale sampling and the shifted
//! benchmark functions.

mod benchmark;

pub use benchmark::{BenchmarkFunction, BenchmarkKind, OPTIMUM_COORDINATE};

use nalgebra::DMatrix;
use rand::distr::Open01;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Base-10 exponent range of ensemble length-scales: `[10^-2, 10^1]`.
pub const LOG10_THETA_RANGE: (f64, f64) = (-2.0, 1.0);

/// Something that can be evaluated at a point of the search domain.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> Result<f64>;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(self(x))
    }
}

/// Axis-aligned box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if lower.is_empty() {
            return Err(Error::invalid("domain must have at least one dimension"));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::invalid(format!("invalid domain bounds [{l}, {u}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[lower, upper]^d`
    pub fn cube(d: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; d], vec![upper; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn max_width(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }
}

/// Where a point is placed inside its Latin hypercube stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LhsKind {
    /// Uniformly inside the stratum.
    #[default]
    Jittered,
    /// At the stratum midpoint.
    Centered,
}

/// Latin hypercube sample of `n` points, one row per point.
pub fn lhs<R: Rng + ?Sized>(n: usize, domain: &BoxDomain, rng: &mut R) -> DMatrix<f64> {
    lhs_with(n, domain, LhsKind::Jittered, rng)
}

pub fn lhs_with<R: Rng + ?Sized>(
    n: usize,
    domain: &BoxDomain,
    kind: LhsKind,
    rng: &mut R,
) -> DMatrix<f64> {
    let d = domain.dim();
    let mut out = DMatrix::zeros(n, d);
    let mut strata: Vec<usize> = (0..n).collect();
    for j in 0..d {
        strata.shuffle(rng);
        let (lo, w) = (domain.lower[j], domain.width(j));
        for (i, &s) in strata.iter().enumerate() {
            let u = match kind {
                LhsKind::Jittered => rng.sample::<f64, _>(Open01),
                LhsKind::Centered => 0.5,
            };
            // Keep the point strictly inside the box under rounding.
            let v = lo + w * (s as f64 + u) / n as f64;
            out[(i, j)] = v.clamp(lo, domain.upper[j]);
        }
    }
    out
}

/// `q` length-scales, one per equal stratum of `[10^a, 10^b]` on a log10 scale,
/// sorted ascending.
pub fn sample_lengthscales<R: Rng + ?Sized>(
    q: usize,
    log10_range: (f64, f64),
    rng: &mut R,
) -> Vec<f64> {
    let (a, b) = log10_range;
    let w = b - a;
    let mut strata: Vec<usize> = (0..q).collect();
    strata.shuffle(rng);
    let mut thetas: Vec<f64> = strata
        .iter()
        .map(|&s| {
            let u: f64 = rng.sample(Open01);
            10f64.powf(a + w * (s as f64 + u) / q as f64)
        })
        .collect();
    thetas.sort_by(f64::total_cmp);
    thetas
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Smallest Euclidean distance from `x` to a row of `points`; infinite when
/// `points` is empty.
pub fn min_distance(x: &[f64], points: &DMatrix<f64>) -> f64 {
    (0..points.nrows())
        .map(|i| points.row(i).iter().zip(x).map(|(p, v)| (p - v) * (p - v)).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}
