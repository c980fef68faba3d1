//! Isotropic Matérn 5/2 kriging with a constant trend.
//!
//! For a fixed length-scale the trend and process variance have closed-form
//! maximum-likelihood estimates,
//!
//! ```text
//! mu_hat     = 1' R^-1 y / 1' R^-1 1
//! sigma2_hat = (y - mu_hat 1)' R^-1 (y - mu_hat 1) / n
//! ```
//!
//! where `R` is the unit-variance correlation matrix of the design. A small
//! jitter is added to the diagonal of `R` before the Cholesky factorization.
//! The jitter is treated as part of the covariance (a nugget that only acts
//! between coincident points), so a fitted model interpolates its design
//! exactly and every formula below refers to the regularized matrix.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::design::{euclidean_distance, Objective};
use crate::error::{Error, Result};

const SQRT_5: f64 = 2.236_067_977_499_79;

/// Initial jitter per design point; multiplied by `n`.
pub const JITTER_PER_POINT: f64 = 1e-10;
/// Largest jitter tried before giving up on a factorization.
pub const MAX_JITTER: f64 = 1e-6;

/// Length-scale interval used by the maximum-likelihood baseline.
pub const ML_THETA_BOUNDS: (f64, f64) = (0.01, 10.0);

/// Isotropic Matérn 5/2 covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    theta: f64,
    sigma2: f64,
}

impl Kernel {
    pub fn new(theta: f64, sigma2: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::invalid(format!("length-scale must be positive, got {theta}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::invalid(format!("process variance must be positive, got {sigma2}")));
        }
        Ok(Self { theta, sigma2 })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// Unit-variance Matérn 5/2 correlation; `r` and `theta` are trusted.
#[inline]
pub(crate) fn correlation(r: f64, theta: f64) -> f64 {
    let a = SQRT_5 * r / theta;
    (1.0 + a + a * a / 3.0) * (-a).exp()
}

/// `k(r) = sigma2 (1 + sqrt5 r/theta + 5 r^2 / (3 theta^2)) exp(-sqrt5 r/theta)`
pub fn matern52(r: f64, kernel: &Kernel) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeDistance(r));
    }
    Ok(kernel.sigma2 * correlation(r, kernel.theta))
}

/// Unit-variance correlation matrix of the rows of `x`.
pub fn correlation_matrix(x: &DMatrix<f64>, theta: f64) -> Result<DMatrix<f64>> {
    if x.nrows() == 0 {
        return Err(Error::invalid("correlation matrix of an empty design"));
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::invalid(format!("length-scale must be positive, got {theta}")));
    }
    let xt = x.transpose();
    let n = x.nrows();
    let mut r = DMatrix::identity(n, n);
    for j in 0..n {
        let xj = xt.column(j);
        for i in (j + 1)..n {
            let d = euclidean_distance(xt.column(i).as_slice(), xj.as_slice());
            let c = correlation(d, theta);
            r[(i, j)] = c;
            r[(j, i)] = c;
        }
    }
    Ok(r)
}

/// Evaluated points `x` (one per row) and their responses `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignOfExperiments {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl DesignOfExperiments {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::invalid(format!(
                "design has {} points but {} responses",
                x.nrows(),
                y.len()
            )));
        }
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::invalid("design must contain at least one point"));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("design contains non-finite values"));
        }
        Ok(Self { x, y })
    }

    pub fn from_rows(points: &[Vec<f64>], values: &[f64]) -> Result<Self> {
        let d = points.first().map_or(0, Vec::len);
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        let x = DMatrix::from_fn(points.len(), d, |i, j| points[i][j]);
        Self::new(x, DVector::from_column_slice(values))
    }

    /// Evaluates `objective` on every row of `x`.
    pub fn evaluate<O: Objective + ?Sized>(x: DMatrix<f64>, objective: &O) -> Result<Self> {
        let y = (0..x.nrows())
            .map(|i| {
                let p: Vec<f64> = x.row(i).iter().copied().collect();
                objective.evaluate(&p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(x, DVector::from_vec(y))
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.x.row(i).iter().copied().collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Index of the smallest response; the first one on ties.
    pub fn best_index(&self) -> usize {
        self.y.iter().enumerate().fold(0, |best, (i, &v)| if v < self.y[best] { i } else { best })
    }

    pub fn best_value(&self) -> f64 {
        self.y[self.best_index()]
    }

    pub fn push(&mut self, point: &[f64], value: f64) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: point.len() });
        }
        if !value.is_finite() || point.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cannot add non-finite values to a design"));
        }
        let n = self.len();
        let x = std::mem::replace(&mut self.x, DMatrix::zeros(0, 0));
        self.x = x.insert_row(n, 0.0);
        for (j, &v) in point.iter().enumerate() {
            self.x[(n, j)] = v;
        }
        let y = std::mem::replace(&mut self.y, DVector::zeros(0));
        self.y = y.push(value);
        Ok(())
    }
}

/// Predictive mean and variance at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

impl Prediction {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// An immutable fitted kriging surrogate.
#[derive(Debug, Clone)]
pub struct KrigingModel {
    doe: DesignOfExperiments,
    /// Design points stored column-wise for contiguous distance loops.
    points_t: DMatrix<f64>,
    theta: f64,
    mu_hat: f64,
    sigma2_hat: f64,
    jitter: f64,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
    r_inv_ones: DVector<f64>,
    ones_r_inv_ones: f64,
    log_det: f64,
}

/// Fits the constant-trend kriging model at a fixed length-scale.
pub fn fit(doe: &DesignOfExperiments, theta: f64) -> Result<KrigingModel> {
    let r = correlation_matrix(doe.x(), theta)?;
    let n = doe.len();
    let (chol, jitter) = factorize(r, theta, doe)?;

    let ones = DVector::from_element(n, 1.0);
    let r_inv_ones = chol.solve(&ones);
    let ones_r_inv_ones = r_inv_ones.sum();
    let y = doe.y();

    let (mu_hat, alpha, sigma2_hat) = if y.iter().all(|&v| v == y[0]) {
        // Exact degenerate case: zero residual whatever the correlation.
        (y[0], DVector::zeros(n), 0.0)
    } else {
        let mu_hat = r_inv_ones.dot(y) / ones_r_inv_ones;
        let residual = y.add_scalar(-mu_hat);
        let alpha = chol.solve(&residual);
        let sigma2_hat = (residual.dot(&alpha) / n as f64).max(0.0);
        (mu_hat, alpha, sigma2_hat)
    };

    let log_det = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();

    Ok(KrigingModel {
        points_t: doe.x().transpose(),
        doe: doe.clone(),
        theta,
        mu_hat,
        sigma2_hat,
        jitter,
        chol,
        alpha,
        r_inv_ones,
        ones_r_inv_ones,
        log_det,
    })
}

fn factorize(
    r: DMatrix<f64>,
    theta: f64,
    doe: &DesignOfExperiments,
) -> Result<(Cholesky<f64, Dyn>, f64)> {
    let n = r.nrows();
    let start = JITTER_PER_POINT * n as f64;
    let mut jitter = start;
    let mut last = start;
    while jitter <= MAX_JITTER.max(start) {
        let mut m = r.clone();
        for i in 0..n {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            if chol.l_dirty().diagonal().iter().all(|v| v.is_finite() && *v > 0.0) {
                return Ok((chol, jitter));
            }
        }
        last = jitter;
        jitter *= 10.0;
    }
    Err(Error::IllConditioned {
        theta,
        n,
        jitter: last,
        min_pair_distance: min_pair_distance(doe.x()),
    })
}

fn min_pair_distance(x: &DMatrix<f64>) -> f64 {
    let xt = x.transpose();
    let mut best = f64::INFINITY;
    for j in 0..xt.ncols() {
        for i in (j + 1)..xt.ncols() {
            best = best.min(euclidean_distance(xt.column(i).as_slice(), xt.column(j).as_slice()));
        }
    }
    best
}

impl KrigingModel {
    pub fn doe(&self) -> &DesignOfExperiments {
        &self.doe
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    /// Plug-in process variance; zero for a constant response.
    pub fn sigma2_hat(&self) -> f64 {
        self.sigma2_hat
    }

    /// Diagonal regularization actually used by the factorization.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Lower-triangular `L` with `L L' = R + jitter I`.
    pub fn lower_factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    /// `R^-1 (y - mu_hat 1)`.
    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    /// `log det (R + jitter I)`.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// Fitted kernel, or `None` when the process variance degenerated to zero.
    pub fn kernel(&self) -> Option<Kernel> {
        Kernel::new(self.theta, self.sigma2_hat).ok()
    }

    /// Correlations between `x` and the design, including the jitter at
    /// coincident points.
    fn cross_correlation(&self, x: &[f64]) -> DVector<f64> {
        let n = self.doe.len();
        DVector::from_iterator(
            n,
            (0..n).map(|i| {
                let d = euclidean_distance(self.points_t.column(i).as_slice(), x);
                if d == 0.0 {
                    1.0 + self.jitter
                } else {
                    correlation(d, self.theta)
                }
            }),
        )
    }

    /// Simple kriging with an estimated constant trend:
    ///
    /// ```text
    /// mean     = mu_hat + r' R^-1 (y - mu_hat 1)
    /// variance = sigma2_hat (1 + jitter - r' R^-1 r + (1 - 1' R^-1 r)^2 / 1' R^-1 1)
    /// ```
    ///
    /// The last term accounts for the uncertainty of the estimated trend.
    /// Variance is clamped at zero.
    pub fn predict(&self, x: &[f64]) -> Prediction {
        debug_assert_eq!(x.len(), self.doe.dim());
        let r = self.cross_correlation(x);
        let mean = self.mu_hat + r.dot(&self.alpha);
        if self.sigma2_hat == 0.0 {
            return Prediction { mean, variance: 0.0 };
        }
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&r)
            .expect("cholesky factor has a positive diagonal");
        let trend = 1.0 - self.r_inv_ones.dot(&r);
        let reduction = 1.0 + self.jitter - v.norm_squared() + trend * trend / self.ones_r_inv_ones;
        Prediction { mean, variance: (self.sigma2_hat * reduction).max(0.0) }
    }

    /// `-(n/2) log sigma2_hat - (1/2) log det R`, constants dropped.
    ///
    /// A zero process variance is floored at the smallest positive normal
    /// `f64`, so the value stays finite and the log-det term decides.
    pub fn concentrated_log_likelihood(&self) -> f64 {
        let n = self.doe.len() as f64;
        -0.5 * n * self.sigma2_hat.max(f64::MIN_POSITIVE).ln() - 0.5 * self.log_det
    }
}

pub fn concentrated_log_likelihood(doe: &DesignOfExperiments, theta: f64) -> Result<f64> {
    Ok(fit(doe, theta)?.concentrated_log_likelihood())
}

const ML_STARTS: usize = 10;
const ML_RELATIVE_RESOLUTION: f64 = 1e-3;

/// Maximum-likelihood length-scale within `bounds`.
///
/// Ten log-uniformly spaced starts (endpoints included); each start that is a
/// local maximum of the start grid is refined by golden-section search in
/// `log theta` over its neighboring grid cells. Equal likelihoods resolve to the
/// largest length-scale.
pub fn estimate_theta_ml(doe: &DesignOfExperiments, bounds: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bounds;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::invalid(format!("invalid length-scale bounds [{lo}, {hi}]")));
    }
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let step = (log_hi - log_lo) / (ML_STARTS - 1) as f64;
    let grid: Vec<f64> = (0..ML_STARTS)
        .map(|i| if i + 1 == ML_STARTS { log_hi } else { log_lo + step * i as f64 })
        .collect();

    let eval = |s: f64| -> Option<f64> {
        concentrated_log_likelihood(doe, s.exp()).ok().filter(|v| v.is_finite())
    };

    let grid_values: Vec<Option<f64>> = grid.iter().map(|&s| eval(s)).collect();
    let mut candidates: Vec<(f64, f64)> =
        grid.iter().zip(&grid_values).filter_map(|(&s, v)| v.map(|v| (s, v))).collect();
    if candidates.is_empty() {
        let err = fit(doe, lo).err().unwrap_or_else(|| Error::invalid("likelihood not finite"));
        return Err(err);
    }

    for i in 0..ML_STARTS {
        let Some(v) = grid_values[i] else { continue };
        let left = i.checked_sub(1).and_then(|j| grid_values[j]);
        let right = grid_values.get(i + 1).copied().flatten();
        if left.is_some_and(|l| l > v) || right.is_some_and(|r| r > v) {
            continue;
        }
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(ML_STARTS - 1)];
        if let Some(best) = golden_section_max(&eval, a, b, ML_RELATIVE_RESOLUTION.ln_1p()) {
            candidates.push(best);
        }
    }

    let best_value = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-10 * best_value.abs().max(1.0);
    let theta = candidates
        .iter()
        .filter(|c| c.1 >= best_value - tol)
        .map(|c| c.0)
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();
    Ok(theta.clamp(lo, hi))
}

/// Golden-section maximization on `[a, b]` until the bracket is narrower than
/// `width`. Returns the best `(argument, value)` seen.
fn golden_section_max<F>(f: &F, mut a: f64, mut b: f64, width: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> Option<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut best: Option<(f64, f64)> = None;
    let mut note = |s: f64, v: Option<f64>| {
        if let Some(v) = v {
            if best.is_none_or(|(bs, bv)| v > bv || (v == bv && s > bs)) {
                best = Some((s, v));
            }
        }
        v.unwrap_or(f64::NEG_INFINITY)
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = note(c, f(c));
    let mut fd = note(d, f(d));
    while (b - a) > width {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = note(c, f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = note(d, f(d));
        }
    }
    best
}

/// Draws one sample path of a zero-mean GP with `kernel` at the rows of `x`.
pub fn sample_prior<R: Rng + ?Sized>(
    x: &DMatrix<f64>,
    kernel: &Kernel,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let n = x.nrows();
    let mut k = correlation_matrix(x, kernel.theta())? * kernel.sigma2();
    for i in 0..n {
        k[(i, i)] += JITTER_PER_POINT * n as f64 * kernel.sigma2();
    }
    let chol = Cholesky::new(k).ok_or(Error::IllConditioned {
        theta: kernel.theta(),
        n,
        jitter: JITTER_PER_POINT * n as f64,
        min_pair_distance: min_pair_distance(x),
    })?;
    let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    Ok(chol.l() * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(points.len(), 1, points)
    }

    #[test]
    fn matern_at_zero_is_process_variance() {
        let k = Kernel::new(0.3, 2.0).unwrap();
        assert_eq!(matern52(0.0, &k).unwrap(), 2.0);
    }

    #[test]
    fn matern_decays_to_zero() {
        let k = Kernel::new(1.0, 1.0).unwrap();
        assert!(matern52(1e6, &k).unwrap() < 1e-12);
    }

    #[test]
    fn matern_at_one_length_scale() {
        // (1 + sqrt5 + 5/3) exp(-sqrt5), 40-digit reference.
        let k = Kernel::new(1.0, 1.0).unwrap();
        let v = matern52(1.0, &k).unwrap();
        assert!((v - 0.524_000_0).abs() < 1e-4);
        assert!((v - 0.523_994_108_831_820_3).abs() < 1e-15);
    }

    #[test]
    fn matern_rejects_negative_distance() {
        let k = Kernel::new(1.0, 1.0).unwrap();
        assert_eq!(matern52(-0.1, &k), Err(Error::NegativeDistance(-0.1)));
    }

    #[test]
    fn matern_strictly_decreasing() {
        let k = Kernel::new(0.7, 1.5).unwrap();
        let values: Vec<f64> = (0..400).map(|i| matern52(i as f64 * 0.01, &k).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        assert!(values.iter().all(|&v| v > 0.0 && v <= 1.5));
    }

    #[test]
    fn kernel_validates_parameters() {
        assert!(Kernel::new(0.0, 1.0).is_err());
        assert!(Kernel::new(1.0, 0.0).is_err());
        assert!(Kernel::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn correlation_matrix_single_point() {
        let r = correlation_matrix(&line(&[0.3]), 1.0).unwrap();
        assert_eq!(r, DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn correlation_matrix_identical_points() {
        let r = correlation_matrix(&line(&[0.3, 0.3]), 2.0).unwrap();
        assert_eq!(r, DMatrix::from_element(2, 2, 1.0));
    }

    #[test]
    fn correlation_matrix_matches_scalar_kernel() {
        let r = correlation_matrix(&line(&[0.0, 1.0, 3.0]), 1.0).unwrap();
        let k = Kernel::new(1.0, 1.0).unwrap();
        for (i, j, d) in [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)] {
            let expected = matern52(d, &k).unwrap();
            assert_eq!(r[(i, j)], expected);
            assert_eq!(r[(j, i)], expected);
        }
        // 40-digit references for distances 1, 2, 3.
        assert!((r[(0, 1)] - 0.523_994_108_831_820_3).abs() < 1e-15);
        assert!((r[(1, 2)] - 0.138_660_219_138_504_3).abs() < 1e-15);
        assert!((r[(0, 2)] - 0.027_723_421_914_625_81).abs() < 1e-15);
    }

    #[test]
    fn fit_single_point_is_degenerate() {
        let doe = DesignOfExperiments::new(line(&[1.0]), DVector::from_element(1, 5.0)).unwrap();
        let m = fit(&doe, 0.5).unwrap();
        assert_eq!(m.mu_hat(), 5.0);
        assert_eq!(m.sigma2_hat(), 0.0);
        assert!(m.kernel().is_none());
    }

    #[test]
    fn fit_constant_response() {
        let x = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 0.5, -2.0, 3.0, 4.0, -1.0]);
        let doe = DesignOfExperiments::new(x, DVector::from_element(4, -3.25)).unwrap();
        for theta in [0.01, 0.7, 9.0] {
            let m = fit(&doe, theta).unwrap();
            assert_eq!(m.mu_hat(), -3.25);
            assert_eq!(m.sigma2_hat(), 0.0);
            let p = m.predict(&[0.2, 0.2]);
            assert_eq!(p, Prediction { mean: -3.25, variance: 0.0 });
        }
    }

    #[test]
    fn two_point_likelihood_closed_form() {
        // R = [[1, rho], [rho, 1]]: mu_hat = (a+b)/2,
        // sigma2_hat = (a-b)^2 / (4 (1-rho)), log det = log(1 - rho^2).
        // x = {0, 1}, theta = 1, y = {1, 3}; 40-digit reference values.
        let doe =
            DesignOfExperiments::new(line(&[0.0, 1.0]), DVector::from_vec(vec![1.0, 3.0])).unwrap();
        let m = fit(&doe, 1.0).unwrap();
        assert!((m.mu_hat() - 2.0).abs() < 1e-12);
        assert!((m.sigma2_hat() - 2.100_814_335_608_056).abs() < 1e-8);
        let ll = concentrated_log_likelihood(&doe, 1.0).unwrap();
        assert!((ll - (-0.581_829_820_042_315)).abs() < 1e-8);
    }

    #[test]
    fn predict_far_away_recovers_prior() {
        let doe = DesignOfExperiments::new(
            line(&[-1.0, 0.0, 2.0]),
            DVector::from_vec(vec![3.0, -1.0, 0.5]),
        )
        .unwrap();
        let m = fit(&doe, 0.2).unwrap();
        let p = m.predict(&[1e4]);
        assert!((p.mean - m.mu_hat()).abs() < 1e-12);
        // Prior variance plus the estimated-trend correction.
        let expected = m.sigma2_hat() * (1.0 + m.jitter() + 1.0 / m.r_inv_ones.sum());
        assert!((p.variance - expected).abs() < 1e-12 * expected);
        assert!((p.variance / m.sigma2_hat() - 1.0).abs() < 0.5);
    }

    #[test]
    fn predict_interpolates_design() {
        let x = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 2.0, -1.5, 0.5]);
        let doe = DesignOfExperiments::new(x, DVector::from_vec(vec![1.0, 4.0, -2.0])).unwrap();
        let m = fit(&doe, 1.3).unwrap();
        for i in 0..3 {
            let p = m.predict(&doe.point(i));
            assert!((p.mean - doe.y()[i]).abs() < 1e-10);
            assert!(p.variance <= 1e-10 * m.sigma2_hat());
        }
    }

    #[test]
    fn lower_factor_reproduces_regularized_matrix() {
        let x = DMatrix::from_row_slice(4, 1, &[0.0, 0.4, 1.1, 3.0]);
        let doe = DesignOfExperiments::new(x.clone(), DVector::from_vec(vec![1.0, 2.0, 0.0, 5.0]))
            .unwrap();
        let m = fit(&doe, 2.0).unwrap();
        let l = m.lower_factor();
        let mut r = correlation_matrix(&x, 2.0).unwrap();
        for i in 0..4 {
            r[(i, i)] += m.jitter();
        }
        let diff = (&l * l.transpose() - &r).norm() / r.norm();
        assert!(diff < 1e-10);
    }

    #[test]
    fn duplicate_points_are_regularized() {
        let doe = DesignOfExperiments::new(
            line(&[0.0, 1.0, 1.0]),
            DVector::from_vec(vec![0.0, 1.0, 1.0]),
        )
        .unwrap();
        let m = fit(&doe, 1.0).unwrap();
        assert!(m.jitter() >= 3e-10);
        assert!(m.sigma2_hat().is_finite());
    }

    #[test]
    fn design_validation() {
        assert!(DesignOfExperiments::new(line(&[0.0, 1.0]), DVector::from_vec(vec![1.0])).is_err());
        assert!(DesignOfExperiments::new(DMatrix::zeros(0, 1), DVector::zeros(0)).is_err());
        assert!(DesignOfExperiments::new(line(&[f64::NAN]), DVector::from_vec(vec![1.0])).is_err());
        assert!(matches!(
            DesignOfExperiments::from_rows(&[vec![0.0, 1.0], vec![1.0]], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn design_push_and_best() {
        let mut doe =
            DesignOfExperiments::from_rows(&[vec![0.0, 1.0], vec![2.0, 3.0]], &[4.0, 1.0]).unwrap();
        doe.push(&[5.0, 6.0], 1.0).unwrap();
        assert_eq!(doe.len(), 3);
        assert_eq!(doe.point(2), vec![5.0, 6.0]);
        assert_eq!(doe.best_index(), 1);
        assert!(doe.push(&[1.0], 0.0).is_err());
    }

    #[test]
    fn ml_constant_response_prefers_largest_theta() {
        let doe =
            DesignOfExperiments::new(line(&[-3.0, -1.0, 0.5, 4.0]), DVector::from_element(4, 2.0))
                .unwrap();
        let theta = estimate_theta_ml(&doe, (0.01, 10.0)).unwrap();
        assert_eq!(theta, 10.0);
    }

    #[test]
    fn ml_rejects_bad_bounds() {
        let doe = DesignOfExperiments::new(line(&[0.0]), DVector::from_element(1, 1.0)).unwrap();
        assert!(estimate_theta_ml(&doe, (1.0, 1.0)).is_err());
        assert!(estimate_theta_ml(&doe, (0.0, 1.0)).is_err());
    }

    #[test]
    fn ml_sphere_fixture() {
        // Four-point 1D sphere design; reference maximizer 5.34.
        let xs = [-5.0, -2.0, 2.0, 5.0];
        let y: Vec<f64> = xs.iter().map(|x: &f64| (x - 2.5).powi(2)).collect();
        let doe = DesignOfExperiments::new(line(&xs), DVector::from_vec(y)).unwrap();
        let theta = estimate_theta_ml(&doe, ML_THETA_BOUNDS).unwrap();
        assert!((theta - 5.34).abs() < 0.2 * 5.34, "theta = {theta}");
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let f = |s: f64| Some(-(s - 0.3) * (s - 0.3));
        let (s, _) = golden_section_max(&f, -1.0, 2.0, 1e-6).unwrap();
        assert!((s - 0.3).abs() < 1e-6);
    }
}
