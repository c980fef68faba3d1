use crate::design::min_distance;
use crate::error::{Error, Result};
use crate::kriging::DesignOfExperiments;

/// Smallest and largest length-scales produced by densification.
pub const DENSIFY_BOUNDS: (f64, f64) = (0.01, 10.0);

/// Linearly shrinking exclusion radius around design points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSchedule {
    r1: f64,
    t_threshold: usize,
    t_max: usize,
}

impl RadiusSchedule {
    pub fn new(r1: f64, t_threshold: usize, t_max: usize) -> Result<Self> {
        if !(r1 >= 0.0 && r1.is_finite()) {
            return Err(Error::invalid(format!("initial radius must be non-negative, got {r1}")));
        }
        if t_threshold == 0 || t_threshold > t_max {
            return Err(Error::invalid(format!(
                "need 1 <= t_threshold <= t_max, got {t_threshold} and {t_max}"
            )));
        }
        Ok(Self { r1, t_threshold, t_max })
    }

    /// Threshold at `percent` of `t_max`, rounded up.
    pub fn with_threshold_percent(r1: f64, t_max: usize, percent: usize) -> Result<Self> {
        let t_threshold = (percent * t_max).div_ceil(100).clamp(1, t_max.max(1));
        Self::new(r1, t_threshold, t_max)
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn t_threshold(&self) -> usize {
        self.t_threshold
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// `R1 - R1 (t - 1) / t_threshold` up to `t_threshold`, zero afterwards.
    ///
    /// Evaluated as `R1 (t_threshold - t + 1) / t_threshold`, which is exact at
    /// `t = 1` and `t = t_threshold`.
    pub fn radius(&self, t: usize) -> f64 {
        assert!(t >= 1, "iterations are counted from 1");
        match t {
            1 => self.r1,
            t if t > self.t_threshold => 0.0,
            t => self.r1 * (self.t_threshold + 1 - t) as f64 / self.t_threshold as f64,
        }
    }
}

/// Half the distance from the best design point to its nearest neighbor.
pub fn initial_radius(doe: &DesignOfExperiments) -> Result<f64> {
    if doe.len() < 2 {
        return Err(Error::invalid("initial radius needs at least two design points"));
    }
    let best = doe.best_index();
    let others = doe.x().clone().remove_row(best);
    Ok(0.5 * min_distance(&doe.point(best), &others))
}

/// Two length-scales bracketing `thetas[star]`, a third of the way towards its
/// neighbors; the ends of the list extend to the densification bounds.
pub fn densify_lengthscales(thetas: &[f64], star: usize) -> Result<(f64, f64)> {
    let q = thetas.len();
    if q < 2 {
        return Err(Error::invalid("densification needs at least two length-scales"));
    }
    if star >= q {
        return Err(Error::invalid(format!(
            "star index {star} out of range for {q} length-scales"
        )));
    }
    if thetas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("length-scales must be sorted ascending"));
    }
    let t = thetas[star];
    let lower = if star == 0 { DENSIFY_BOUNDS.0 } else { t - (t - thetas[star - 1]) / 3.0 };
    let upper = if star == q - 1 { DENSIFY_BOUNDS.1 } else { t + (thetas[star + 1] - t) / 3.0 };
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_endpoints() {
        let s = RadiusSchedule::new(7.0, 10, 20).unwrap();
        assert_eq!(s.radius(1), 7.0);
        assert_eq!(s.radius(10), 0.7);
        assert_eq!(s.radius(11), 0.0);
        assert_eq!(s.radius(20), 0.0);
    }

    #[test]
    fn radius_is_nonincreasing() {
        let s = RadiusSchedule::new(3.2, 52, 75).unwrap();
        let r: Vec<f64> = (1..=75).map(|t| s.radius(t)).collect();
        assert!(r.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r[52], 0.0);
        assert!(r[51] > 0.0);
    }

    #[test]
    fn threshold_from_percent() {
        assert_eq!(RadiusSchedule::with_threshold_percent(1.0, 10, 70).unwrap().t_threshold(), 7);
        assert_eq!(RadiusSchedule::with_threshold_percent(1.0, 75, 70).unwrap().t_threshold(), 53);
        assert_eq!(RadiusSchedule::with_threshold_percent(1.0, 1, 70).unwrap().t_threshold(), 1);
    }

    #[test]
    fn schedule_validation() {
        assert!(RadiusSchedule::new(-1.0, 1, 1).is_err());
        assert!(RadiusSchedule::new(1.0, 0, 1).is_err());
        assert!(RadiusSchedule::new(1.0, 3, 2).is_err());
    }

    #[test]
    fn initial_radius_examples() {
        let doe = DesignOfExperiments::from_rows(&[vec![0.0], vec![4.0]], &[1.0, 2.0]).unwrap();
        assert_eq!(initial_radius(&doe).unwrap(), 2.0);
        let dup =
            DesignOfExperiments::from_rows(&[vec![1.0], vec![1.0], vec![5.0]], &[0.0, 3.0, 4.0])
                .unwrap();
        assert_eq!(initial_radius(&dup).unwrap(), 0.0);
        let single = DesignOfExperiments::from_rows(&[vec![0.0]], &[1.0]).unwrap();
        assert!(initial_radius(&single).is_err());
    }

    #[test]
    fn densify_rules() {
        let thetas = [1.0, 2.0, 3.0, 4.0, 5.0];
        let (lo, hi) = densify_lengthscales(&thetas, 2).unwrap();
        assert!((lo - 8.0 / 3.0).abs() < 1e-15 && (hi - 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(densify_lengthscales(&thetas, 0).unwrap(), (0.01, 1.0 + 1.0 / 3.0));
        assert_eq!(densify_lengthscales(&thetas, 4).unwrap(), (5.0 - 1.0 / 3.0, 10.0));
    }

    #[test]
    fn densify_rejects_bad_input() {
        assert!(densify_lengthscales(&[1.0], 0).is_err());
        assert!(densify_lengthscales(&[1.0, 2.0], 2).is_err());
        assert!(densify_lengthscales(&[2.0, 1.0], 0).is_err());
    }
}
