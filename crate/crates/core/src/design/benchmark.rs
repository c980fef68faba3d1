use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use super::Objective;
use crate::error::{Error, Result};

/// Every coordinate of the global minimizer.
pub const OPTIMUM_COORDINATE: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Sphere,
    Ackley,
    Rastrigin,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 3] =
        [BenchmarkKind::Sphere, BenchmarkKind::Ackley, BenchmarkKind::Rastrigin];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Ackley => "ackley",
            BenchmarkKind::Rastrigin => "rastrigin",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown benchmark function `{s}`")))
    }
}

/// A benchmark shifted so that its minimum value 0 is attained at
/// `(2.5, ..., 2.5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkFunction {
    kind: BenchmarkKind,
    offset: Vec<f64>,
}

impl BenchmarkFunction {
    pub fn new(kind: BenchmarkKind, dimension: usize) -> Self {
        Self { kind, offset: vec![OPTIMUM_COORDINATE; dimension] }
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.offset.len()
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: x.len() });
        }
        let z = x.iter().zip(&self.offset).map(|(v, o)| v - o);
        let d = self.dimension() as f64;
        let value = match self.kind {
            BenchmarkKind::Sphere => z.map(|v| v * v).sum(),
            BenchmarkKind::Ackley => {
                let (sq, cos) =
                    z.fold((0.0, 0.0), |(sq, cos), v| (sq + v * v, cos + (2.0 * PI * v).cos()));
                // 20 (1 - exp(-0.2 rms)) + (e - exp(mean cos)); same as the
                // textbook form, but exactly zero at the optimum.
                20.0 * (1.0 - (-0.2 * (sq / d).sqrt()).exp()) + (E - (cos / d).exp())
            }
            // 10 d + sum(z^2 - 10 cos(2 pi z)), grouped per coordinate.
            BenchmarkKind::Rastrigin => {
                z.map(|v| v * v + 10.0 * (1.0 - (2.0 * PI * v).cos())).sum()
            }
        };
        Ok(value)
    }
}

impl Objective for BenchmarkFunction {
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        BenchmarkFunction::evaluate(self, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_offset() {
        for kind in BenchmarkKind::ALL {
            for d in [1, 2, 5] {
                let f = BenchmarkFunction::new(kind, d);
                assert_eq!(f.evaluate(&vec![2.5; d]).unwrap(), 0.0, "{kind} d={d}");
            }
        }
    }

    #[test]
    fn sphere_corner() {
        let f = BenchmarkFunction::new(BenchmarkKind::Sphere, 1);
        assert_eq!(f.evaluate(&[-5.0]).unwrap(), 56.25);
    }

    #[test]
    fn rastrigin_unit_shift() {
        let f = BenchmarkFunction::new(BenchmarkKind::Rastrigin, 2);
        assert!((f.evaluate(&[3.5, 2.5]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ackley_matches_textbook_form() {
        let f = BenchmarkFunction::new(BenchmarkKind::Ackley, 3);
        let x = [0.3, -4.1, 1.7];
        let z: Vec<f64> = x.iter().map(|v| v - 2.5).collect();
        let textbook = -20.0 * (-0.2 * (z.iter().map(|v| v * v).sum::<f64>() / 3.0).sqrt()).exp()
            - (z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / 3.0).exp()
            + 20.0
            + E;
        assert!((f.evaluate(&x).unwrap() - textbook).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let f = BenchmarkFunction::new(BenchmarkKind::Sphere, 2);
        assert_eq!(f.evaluate(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn names_round_trip() {
        for kind in BenchmarkKind::ALL {
            assert_eq!(kind.name().parse::<BenchmarkKind>().unwrap(), kind);
        }
        assert!("griewank".parse::<BenchmarkKind>().is_err());
    }
}
