use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::BenchError;
use crate::acquisition::default_search_budget;
use crate::design::{BenchmarkKind, BoxDomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ego,
    Ensemble,
    GreedySweep,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ego => "ego",
            Algorithm::Ensemble => "ensemble",
            Algorithm::GreedySweep => "greedy-sweep",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        [Algorithm::Ego, Algorithm::Ensemble, Algorithm::GreedySweep]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Raw run settings from a config file and command-line flags; unset values
/// fall back to defaults in [`RunSettings::resolve`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSettings {
    pub algorithm: Option<Algorithm>,
    pub function: Option<BenchmarkKind>,
    pub dim: Option<usize>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub init_size: Option<usize>,
    pub budget: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub ei_search_budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub q: Option<usize>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_count: Option<usize>,
    pub initial_design: Option<Vec<Vec<f64>>>,
    pub densify_on_updated_doe: Option<bool>,
    pub max_evaluations: Option<usize>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, BenchError> {
    value.parse().map_err(|_| BenchError::Config(format!("invalid value `{value}` for `{key}`")))
}

/// `x0,x1;x0,x1;...`, one point per `;`.
pub fn parse_points(s: &str) -> Result<Vec<Vec<f64>>, BenchError> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.split(',').map(|v| parse::<f64>("initial_design", v.trim())).collect())
        .collect()
}

fn format_points(points: &[Vec<f64>]) -> String {
    points
        .iter()
        .map(|p| p.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

impl RunSettings {
    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        let text = fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, BenchError> {
        let mut settings = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                BenchError::Config(format!("line {}: expected `key = value`", n + 1))
            })?;
            settings.set(key.trim(), value.trim())?;
        }
        Ok(settings)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), BenchError> {
        match key {
            "algorithm" => self.algorithm = Some(value.parse()?),
            "function" => {
                self.function = Some(
                    value.parse().map_err(|e: crate::Error| BenchError::Config(e.to_string()))?,
                )
            }
            "dim" => self.dim = Some(parse(key, value)?),
            "lower" => self.lower = Some(parse(key, value)?),
            "upper" => self.upper = Some(parse(key, value)?),
            "init_size" => self.init_size = Some(parse(key, value)?),
            "budget" => self.budget = Some(parse(key, value)?),
            "reps" => self.reps = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "ei_search_budget" => self.ei_search_budget = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "q" => self.q = Some(parse(key, value)?),
            "theta_min" => self.theta_min = Some(parse(key, value)?),
            "theta_max" => self.theta_max = Some(parse(key, value)?),
            "theta_count" => self.theta_count = Some(parse(key, value)?),
            "initial_design" => self.initial_design = Some(parse_points(value)?),
            "densify_on_updated_doe" => self.densify_on_updated_doe = Some(parse(key, value)?),
            "max_evaluations" => {
                self.max_evaluations = if value == "none" { None } else { Some(parse(key, value)?) }
            }
            _ => return Err(BenchError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Values set in `other` win.
    pub fn merged_with(mut self, other: RunSettings) -> Self {
        macro_rules! take {
            ($($field:ident),*) => { $( if other.$field.is_some() { self.$field = other.$field; } )* };
        }
        take!(
            algorithm,
            function,
            dim,
            lower,
            upper,
            init_size,
            budget,
            reps,
            seed,
            ei_search_budget,
            out,
            q,
            theta_min,
            theta_max,
            theta_count,
            initial_design,
            densify_on_updated_doe,
            max_evaluations
        );
        self
    }

    pub fn resolve(self) -> Result<RunConfig, BenchError> {
        let missing = |k: &str| BenchError::Config(format!("missing required setting `{k}`"));
        let algorithm = self.algorithm.ok_or_else(|| missing("algorithm"))?;
        let function = self.function.ok_or_else(|| missing("function"))?;
        let output_dir = self.out.ok_or_else(|| missing("out"))?;

        let dim = match (&self.initial_design, self.dim) {
            (Some(points), Some(d)) if points.iter().any(|p| p.len() != d) => {
                return Err(BenchError::Config(format!(
                    "initial design points must have {d} coordinates"
                )))
            }
            (Some(points), None) => points.first().map_or(5, Vec::len),
            (_, d) => d.unwrap_or(5),
        };
        if let Some(points) = &self.initial_design {
            if points.is_empty() || points.iter().any(|p| p.len() != dim) {
                return Err(BenchError::Config("malformed initial design".into()));
            }
        }
        let domain = BoxDomain::cube(dim, self.lower.unwrap_or(-5.0), self.upper.unwrap_or(5.0))
            .map_err(|e| BenchError::Config(e.to_string()))?;

        let init_size = match &self.initial_design {
            Some(points) => points.len(),
            None => self.init_size.unwrap_or(3 * dim),
        };
        let budget = self.budget.unwrap_or(match algorithm {
            Algorithm::Ego => 70 * dim,
            Algorithm::Ensemble => 15 * dim,
            Algorithm::GreedySweep => 15,
        });
        let repetitions = self.reps.unwrap_or(match algorithm {
            Algorithm::Ego => 5,
            Algorithm::Ensemble => 8,
            Algorithm::GreedySweep => 1,
        });

        let config = RunConfig {
            algorithm,
            function,
            dim,
            domain,
            init_size,
            budget,
            repetitions,
            base_seed: self.seed.unwrap_or(0),
            ei_search_budget: self.ei_search_budget.unwrap_or(default_search_budget(dim)),
            output_dir,
            q: self.q.unwrap_or(5),
            theta_min: self.theta_min.unwrap_or(0.01),
            theta_max: self.theta_max.unwrap_or(20.0),
            theta_count: self.theta_count.unwrap_or(200),
            initial_design: self.initial_design,
            densify_on_updated_doe: self.densify_on_updated_doe.unwrap_or(false),
            max_evaluations: self.max_evaluations,
        };
        config.validate()?;
        Ok(config)
    }
}

/// A fully resolved benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub function: BenchmarkKind,
    pub dim: usize,
    pub domain: BoxDomain,
    pub init_size: usize,
    /// Total evaluations for `ego`, iterations for `ensemble` and `greedy-sweep`.
    pub budget: usize,
    pub repetitions: usize,
    pub base_seed: u64,
    pub ei_search_budget: usize,
    pub output_dir: PathBuf,
    pub q: usize,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_count: usize,
    pub initial_design: Option<Vec<Vec<f64>>>,
    pub densify_on_updated_doe: bool,
    pub max_evaluations: Option<usize>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        for (name, v) in [
            ("dim", self.dim),
            ("init_size", self.init_size),
            ("budget", self.budget),
            ("reps", self.repetitions),
            ("ei_search_budget", self.ei_search_budget),
            ("theta_count", self.theta_count),
        ] {
            if v == 0 {
                return bad(format!("`{name}` must be positive"));
            }
        }
        if self.algorithm == Algorithm::Ego && self.budget < self.init_size {
            return bad(format!(
                "ego budget {} is smaller than the initial design size {}",
                self.budget, self.init_size
            ));
        }
        if self.algorithm == Algorithm::Ensemble {
            if self.init_size < 2 {
                return bad("ensemble needs an initial design of at least 2 points".into());
            }
            if self.q < 2 {
                return bad("`q` must be at least 2".into());
            }
        }
        if !(self.theta_min > 0.0 && self.theta_min <= self.theta_max) {
            return bad("need 0 < theta_min <= theta_max".into());
        }
        if let Some(points) = &self.initial_design {
            if points.iter().any(|p| !self.domain.contains(p)) {
                return bad("initial design point outside the domain".into());
            }
        }
        Ok(())
    }

    /// Every setting as `key = value` lines, readable back as a config file.
    pub fn to_settings_text(&self) -> String {
        let mut lines = vec![
            format!("algorithm = {}", self.algorithm),
            format!("function = {}", self.function),
            format!("dim = {}", self.dim),
            format!("lower = {}", self.domain.lower()[0]),
            format!("upper = {}", self.domain.upper()[0]),
            format!("init_size = {}", self.init_size),
            format!("budget = {}", self.budget),
            format!("reps = {}", self.repetitions),
            format!("seed = {}", self.base_seed),
            format!("ei_search_budget = {}", self.ei_search_budget),
            format!("out = {}", self.output_dir.display()),
            format!("q = {}", self.q),
            format!("theta_min = {}", self.theta_min),
            format!("theta_max = {}", self.theta_max),
            format!("theta_count = {}", self.theta_count),
        ];
        if let Some(points) = &self.initial_design {
            lines.push(format!("initial_design = {}", format_points(points)));
        }
        lines.push(format!("densify_on_updated_doe = {}", self.densify_on_updated_doe));
        lines.push(format!(
            "max_evaluations = {}",
            self.max_evaluations.map_or("none".to_string(), |v| v.to_string())
        ));
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_dimension() {
        let s =
            RunSettings::from_text("algorithm = ego\nfunction = sphere\nout = /tmp/x\n").unwrap();
        let c = s.resolve().unwrap();
        assert_eq!((c.dim, c.init_size, c.budget, c.repetitions), (5, 15, 350, 5));
        assert_eq!(c.ei_search_budget, 10_000);

        let s = RunSettings::from_text("algorithm = ensemble\nfunction = ackley\nout = o\ndim = 2")
            .unwrap();
        let c = s.resolve().unwrap();
        assert_eq!((c.init_size, c.budget, c.repetitions, c.q), (6, 30, 8, 5));
    }

    #[test]
    fn settings_text_round_trips() {
        let text = "algorithm = greedy-sweep # toy\nfunction = rastrigin\nout = o\n\
                    initial_design = -5;-2;2;5\nmax_evaluations = 40\n";
        let c = RunSettings::from_text(text).unwrap().resolve().unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.init_size, 4);
        let again = RunSettings::from_text(&c.to_settings_text()).unwrap().resolve().unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn overrides_win() {
        let base =
            RunSettings::from_text("algorithm = ego\nfunction = sphere\nout = a\ndim = 3").unwrap();
        let cli = RunSettings { dim: Some(2), out: Some("b".into()), ..Default::default() };
        let c = base.merged_with(cli).resolve().unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(c.output_dir, PathBuf::from("b"));
    }

    #[test]
    fn invalid_settings() {
        assert!(RunSettings::from_text("nonsense").is_err());
        assert!(RunSettings::from_text("colour = red").is_err());
        assert!(RunSettings::from_text("algorithm = cma").is_err());
        assert!(RunSettings::from_text("function = sphere\nout = o").unwrap().resolve().is_err());
        let bad_budget = "algorithm = ego\nfunction = sphere\nout = o\nbudget = 3";
        assert!(RunSettings::from_text(bad_budget).unwrap().resolve().is_err());
        let outside = "algorithm = ego\nfunction = sphere\nout = o\ninitial_design = 7;1";
        assert!(RunSettings::from_text(outside).unwrap().resolve().is_err());
    }
}
