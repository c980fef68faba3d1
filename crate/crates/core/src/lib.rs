//! Kriging-based Efficient Global Optimization (EGO).
//!
//! Three optimization loops share one isotropic Matérn 5/2 kriging surrogate:
//!
//! * [`optimizers::run_ego`]: classical EGO, re-estimating the length-scale by
//!   maximum likelihood after every evaluation.
//! * [`optimizers::run_greedy_sweep`]: a toy oracle that tries a whole grid of
//!   length-scales per iteration, evaluates the objective at every resulting
//!   infill point and keeps the best one.
//! * [`optimizers::run_ensemble_ego`]: EGO driven by a small ensemble of kriging
//!   models with log-LHS sampled length-scales, an exclusion radius around
//!   design points, and two extra models densified around the best length-scale.
//!
//! The [`bench`] module reproduces desk-scale benchmark runs on shifted Sphere,
//! Ackley and Rastrigin functions and writes convergence CSVs.
//!
//! ```
//! use kriging_ego::design::{BenchmarkFunction, BenchmarkKind, BoxDomain, lhs};
//! use kriging_ego::kriging::DesignOfExperiments;
//! use kriging_ego::optimizers::{run_ego, EgoConfig};
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let sphere = BenchmarkFunction::new(BenchmarkKind::Sphere, 1);
//! let domain = BoxDomain::cube(1, -5.0, 5.0).unwrap();
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let x = lhs(4, &domain, &mut rng);
//! let doe = DesignOfExperiments::evaluate(x, &sphere).unwrap();
//! let records = run_ego(&sphere, &doe, 8, &EgoConfig::new(domain), &mut rng).unwrap();
//! assert_eq!(records.len(), 8);
//! ```

pub mod acquisition;
pub mod bench;
pub mod design;
mod error;
pub mod kriging;
pub mod optimizers;

pub use error::{Error, Result};
