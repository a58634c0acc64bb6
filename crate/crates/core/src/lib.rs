//! Cumulative prospect theory (CPT) evaluation and CPT-driven dynamic
//! programming on finite models.
//!
//! - [`functional`] and [`quadrature`]: the CPT functional of a discrete law,
//!   exactly and by numerical integration.
//! - [`estimator`]: the order-statistics estimator from i.i.d. samples.
//! - [`mdp`]: finite Markov control models, discounted or transient.
//! - [`bellman`]: CPT Bellman operators, action-simplex minimisation and
//!   value iteration.
//! - [`diagnostics`]: numerical checks of monotonicity and contraction.
//! - [`generators`] and [`io`]: seeded instances and TOML file formats.

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod bellman;
pub mod diagnostics;
pub mod distribution;
pub mod error;
pub mod estimator;
pub mod functional;
pub mod generators;
pub mod io;
pub mod mdp;
pub mod quadrature;
pub mod seed;
pub mod simplex;
pub mod utility;
pub mod weighting;

pub use bellman::{value_iteration, SolveConfig, SolveResult};
pub use distribution::{Atom, DiscreteDistribution};
pub use error::{Error, Result};
pub use functional::{cpt_value_exact, cpt_value_subnormalized, CptSpec};
pub use generators::InstanceGenerator;
pub use mdp::{MarkovModel, Mode, RandomizedPolicy, ValueFunction};
pub use quadrature::cpt_value_quadrature;
pub use utility::UtilityFunction;
pub use weighting::WeightingFunction;

/// Slack for mass and normalization checks.
pub const MASS_TOLERANCE: f64 = 1e-12;
