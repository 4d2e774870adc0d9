//! Convergence rates of stochastic restart descent algorithms.
//!
//! A restart algorithm on a finite landscape either takes a steepest-descent
//! step (with probability `p` while inside a set `A`) or redraws its state
//! from a fixed measure `μ`. The tail of the hitting time of the ε-sublevel
//! set decays geometrically, and its exponent is governed by the critical
//! root `ξ_crit` of a polynomial-like function `Q(ξ, p)` built from a small
//! distributional summary of the landscape (a [`LandscapeProfile`]).
//!
//! The crate is organised by capability:
//!
//! - [`landscape`]: concrete finite landscapes, descent, wells, depth
//!   profiles and the annealing difficulty constant.
//! - [`profile`] / [`profile_gen`]: depth profiles and the random and
//!   parametric profile families.
//! - [`rate`]: `Q`, its special cases, `ξ_crit`, the optimal randomization
//!   level and the sufficiency checks.
//! - [`bounds`]: the universal constants `α*`, `γ*` and the two-sided rate
//!   interval.
//! - [`chain`]: the exact restart kernel, its spectral tail exponent and a
//!   Monte Carlo estimator.
//! - [`experiments`]: tabular experiment drivers and CSV/JSON/SVG output.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod bounds;
pub mod chain;
pub mod error;
pub mod experiments;
pub mod landscape;
pub mod profile;
pub mod profile_gen;
pub mod rate;

pub use bounds::{rate_interval, solve_alpha_gamma, BoundConstants};
pub use chain::{RestartKernel, SurvivalCurve, TailEstimate};
pub use error::{Error, Result};
pub use experiments::ExperimentTable;
pub use landscape::{DiscreteLandscape, RestartSet, SetDecomposition};
pub use profile::LandscapeProfile;
pub use profile_gen::{Family, FamilySpec, TrapSplit};
pub use rate::{AlgorithmConfig, Mode, RateResult};
