//! Olive Ridley Survival (ORS) optimizer and experiment harness.
//!
//! The crate has three layers:
//!
//! * domain types shared by every optimizer and problem ([`Hatchling`],
//!   [`SearchSpace`], [`ObjectiveSpec`], [`RandomSource`],
//!   [`ConvergenceTrace`]),
//! * the optimizers and problems themselves ([`optimizer`] for ORS,
//!   [`baselines`] for differential evolution and uniform random search,
//!   [`benchmarks`] for the 14 classical test functions, [`engineering`]
//!   for the three constrained design problems),
//! * a batch experiment runner ([`campaign`]) plus the descriptive and
//!   nonparametric statistics it reports ([`stats`]).
//!
//! Everything is seed-deterministic: the same configuration and seed
//! produce bit-identical results, including the emitted report files.

pub mod baselines;
pub mod benchmarks;
pub mod campaign;
pub mod engineering;
mod error;
pub mod hatchling;
pub mod objective;
pub mod optimizer;
pub mod rng;
pub mod space;
pub mod stats;
pub mod trace;

pub use error::{Error, Result};
pub use hatchling::{EmergenceAssignment, EmergenceOrder, Hatchling};
pub use objective::ObjectiveSpec;
pub use optimizer::{optimize, OrsParams};
pub use rng::RandomSource;
pub use space::SearchSpace;
pub use trace::{ConvergenceTrace, Solution};
