//! Learning-augmented online TSP on the real line.
//!
//! The crate bundles an exact event-driven simulator for a unit-speed agent,
//! prediction-augmented online algorithms (`farfirst`, `nearfirst`, `pivot`)
//! and a prediction-free baseline (`waitcopy`), an exact offline oracle,
//! adaptive adversaries that realize the known lower-bound constructions, and
//! an experiment harness for error sweeps.
//!
//! All positions and times are `f64`; equality tests use the absolute
//! tolerance [`EPS`].

pub mod adversaries;
pub mod algorithms;
pub mod engine;
pub mod experiment;
pub mod instance;
pub mod oracle;
pub mod predictions;
pub mod trajectory;

/// Absolute tolerance for position and time comparisons.
pub const EPS: f64 = 1e-9;

pub use instance::{normalize_instance, Extremes, Instance, Label, PredictionSet, Request, Variant};
pub use oracle::{opt, opt_bruteforce, opt_dp, opt_dp_both, OracleResult};
pub use trajectory::{evaluate, SimResult, Trajectory};
