//! Random instance generation and error sweeps.
//!
//! Every instance index gets its own ChaCha8 stream (`seed`, stream = index),
//! so a sweep produces the same rows whether it runs serially or on many
//! threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::AlgoKind;
use crate::engine::{check_run, competitive_ratio, run_instance, SimError};
use crate::instance::{normalize_instance, Instance, Label, Request, ValidationError, Variant};
use crate::oracle::{ender_distances, opt_dp_both, OracleError, OracleResult};
use crate::predictions::{apply_mould, eta_error, Mould, PredictionError};

mod aggregate;
mod config;
mod render;

pub use aggregate::{error_grid, max_ratio_curve, percentile_grid, ratio_curve_at, Curve, Grid};
pub use config::{steps, ExperimentConfig, ReportConfig};
pub use render::{
    color_for, curve_csv, curves_svg, grid_csv, grid_svg, parse_grid_csv, read_rows, write_rows,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance {id}: {source}")]
    Oracle { id: usize, source: OracleError },
    #[error("instance {id}, {algo}: {source}")]
    Simulation { id: usize, algo: AlgoKind, source: SimError },
    #[error("instance {id}, {algo}: run invariant broken: {msg}")]
    Invariant { id: usize, algo: AlgoKind, msg: String },
    #[error(transparent)]
    Prediction(#[from] PredictionError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_max: usize,
    pub c: f64,
    pub r_max: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n_max: 20, c: 2.0, r_max: 6.0, seed: 0 }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_max < 2 {
            return Err(ExperimentError::InvalidParams(format!("n_max must be at least 2, got {}", self.n_max)));
        }
        if !self.c.is_finite() || self.c < 1.0 {
            return Err(ExperimentError::InvalidParams(format!("c must be at least 1, got {}", self.c)));
        }
        if !self.r_max.is_finite() || self.r_max < 0.0 {
            return Err(ExperimentError::InvalidParams(format!("r_max must be non-negative, got {}", self.r_max)));
        }
        Ok(())
    }

    /// The random stream for instance `id`.
    pub fn stream(&self, id: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id as u64);
        rng
    }
}

/// A random instance with exact predictions: `n` uniform in `[2, n_max]`,
/// `c'` uniform in `[1, c]`, requests at -1 and `c'` plus `n - 2` uniform in
/// `[-1, c']`, releases uniform in `[0, r_max]`, then the origin request.
pub fn gen_instance<R: Rng + ?Sized>(params: &GenParams, rng: &mut R) -> Result<Instance, ExperimentError> {
    params.validate()?;
    let n = rng.gen_range(2..=params.n_max);
    let c_prime = rng.gen_range(1.0..=params.c);
    let mut positions = vec![-1.0, c_prime];
    positions.extend((2..n).map(|_| rng.gen_range(-1.0..=c_prime)));
    let requests: Vec<Request> = positions
        .into_iter()
        .enumerate()
        .map(|(i, q)| Request::new(i as u32 + 1, q, rng.gen_range(0.0..=params.r_max)))
        .collect();
    Ok(normalize_instance(Instance::with_exact_predictions(Variant::Closed, requests)?)?)
}

/// Instance `id` of a sweep with the given parameters, and its mould.
pub fn sweep_instance(params: &GenParams, id: usize) -> Result<(Instance, Mould), ExperimentError> {
    let mut rng = params.stream(id);
    let instance = gen_instance(params, &mut rng)?;
    let mould = Mould::random_for(&instance, &mut rng)?;
    Ok((instance, mould))
}

/// One simulated (instance, error level, algorithm, predicted final label).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub instance: usize,
    pub algorithm: AlgoKind,
    pub variant: Variant,
    pub eta_target: f64,
    pub eta: f64,
    pub delta: Option<f64>,
    pub final_label: Option<u32>,
    pub ratio: f64,
    pub opt: f64,
    pub makespan: f64,
    /// Proven ratio bound at the measured errors.
    pub bound: Option<f64>,
}

impl SweepRow {
    pub fn violates_bound(&self, slack: f64) -> bool {
        self.bound.is_some_and(|b| self.ratio > b + slack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub count: usize,
    pub etas: Vec<f64>,
    pub algos: Vec<AlgoKind>,
    /// Verify the structural run invariants of every simulation.
    #[serde(default)]
    pub check_runs: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            count: 7500,
            etas: default_etas(),
            algos: vec![AlgoKind::FarFirst, AlgoKind::NearFirst, AlgoKind::Pivot],
            check_runs: false,
        }
    }
}

/// `0, 0.05, ..., 1`.
pub fn default_etas() -> Vec<f64> {
    steps(1.0, 0.05).expect("valid grid")
}

/// Variant an algorithm is swept on. The baseline runs closed.
pub fn sweep_variant(algo: AlgoKind) -> Variant {
    algo.native_variant().unwrap_or(Variant::Closed)
}

/// All rows of one instance, in canonical order.
pub fn sweep_one(params: &GenParams, spec: &SweepSpec, id: usize) -> Result<Vec<SweepRow>, ExperimentError> {
    let (base, mould) = sweep_instance(params, id)?;
    let (open, closed) = opt_dp_both(&base).map_err(|source| ExperimentError::Oracle { id, source })?;
    let span = base.extremes().span();
    let origin = base.origin_label();
    let mut rows = Vec::new();
    for &eta_target in &spec.etas {
        let predictions = apply_mould(&base, &mould, eta_target)?;
        for &algo in &spec.algos {
            let variant = sweep_variant(algo);
            let oracle: &OracleResult = if variant == Variant::Open { &open } else { &closed };
            let instance = base.with_variant(variant).with_predictions(predictions.clone())?;
            let eta = eta_error(&instance)?.eta;
            let finals: Vec<Option<Label>> = if algo == AlgoKind::Pivot {
                base.requests.iter().map(|r| r.label).filter(|&l| Some(l) != origin).map(Some).collect()
            } else {
                vec![None]
            };
            let distances = (algo == AlgoKind::Pivot).then(|| ender_distances(&instance, oracle));
            for f in finals {
                let instance = match f {
                    Some(_) => instance.with_predictions(predictions.clone().with_final_label(f))?,
                    None => instance.clone(),
                };
                let run = run_instance(&instance, &algo)
                    .map_err(|source| ExperimentError::Simulation { id, algo, source })?;
                if spec.check_runs {
                    check_run(&run, variant).map_err(|msg| ExperimentError::Invariant { id, algo, msg })?;
                }
                let delta = f.map(|f| {
                    let big = distances.as_ref().and_then(|d| d.get(&f)).copied().unwrap_or(0.0);
                    if span > 0.0 {
                        big / span
                    } else {
                        0.0
                    }
                });
                rows.push(SweepRow {
                    instance: id,
                    algorithm: algo,
                    variant,
                    eta_target,
                    eta,
                    delta,
                    final_label: f.map(|l| l.0),
                    ratio: competitive_ratio(&run.result, oracle),
                    opt: oracle.opt_makespan,
                    makespan: run.result.makespan,
                    bound: algo.bound(eta, delta.unwrap_or(0.0)),
                });
            }
        }
    }
    Ok(rows)
}

/// Runs the sweep on the rayon pool. Rows come back ordered by instance,
/// then error level, then algorithm as listed, then final label.
pub fn sweep(params: &GenParams, spec: &SweepSpec) -> Result<Vec<SweepRow>, ExperimentError> {
    params.validate()?;
    let chunks: Vec<Vec<SweepRow>> =
        (0..spec.count).into_par_iter().map(|id| sweep_one(params, spec, id)).collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Serial version of [`sweep`]; produces identical rows.
pub fn sweep_serial(params: &GenParams, spec: &SweepSpec) -> Result<Vec<SweepRow>, ExperimentError> {
    params.validate()?;
    let mut rows = Vec::new();
    for id in 0..spec.count {
        rows.extend(sweep_one(params, spec, id)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_extremes_are_forced() {
        let params = GenParams { seed: 7, ..GenParams::default() };
        for id in 0..200 {
            let i = gen_instance(&params, &mut params.stream(id)).unwrap();
            let e = i.extremes();
            assert_eq!(e.left, -1.0);
            assert!((1.0..=2.0).contains(&e.right));
            assert!(i.len() >= 3 && i.len() <= 21);
            assert!(i.requests.iter().all(|r| (0.0..=6.0).contains(&r.rel)));
            assert_eq!(i.origin_label(), Some(Label(0)));
        }
    }

    #[test]
    fn n_max_two_gives_the_two_forced_requests() {
        let params = GenParams { n_max: 2, ..GenParams::default() };
        let i = gen_instance(&params, &mut params.stream(3)).unwrap();
        assert_eq!(i.len(), 3);
    }

    #[test]
    fn same_seed_same_instance() {
        let params = GenParams { seed: 11, ..GenParams::default() };
        assert_eq!(sweep_instance(&params, 5).unwrap(), sweep_instance(&params, 5).unwrap());
        assert_ne!(sweep_instance(&params, 5).unwrap().0, sweep_instance(&params, 6).unwrap().0);
    }

    #[test]
    fn invalid_params() {
        assert!(GenParams { n_max: 1, ..GenParams::default() }.validate().is_err());
        assert!(GenParams { c: 0.5, ..GenParams::default() }.validate().is_err());
        assert!(GenParams { r_max: -1.0, ..GenParams::default() }.validate().is_err());
    }

    #[test]
    fn small_sweep_is_deterministic_and_bounded() {
        let params = GenParams { n_max: 7, seed: 3, ..GenParams::default() };
        let spec = SweepSpec { count: 30, check_runs: true, ..SweepSpec::default() };
        let rows = sweep(&params, &spec).unwrap();
        assert_eq!(rows, sweep_serial(&params, &spec).unwrap());
        for r in &rows {
            assert!(!r.violates_bound(1e-6), "{r:?}");
            assert!(r.ratio <= 3.0 + 1e-6);
            assert!((r.ratio - r.makespan / r.opt).abs() < 1e-9);
        }
    }
}
