//! Prediction error metrics and mould-based prediction synthesis.
//!
//! The location error is the largest prediction offset normalized by the span
//! `|L| + |R|` of the instance; `M` is the same offset in line units. The
//! final-request error measures how far the predicted final request lies from
//! the nearest request an optimal open schedule can finish on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Instance, Label, PredictionSet, Variant};
use crate::oracle::{ender_distances, OracleResult};
use crate::EPS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictionError {
    #[error("all requests sit at the origin but some prediction does not")]
    DegenerateSpan,
    #[error("the final-request error needs a predicted final label")]
    MissingFinalLabel,
    #[error("the final-request error is only defined for the open variant")]
    ClosedVariant,
    #[error("mould has {got} scalars, instance has {want} requests")]
    MouldLength { got: usize, want: usize },
    #[error("invalid mould: {0}")]
    InvalidMould(&'static str),
    #[error("negative error target {0}")]
    NegativeTarget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub eta: f64,
    /// `eta * (|L| + |R|)`.
    pub m: f64,
    pub delta: Option<f64>,
    /// `delta * (|L| + |R|)`.
    pub big_delta: Option<f64>,
}

/// Location error of the instance's predictions.
pub fn eta_error(instance: &Instance) -> Result<ErrorReport, PredictionError> {
    let span = instance.extremes().span();
    let worst = instance
        .requests
        .iter()
        .map(|r| (r.pos - instance.predictions.get(r.label).unwrap_or(r.pos)).abs())
        .fold(0.0, f64::max);
    let eta = if span > 0.0 {
        worst / span
    } else if worst == 0.0 {
        0.0
    } else {
        return Err(PredictionError::DegenerateSpan);
    };
    Ok(ErrorReport { eta, m: worst, delta: None, big_delta: None })
}

/// Location error plus the final-request error, using the ender set of
/// `oracle` (which must have been computed on the same instance).
pub fn delta_error(instance: &Instance, oracle: &OracleResult) -> Result<ErrorReport, PredictionError> {
    if instance.variant != Variant::Open {
        return Err(PredictionError::ClosedVariant);
    }
    let f = instance.predictions.final_label().ok_or(PredictionError::MissingFinalLabel)?;
    let mut report = eta_error(instance)?;
    let big_delta = ender_distances(instance, oracle).get(&f).copied().unwrap_or(0.0);
    let span = instance.extremes().span();
    report.big_delta = Some(big_delta);
    report.delta = Some(if span > 0.0 { big_delta / span } else { 0.0 });
    Ok(report)
}

/// Per-request offset directions, aligned with the instance's requests in
/// label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mould {
    scalars: Vec<f64>,
}

impl Mould {
    pub fn new(scalars: Vec<f64>) -> Result<Self, PredictionError> {
        if scalars.is_empty() {
            return Err(PredictionError::InvalidMould("empty"));
        }
        if scalars.iter().any(|m| !(-1.0..=1.0).contains(m)) {
            return Err(PredictionError::InvalidMould("scalar outside [-1, 1]"));
        }
        if !scalars.iter().any(|m| (m.abs() - 1.0).abs() <= EPS) {
            return Err(PredictionError::InvalidMould("no scalar of magnitude 1"));
        }
        Ok(Mould { scalars })
    }

    pub fn scalars(&self) -> &[f64] {
        &self.scalars
    }

    /// Uniform scalars in `[-1, 1]`, with one index chosen uniformly and
    /// forced to `+1` or `-1`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, PredictionError> {
        if n == 0 {
            return Err(PredictionError::InvalidMould("empty"));
        }
        let mut scalars: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let pick = rng.gen_range(0..n);
        scalars[pick] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        Ok(Mould { scalars })
    }

    /// Random mould for `instance` whose origin request gets scalar 0 and
    /// whose unit-magnitude scalar lands on another request.
    pub fn random_for<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Result<Self, PredictionError> {
        let origin = instance.origin_label();
        let others = instance.requests.iter().filter(|r| Some(r.label) != origin).count();
        if others == 0 {
            return Err(PredictionError::InvalidMould("no request besides the origin"));
        }
        let inner = Mould::random(others, rng)?;
        let mut it = inner.scalars.into_iter();
        let scalars = instance
            .requests
            .iter()
            .map(|r| if Some(r.label) == origin { 0.0 } else { it.next().unwrap() })
            .collect();
        Ok(Mould { scalars })
    }
}

/// Deterministic [`Mould::random`] from a seed.
pub fn gen_mould(n: usize, seed: u64) -> Result<Mould, PredictionError> {
    Mould::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Predictions `p_i = q_i + m_i * eta_target * (|L| + |R|)`. The origin
/// request always keeps prediction 0. The final label, if any, is kept.
pub fn apply_mould(
    instance: &Instance,
    mould: &Mould,
    eta_target: f64,
) -> Result<PredictionSet, PredictionError> {
    if eta_target < 0.0 || !eta_target.is_finite() {
        return Err(PredictionError::NegativeTarget(eta_target));
    }
    if mould.scalars.len() != instance.len() {
        return Err(PredictionError::MouldLength { got: mould.scalars.len(), want: instance.len() });
    }
    let big_m = eta_target * instance.extremes().span();
    let origin = instance.origin_label();
    let positions = instance
        .requests
        .iter()
        .zip(&mould.scalars)
        .map(|(r, m)| {
            let p = if Some(r.label) == origin { 0.0 } else { r.pos + m * big_m };
            (r.label, p)
        })
        .collect();
    Ok(PredictionSet::new(positions).with_final_label(instance.predictions.final_label()))
}

/// Smallest slack of the extremes lemma on this instance: if the leftmost
/// prediction is at least as far out as the rightmost one, then
/// `|L| >= |R| - 2M`, and symmetrically. Non-negative (up to rounding) when
/// the lemma holds.
pub fn extremes_lemma_slack(instance: &Instance) -> Result<f64, PredictionError> {
    let report = eta_error(instance)?;
    let e = instance.extremes();
    let (lp, rp) = (instance.predictions.min().min(0.0), instance.predictions.max().max(0.0));
    let mut slack = f64::INFINITY;
    if lp.abs() >= rp.abs() {
        slack = slack.min(e.left.abs() - (e.right.abs() - 2.0 * report.m));
    }
    if rp.abs() >= lp.abs() {
        slack = slack.min(e.right.abs() - (e.left.abs() - 2.0 * report.m));
    }
    Ok(slack)
}

/// Predictions with the final label replaced.
pub fn with_final_label(predictions: &PredictionSet, label: Label) -> PredictionSet {
    predictions.clone().with_final_label(Some(label))
}
