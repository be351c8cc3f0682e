//! Online algorithms as update functions.
//!
//! Each algorithm is invoked at time 0 and whenever a request is released.
//! It sees the current state and returns a [`MovePlan`]: positions to visit
//! in order at unit speed until the next release.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Label, PredictionSet, Request, Variant};

mod farfirst;
mod nearfirst;
mod pivot;
mod waitcopy;

pub use farfirst::{farfirst_ordering, farfirst_update, far_side_is_right};
pub use nearfirst::nearfirst_update;
pub use pivot::pivot_update;
pub use waitcopy::waitcopy_update;

/// What an algorithm knows when it is invoked.
#[derive(Debug, Clone)]
pub struct AlgoState<'a> {
    pub now: f64,
    pub pos: f64,
    /// Released requests not yet served (`O`).
    pub outstanding: Vec<Request>,
    /// Labels of predictions whose request is not yet released (`P'`).
    pub unreleased: Vec<Label>,
    pub predictions: &'a PredictionSet,
    /// Total number of requests, origin request included.
    pub n: usize,
    pub served: BTreeSet<Label>,
    pub variant: Variant,
}

impl AlgoState<'_> {
    pub fn released_count(&self) -> usize {
        self.n - self.unreleased.len()
    }

    fn unreleased_positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.unreleased.iter().filter_map(|&l| self.predictions.get(l))
    }

    fn outstanding_positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.outstanding.iter().map(|r| r.pos)
    }
}

/// Targets to visit left to right at unit speed. An empty plan means waiting
/// in place.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MovePlan {
    pub targets: Vec<f64>,
    /// The plan ends on an unreleased prediction and waits there.
    pub terminal_wait: bool,
}

impl MovePlan {
    pub fn new(targets: Vec<f64>, terminal_wait: bool) -> Self {
        MovePlan { targets, terminal_wait }
    }

    pub fn wait() -> Self {
        MovePlan::default()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgoError {
    #[error("{0} needs a predicted final label")]
    MissingFinalLabel(&'static str),
    #[error("no prediction for label {0}")]
    MissingPrediction(Label),
    #[error("unknown algorithm {0:?} (expected farfirst, nearfirst, pivot or waitcopy)")]
    UnknownAlgorithm(String),
}

/// An online algorithm driven by release events.
pub trait OnlineAlgorithm: Sync {
    fn name(&self) -> &'static str;
    fn update(&self, state: &AlgoState) -> Result<MovePlan, AlgoError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoKind {
    FarFirst,
    NearFirst,
    Pivot,
    WaitCopy,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 4] =
        [AlgoKind::FarFirst, AlgoKind::NearFirst, AlgoKind::Pivot, AlgoKind::WaitCopy];

    /// Variant the algorithm is designed for; waitcopy handles both.
    pub fn native_variant(self) -> Option<Variant> {
        match self {
            AlgoKind::FarFirst => Some(Variant::Closed),
            AlgoKind::NearFirst | AlgoKind::Pivot => Some(Variant::Open),
            AlgoKind::WaitCopy => None,
        }
    }

    /// Proven upper bound on the ratio at the given errors, if any.
    pub fn bound(self, eta: f64, delta: f64) -> Option<f64> {
        match self {
            AlgoKind::FarFirst => Some(farfirst_bound(eta)),
            AlgoKind::NearFirst => Some(nearfirst_bound(eta)),
            AlgoKind::Pivot => Some(pivot_bound(eta, delta)),
            AlgoKind::WaitCopy => None,
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = AlgoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "farfirst" => Ok(AlgoKind::FarFirst),
            "nearfirst" => Ok(AlgoKind::NearFirst),
            "pivot" => Ok(AlgoKind::Pivot),
            "waitcopy" => Ok(AlgoKind::WaitCopy),
            _ => Err(AlgoError::UnknownAlgorithm(s.to_string())),
        }
    }
}

impl OnlineAlgorithm for AlgoKind {
    fn name(&self) -> &'static str {
        match self {
            AlgoKind::FarFirst => "farfirst",
            AlgoKind::NearFirst => "nearfirst",
            AlgoKind::Pivot => "pivot",
            AlgoKind::WaitCopy => "waitcopy",
        }
    }

    fn update(&self, state: &AlgoState) -> Result<MovePlan, AlgoError> {
        match self {
            AlgoKind::FarFirst => Ok(farfirst_update(state)),
            AlgoKind::NearFirst => Ok(nearfirst_update(state)),
            AlgoKind::Pivot => pivot_update(state),
            AlgoKind::WaitCopy => Ok(waitcopy_update(state)),
        }
    }
}

/// `min(3(1 + eta)/2, 3)`.
pub fn farfirst_bound(eta: f64) -> f64 {
    (1.5 * (1.0 + eta)).min(3.0)
}

/// `min(1 + 2(1 + eta)/(3 - 2 eta), 3)` below `eta = 2/3`, else 3.
pub fn nearfirst_bound(eta: f64) -> f64 {
    let den = 3.0 - 2.0 * eta;
    if den > 0.0 {
        (1.0 + 2.0 * (1.0 + eta) / den).min(3.0)
    } else {
        3.0
    }
}

/// `min(1 + (1 + 2(delta + 3 eta))/(3 - 2(delta + 2 eta)), 3)` while the
/// denominator is positive, else 3.
pub fn pivot_bound(eta: f64, delta: f64) -> f64 {
    let den = 3.0 - 2.0 * (delta + 2.0 * eta);
    if den > 0.0 {
        (1.0 + (1.0 + 2.0 * (delta + 3.0 * eta)) / den).min(3.0)
    } else {
        3.0
    }
}

fn fold_min(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn fold_max(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

/// Shared tail of NEARFIRST and PIVOT: sweep the released requests once all
/// predictions are released, otherwise chase the extreme unreleased
/// prediction on the chosen side.
fn directed_plan(state: &AlgoState, min_directed: impl FnOnce() -> bool) -> MovePlan {
    if state.unreleased.is_empty() {
        if state.outstanding.is_empty() {
            return MovePlan::wait();
        }
        let lo = fold_min(state.outstanding_positions());
        let hi = fold_max(state.outstanding_positions());
        let targets = if state.pos < (lo + hi) / 2.0 { vec![lo, hi] } else { vec![hi, lo] };
        return MovePlan::new(targets, false);
    }
    let both = || state.unreleased_positions().chain(state.outstanding_positions());
    if min_directed() {
        MovePlan::new(vec![fold_min(both()), fold_min(state.unreleased_positions())], true)
    } else {
        MovePlan::new(vec![fold_max(both()), fold_max(state.unreleased_positions())], true)
    }
}
