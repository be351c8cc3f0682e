//! Requests, predictions and instances on the real line.
//!
//! Every instance that flows through the simulator is *normalized*: it carries
//! a request at the origin, released at time 0, whose prediction is exactly 0.
//! Algorithms are told the post-normalization request count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::EPS;

/// Identifier shared by a request and its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub label: Label,
    pub pos: f64,
    pub rel: f64,
}

impl Request {
    pub fn new(label: u32, pos: f64, rel: f64) -> Self {
        Request { label: Label(label), pos, rel }
    }
}

/// Whether the agent has to come back to the origin after the last serve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Open,
    Closed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Open => f.write_str("open"),
            Variant::Closed => f.write_str("closed"),
        }
    }
}

impl FromStr for Variant {
    type Err = ValidationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(Variant::Open),
            "closed" => Ok(Variant::Closed),
            other => Err(ValidationError::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("duplicate request label {0}")]
    DuplicateLabel(Label),
    #[error("duplicate prediction for label {0}")]
    DuplicatePrediction(Label),
    #[error("request {0} has no prediction")]
    MissingPrediction(Label),
    #[error("prediction for {0} does not match any request")]
    OrphanPrediction(Label),
    #[error("final label {0} does not name a request")]
    UnknownFinalLabel(Label),
    #[error("request {label} has a negative release time {rel}")]
    NegativeRelease { label: Label, rel: f64 },
    #[error("non-finite value on {0}")]
    NonFinite(Label),
    #[error("unknown variant '{0}', expected open or closed")]
    UnknownVariant(String),
}

/// Predicted positions keyed by label, plus the optional predicted label of
/// the request an optimal open schedule finishes on.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionSet {
    positions: BTreeMap<Label, f64>,
    final_label: Option<Label>,
}

impl PredictionSet {
    pub fn new(positions: BTreeMap<Label, f64>) -> Self {
        PredictionSet { positions, final_label: None }
    }

    /// Perfect predictions for the given requests.
    pub fn exact(requests: &[Request]) -> Self {
        PredictionSet::new(requests.iter().map(|r| (r.label, r.pos)).collect())
    }

    pub fn with_final_label(mut self, label: Option<Label>) -> Self {
        self.final_label = label;
        self
    }

    pub fn get(&self, label: Label) -> Option<f64> {
        self.positions.get(&label).copied()
    }

    pub fn final_label(&self) -> Option<Label> {
        self.final_label
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Iterates in ascending label order.
    pub fn iter(&self) -> impl Iterator<Item = (Label, f64)> + '_ {
        self.positions.iter().map(|(&l, &p)| (l, p))
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.positions.keys().copied()
    }

    pub fn insert(&mut self, label: Label, pos: f64) {
        self.positions.insert(label, pos);
    }

    pub fn min(&self) -> f64 {
        self.positions.values().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.positions.values().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The two extremes of an instance and which of them is further from the
/// origin. Ties go right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub left: f64,
    pub right: f64,
    pub far: f64,
    pub near: f64,
}

impl Extremes {
    pub fn from_positions(positions: impl IntoIterator<Item = f64>) -> Self {
        let (mut left, mut right) = (0.0f64, 0.0f64);
        for p in positions {
            left = left.min(p);
            right = right.max(p);
        }
        let (far, near) = if left.abs() > right.abs() { (left, right) } else { (right, left) };
        Extremes { left, right, far, near }
    }

    /// `|L| + |R|`, the normalizer of every error metric.
    pub fn span(&self) -> f64 {
        self.left.abs() + self.right.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub variant: Variant,
    pub requests: Vec<Request>,
    pub predictions: PredictionSet,
}

impl Instance {
    /// Builds and validates an instance. Requests are kept sorted by label.
    pub fn new(
        variant: Variant,
        mut requests: Vec<Request>,
        predictions: PredictionSet,
    ) -> Result<Self, ValidationError> {
        requests.sort_by_key(|r| r.label);
        let inst = Instance { variant, requests, predictions };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance with perfect predictions.
    pub fn with_exact_predictions(
        variant: Variant,
        requests: Vec<Request>,
    ) -> Result<Self, ValidationError> {
        let predictions = PredictionSet::exact(&requests);
        Instance::new(variant, requests, predictions)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut seen = BTreeSet::new();
        for r in &self.requests {
            if !seen.insert(r.label) {
                return Err(ValidationError::DuplicateLabel(r.label));
            }
            if !r.pos.is_finite() || !r.rel.is_finite() {
                return Err(ValidationError::NonFinite(r.label));
            }
            if r.rel < 0.0 {
                return Err(ValidationError::NegativeRelease { label: r.label, rel: r.rel });
            }
            match self.predictions.get(r.label) {
                None => return Err(ValidationError::MissingPrediction(r.label)),
                Some(p) if !p.is_finite() => return Err(ValidationError::NonFinite(r.label)),
                Some(_) => {}
            }
        }
        if let Some(l) = self.predictions.labels().find(|l| !seen.contains(l)) {
            return Err(ValidationError::OrphanPrediction(l));
        }
        if let Some(f) = self.predictions.final_label() {
            if !seen.contains(&f) {
                return Err(ValidationError::UnknownFinalLabel(f));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    pub fn request(&self, label: Label) -> Option<&Request> {
        self.requests.iter().find(|r| r.label == label)
    }

    /// Label of the first request at the origin, released at 0 and predicted
    /// at 0.
    pub fn origin_label(&self) -> Option<Label> {
        self.requests
            .iter()
            .find(|r| {
                r.pos.abs() <= EPS
                    && r.rel <= EPS
                    && self.predictions.get(r.label).is_some_and(|p| p.abs() <= EPS)
            })
            .map(|r| r.label)
    }

    pub fn extremes(&self) -> Extremes {
        extremes(self)
    }

    pub fn with_predictions(&self, predictions: PredictionSet) -> Result<Self, ValidationError> {
        Instance::new(self.variant, self.requests.clone(), predictions)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Instance { variant, ..self.clone() }
    }
}

/// Adds the origin request (position 0, release 0, prediction 0) unless one is
/// already present. The added request takes label 0 when free, else one past
/// the largest label.
pub fn normalize_instance(raw: Instance) -> Result<Instance, ValidationError> {
    raw.validate()?;
    if raw.origin_label().is_some() {
        return Ok(raw);
    }
    let taken: BTreeSet<Label> = raw.requests.iter().map(|r| r.label).collect();
    let label = if taken.contains(&Label(0)) {
        Label(taken.iter().next_back().map_or(0, |l| l.0 + 1))
    } else {
        Label(0)
    };
    let Instance { variant, mut requests, mut predictions } = raw;
    requests.push(Request { label, pos: 0.0, rel: 0.0 });
    predictions.insert(label, 0.0);
    Instance::new(variant, requests, predictions)
}

/// Extremes over request positions; the origin is always included.
pub fn extremes(instance: &Instance) -> Extremes {
    Extremes::from_positions(instance.requests.iter().map(|r| r.pos))
}

// Interchange format shared by the CLI and external tools.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub variant: Variant,
    pub requests: Vec<Request>,
    pub predictions: Vec<PredictionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_label: Option<Label>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PredictionEntry {
    pub label: Label,
    pub pos: f64,
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            variant: inst.variant,
            requests: inst.requests.clone(),
            predictions: inst
                .predictions
                .iter()
                .map(|(label, pos)| PredictionEntry { label, pos })
                .collect(),
            final_label: inst.predictions.final_label(),
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = ValidationError;

    fn try_from(file: InstanceFile) -> Result<Self, Self::Error> {
        let mut positions = BTreeMap::new();
        for e in &file.predictions {
            if positions.insert(e.label, e.pos).is_some() {
                return Err(ValidationError::DuplicatePrediction(e.label));
            }
        }
        let predictions = PredictionSet::new(positions).with_final_label(file.final_label);
        Instance::new(file.variant, file.requests, predictions)
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InstanceFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = InstanceFile::deserialize(deserializer)?;
        Instance::try_from(file).map_err(serde::de::Error::custom)
    }
}
