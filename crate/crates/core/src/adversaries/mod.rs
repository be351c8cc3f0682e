//! Adaptive adversaries realizing the lower-bound constructions.
//!
//! Each attack is an [`EventSource`] that watches the agent's segments and
//! decides release times on the fly. After a run, the transcript of what was
//! actually released is a fixed instance that can be priced by the oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::OnlineAlgorithm;
use crate::engine::{competitive_ratio, simulate, EventSource, Run, SimError};
use crate::instance::{Instance, PredictionSet, Variant};
use crate::oracle::{opt, OracleError, OracleResult};
use crate::predictions::{delta_error, eta_error, PredictionError};
use crate::trajectory::Segment;

mod classic;
mod locations;

pub use classic::{rho, ClassicClosedAttack, ClassicOpenAttack};
pub use locations::{evenly_spaced, AttackState, LocationsAttack, LocationsRule, Phase, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Fc,
    Fo,
    Flf,
    ClassicClosed,
    ClassicOpen,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Fc, Family::Fo, Family::Flf, Family::ClassicClosed, Family::ClassicOpen];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fc => "fc",
            Family::Fo => "fo",
            Family::Flf => "flf",
            Family::ClassicClosed => "classic-closed",
            Family::ClassicOpen => "classic-open",
        }
    }

    /// Lower bound on any algorithm's ratio against this family at the given
    /// rank (ignored by the classic attacks).
    pub fn lower_bound(self, rank_n: usize) -> f64 {
        let alpha = 2.0 / (rank_n.max(2) - 1) as f64;
        match self {
            Family::Fc => (6.0 - 2.0 * alpha) / 4.0,
            Family::Fo => (13.0 / 3.0 - 3.0 * alpha) / 3.0,
            Family::Flf => (5.0 - 2.0 * alpha) / 4.0,
            Family::ClassicClosed => rho(),
            Family::ClassicOpen => 2.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Family {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| AttackError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("unknown attack family {0:?} (expected fc, fo, flf, classic-closed or classic-open)")]
    UnknownFamily(String),
    #[error("attack rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Prediction(#[from] PredictionError),
}

/// Any of the attacks behind one type.
#[derive(Debug, Clone)]
pub enum Attack {
    Locations(LocationsAttack),
    ClassicClosed(ClassicClosedAttack),
    ClassicOpen(ClassicOpenAttack),
}

impl Attack {
    pub fn new(family: Family, rank_n: usize) -> Result<Self, AttackError> {
        let locations = |rule| {
            if rank_n < 2 {
                Err(AttackError::RankTooSmall(rank_n))
            } else {
                Ok(Attack::Locations(LocationsAttack::new(rule, rank_n)))
            }
        };
        match family {
            Family::Fc => locations(LocationsRule::Fc),
            Family::Fo => locations(LocationsRule::Fo),
            Family::Flf => locations(LocationsRule::Flf),
            Family::ClassicClosed => Ok(Attack::ClassicClosed(ClassicClosedAttack::new())),
            Family::ClassicOpen => Ok(Attack::ClassicOpen(ClassicOpenAttack::new())),
        }
    }

    pub fn variant(&self) -> Variant {
        match self {
            Attack::Locations(a) => a.variant(),
            Attack::ClassicClosed(a) => a.variant(),
            Attack::ClassicOpen(a) => a.variant(),
        }
    }

    pub fn predictions(&self) -> PredictionSet {
        match self {
            Attack::Locations(a) => a.predictions(),
            Attack::ClassicClosed(a) => a.predictions(),
            Attack::ClassicOpen(a) => a.predictions(),
        }
    }

    pub fn state(&self) -> Option<AttackState> {
        match self {
            Attack::Locations(a) => Some(a.state()),
            _ => None,
        }
    }
}

impl EventSource for Attack {
    fn request_count(&self) -> usize {
        match self {
            Attack::Locations(a) => a.request_count(),
            Attack::ClassicClosed(a) => a.request_count(),
            Attack::ClassicOpen(a) => a.request_count(),
        }
    }

    fn query(&mut self, seg: &Segment) -> Option<crate::engine::ReleaseEvent> {
        match self {
            Attack::Locations(a) => a.query(seg),
            Attack::ClassicClosed(a) => a.query(seg),
            Attack::ClassicOpen(a) => a.query(seg),
        }
    }
}

/// Result of running an algorithm against an attack and pricing the
/// transcript.
#[derive(Debug, Clone, Serialize)]
pub struct AttackOutcome {
    pub family: Family,
    pub rank_n: usize,
    pub algorithm: String,
    pub ratio: f64,
    pub eta: f64,
    pub delta: Option<f64>,
    pub lower_bound: f64,
    pub attack_state: Option<AttackState>,
    pub oracle: OracleResult,
    pub transcript: Instance,
    pub run: Run,
}

/// Runs `algorithm` against a fresh attack and prices the transcript.
pub fn run_attack(
    family: Family,
    rank_n: usize,
    algorithm: &dyn OnlineAlgorithm,
) -> Result<AttackOutcome, AttackError> {
    let mut attack = Attack::new(family, rank_n)?;
    let predictions = attack.predictions();
    let variant = attack.variant();
    let run = simulate(&mut attack, algorithm, &predictions, variant)?;
    let transcript = run.transcript_instance(variant, &predictions).map_err(SimError::from)?;
    let oracle = opt(&transcript)?;
    let eta = eta_error(&transcript)?.eta;
    let delta = match predictions.final_label() {
        Some(_) if variant == Variant::Open => delta_error(&transcript, &oracle)?.delta,
        _ => None,
    };
    Ok(AttackOutcome {
        family,
        rank_n,
        algorithm: algorithm.name().to_string(),
        ratio: competitive_ratio(&run.result, &oracle),
        eta,
        delta,
        lower_bound: family.lower_bound(rank_n),
        attack_state: attack.state(),
        oracle,
        transcript,
        run,
    })
}
