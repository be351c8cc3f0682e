//! The evenly spaced attacks on location predictions.

use serde::{Deserialize, Serialize};

use crate::engine::{EventSource, ReleaseEvent};
use crate::instance::{Label, PredictionSet, Request, Variant};
use crate::trajectory::Segment;
use crate::EPS;

/// Which of the three location attacks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationsRule {
    /// Closed variant: phase one while `L_U < pos < R_U`; the exit side is
    /// then delayed to `4 - d`.
    Fc,
    /// Open variant: phase one while `3 L_U + 2 < pos < 3 R_U - 2`; the exit
    /// side is then delayed to `2 + d`.
    Fo,
    /// The closed rule plus an extra origin request released at 4, run on
    /// the open variant with that request as the predicted final one.
    Flf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Member {
    label: Label,
    pos: f64,
    rel: f64,
    /// Part of the evenly spaced set (as opposed to the origin requests).
    ranked: bool,
    released: bool,
}

/// Snapshot of an attack's bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackState {
    pub phase: Phase,
    pub rank_n: usize,
    pub alpha: f64,
    pub committed_side: Option<Side>,
    pub t_commit: Option<f64>,
    /// Agent position at the commit instant.
    pub pos_commit: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LocationsAttack {
    rule: LocationsRule,
    rank_n: usize,
    members: Vec<Member>,
    phase: Phase,
    committed_side: Option<Side>,
    t_commit: Option<f64>,
    pos_commit: Option<f64>,
}

/// Evenly spaced positions `(2k - (n - 1)) / (n - 1)` on `[-1, 1]`.
pub fn evenly_spaced(rank_n: usize) -> Vec<f64> {
    let m = (rank_n - 1) as f64;
    (0..rank_n).map(|k| (2.0 * k as f64 - m) / m).collect()
}

impl LocationsAttack {
    /// # Panics
    /// If `rank_n < 2`.
    pub fn new(rule: LocationsRule, rank_n: usize) -> Self {
        assert!(rank_n >= 2, "attack rank must be at least 2");
        let mut members = vec![Member {
            label: Label(0),
            pos: 0.0,
            rel: 0.0,
            ranked: false,
            released: false,
        }];
        for (k, pos) in evenly_spaced(rank_n).into_iter().enumerate() {
            members.push(Member {
                label: Label(k as u32 + 1),
                pos,
                rel: 2.0 - pos.abs(),
                ranked: true,
                released: false,
            });
        }
        if rule == LocationsRule::Flf {
            members.push(Member {
                label: Label(rank_n as u32 + 1),
                pos: 0.0,
                rel: 4.0,
                ranked: false,
                released: false,
            });
        }
        LocationsAttack {
            rule,
            rank_n,
            members,
            phase: Phase::One,
            committed_side: None,
            t_commit: None,
            pos_commit: None,
        }
    }

    pub fn closed(rank_n: usize) -> Self {
        Self::new(LocationsRule::Fc, rank_n)
    }

    pub fn open(rank_n: usize) -> Self {
        Self::new(LocationsRule::Fo, rank_n)
    }

    pub fn open_lf(rank_n: usize) -> Self {
        Self::new(LocationsRule::Flf, rank_n)
    }

    pub fn rule(&self) -> LocationsRule {
        self.rule
    }

    pub fn alpha(&self) -> f64 {
        2.0 / (self.rank_n - 1) as f64
    }

    pub fn variant(&self) -> Variant {
        match self.rule {
            LocationsRule::Fc => Variant::Closed,
            LocationsRule::Fo | LocationsRule::Flf => Variant::Open,
        }
    }

    /// Label of the extra origin request of the LF attack.
    pub fn final_label(&self) -> Option<Label> {
        (self.rule == LocationsRule::Flf).then(|| Label(self.rank_n as u32 + 1))
    }

    /// Exact position predictions, with the extra origin request as the
    /// predicted final request for the LF attack.
    pub fn predictions(&self) -> PredictionSet {
        PredictionSet::new(self.members.iter().map(|m| (m.label, m.pos)).collect())
            .with_final_label(self.final_label())
    }

    pub fn state(&self) -> AttackState {
        AttackState {
            phase: self.phase,
            rank_n: self.rank_n,
            alpha: self.alpha(),
            committed_side: self.committed_side,
            t_commit: self.t_commit,
            pos_commit: self.pos_commit,
        }
    }

    /// The phase-one region `(lo, hi)` for the currently unreleased ranked
    /// requests.
    fn region(&self) -> (f64, f64) {
        let unreleased = self.members.iter().filter(|m| m.ranked && !m.released).map(|m| m.pos);
        match self.rule {
            LocationsRule::Fc | LocationsRule::Flf => {
                let (lo, hi) = unreleased.fold((0.0f64, 0.0f64), |(l, h), x| (l.min(x), h.max(x)));
                (lo, hi)
            }
            LocationsRule::Fo => {
                let (l_u, r_u) = unreleased.fold((1.0f64, -1.0f64), |(l, h), x| (l.min(x), h.max(x)));
                (3.0 * l_u + 2.0, 3.0 * r_u - 2.0)
            }
        }
    }

    fn next_release(&self) -> Option<f64> {
        self.members.iter().filter(|m| !m.released).map(|m| m.rel).min_by(f64::total_cmp)
    }

    /// Takes every unreleased request due at `t`.
    fn release_at(&mut self, t: f64) -> ReleaseEvent {
        let mut requests = Vec::new();
        for m in self.members.iter_mut().filter(|m| !m.released && m.rel == t) {
            m.released = true;
            requests.push(Request { label: m.label, pos: m.pos, rel: m.rel });
        }
        ReleaseEvent { time: t, requests }
    }

    fn commit(&mut self, t: f64, pos: f64, side: Side) {
        self.phase = Phase::Two;
        self.committed_side = Some(side);
        self.t_commit = Some(t);
        self.pos_commit = Some(pos);
        let rule = self.rule;
        for m in self.members.iter_mut().filter(|m| m.ranked && !m.released && m.rel > t) {
            let on_side = match side {
                Side::Left => m.pos <= 0.0,
                Side::Right => m.pos >= 0.0,
            };
            if on_side {
                let d = m.pos.abs();
                m.rel = match rule {
                    LocationsRule::Fc | LocationsRule::Flf => 4.0 - d,
                    LocationsRule::Fo => 2.0 + d,
                };
            }
        }
    }

    /// Commits at `t` if the agent at `x` is outside the current region.
    fn check_at(&mut self, t: f64, x: f64) -> bool {
        let (lo, hi) = self.region();
        if x <= lo + EPS {
            self.commit(t, x, Side::Left);
        } else if x >= hi - EPS {
            self.commit(t, x, Side::Right);
        } else {
            return false;
        }
        true
    }

    /// First time in `[seg.t0, until]` at which the agent leaves the
    /// current region, with the side it leaves through.
    fn exit_time(&self, seg: &Segment, until: f64) -> Option<(f64, Side)> {
        let (lo, hi) = self.region();
        let x0 = seg.x0;
        if x0 <= lo + EPS {
            return Some((seg.t0, Side::Left));
        }
        if x0 >= hi - EPS {
            return Some((seg.t0, Side::Right));
        }
        let (t, side) = if seg.v < 0.0 {
            (seg.t0 + (x0 - lo) / -seg.v, Side::Left)
        } else if seg.v > 0.0 {
            (seg.t0 + (hi - x0) / seg.v, Side::Right)
        } else {
            return None;
        };
        (t <= until).then_some((t, side))
    }
}

impl EventSource for LocationsAttack {
    fn request_count(&self) -> usize {
        self.members.len()
    }

    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
        let mut due = self.next_release().filter(|&t| t <= seg.t1);
        if self.phase == Phase::One {
            let until = due.unwrap_or(seg.t1);
            if let Some((t, side)) = self.exit_time(seg, until) {
                if due.is_none_or(|r| t < r) {
                    self.commit(t, seg.pos_at(t), side);
                    due = self.next_release().filter(|&t| t <= seg.t1);
                }
            }
        }
        let t = due?;
        let event = self.release_at(t);
        if self.phase == Phase::One {
            self.check_at(t, seg.pos_at(t));
        }
        Some(event)
    }
}
