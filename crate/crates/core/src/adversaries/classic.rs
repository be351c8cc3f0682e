//! The two prediction-free attacks against the baseline.

use crate::engine::{EventSource, ReleaseEvent};
use crate::instance::{Label, PredictionSet, Request, Variant};
use crate::trajectory::Segment;

/// `(9 + sqrt 17) / 8`, the classic lower bound for the closed variant.
pub fn rho() -> f64 {
    (9.0 + 17f64.sqrt()) / 8.0
}

fn origin_event() -> ReleaseEvent {
    ReleaseEvent { time: 0.0, requests: vec![Request::new(0, 0.0, 0.0)] }
}

/// Zero predictions for labels `0..n`; the attacks are meant for an
/// algorithm that ignores them.
fn zero_predictions(n: usize) -> PredictionSet {
    PredictionSet::new((0..n as u32).map(|l| (Label(l), 0.0)).collect())
}

/// One request at time 1 on the side opposite the agent (at +1 when the
/// agent is at or left of the origin).
#[derive(Debug, Clone, Default)]
pub struct ClassicOpenAttack {
    origin_sent: bool,
    sent: bool,
}

impl ClassicOpenAttack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variant(&self) -> Variant {
        Variant::Open
    }

    pub fn predictions(&self) -> PredictionSet {
        zero_predictions(2)
    }
}

impl EventSource for ClassicOpenAttack {
    fn request_count(&self) -> usize {
        2
    }

    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
        if !self.origin_sent {
            self.origin_sent = true;
            return Some(origin_event());
        }
        if self.sent || seg.t1 < 1.0 {
            return None;
        }
        self.sent = true;
        let q = if seg.pos_at(1.0) <= 0.0 { 1.0 } else { -1.0 };
        Some(ReleaseEvent { time: 1.0, requests: vec![Request::new(1, q, 1.0)] })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stage {
    Start,
    /// Both extremes are out; tracks whether each was visited since.
    Both { left_seen: bool, right_seen: bool },
    /// Waiting for the agent to reach the origin after leaving `side`.
    Crossing { side: f64 },
    Done,
}

/// The adaptive three-request attack for the closed variant. Every run
/// releases exactly three requests besides the origin one.
#[derive(Debug, Clone)]
pub struct ClassicClosedAttack {
    origin_sent: bool,
    stage: Stage,
}

impl Default for ClassicClosedAttack {
    fn default() -> Self {
        ClassicClosedAttack { origin_sent: false, stage: Stage::Start }
    }
}

impl ClassicClosedAttack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variant(&self) -> Variant {
        Variant::Closed
    }

    pub fn predictions(&self) -> PredictionSet {
        zero_predictions(4)
    }

    /// Half-widths of the two decision intervals around the origin.
    pub fn intervals() -> (f64, f64) {
        let r = rho();
        (2.0 * r - 3.0, 7.0 - 4.0 * r)
    }
}

impl EventSource for ClassicClosedAttack {
    fn request_count(&self) -> usize {
        4
    }

    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
        if !self.origin_sent {
            self.origin_sent = true;
            return Some(origin_event());
        }
        let (i, i2) = Self::intervals();
        match self.stage {
            Stage::Start => {
                if seg.t1 < 1.0 {
                    return None;
                }
                let x = seg.pos_at(1.0);
                let requests = if x.abs() > i {
                    // one far request plus two that ride along with it
                    let q = if x > 0.0 { -1.0 } else { 1.0 };
                    self.stage = Stage::Done;
                    vec![
                        Request::new(1, q, 1.0),
                        Request::new(2, q / 3.0, 1.0),
                        Request::new(3, 2.0 * q / 3.0, 1.0),
                    ]
                } else {
                    self.stage = Stage::Both { left_seen: false, right_seen: false };
                    vec![Request::new(1, -1.0, 1.0), Request::new(2, 1.0, 1.0)]
                };
                Some(ReleaseEvent { time: 1.0, requests })
            }
            Stage::Both { mut left_seen, mut right_seen } => {
                let upto = seg.t1.min(3.0);
                left_seen |= seg.first_visit(-1.0, 1.0).is_some_and(|t| t <= upto);
                right_seen |= seg.first_visit(1.0, 1.0).is_some_and(|t| t <= upto);
                self.stage = Stage::Both { left_seen, right_seen };
                if seg.t1 < 3.0 {
                    return None;
                }
                let x = seg.pos_at(3.0);
                if x.abs() <= i2 {
                    let q = match (left_seen, right_seen) {
                        (true, false) => -1.0,
                        (false, true) => 1.0,
                        _ if x < 0.0 => -1.0,
                        _ => 1.0,
                    };
                    self.stage = Stage::Done;
                    return Some(ReleaseEvent { time: 3.0, requests: vec![Request::new(3, q, 3.0)] });
                }
                self.stage = Stage::Crossing { side: x.signum() };
                self.query(&Segment { t0: 3.0, x0: x, ..*seg })
            }
            Stage::Crossing { side } => {
                let t = seg.first_visit(0.0, 3.0)?;
                self.stage = Stage::Done;
                let q = side * (1.0 + (t - 3.0));
                Some(ReleaseEvent { time: t, requests: vec![Request::new(3, q, t)] })
            }
            Stage::Done => None,
        }
    }
}
