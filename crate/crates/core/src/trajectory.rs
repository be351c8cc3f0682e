//! Piecewise-linear agent paths and makespan evaluation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Instance, Label, Variant};
use crate::EPS;

/// One linear piece of a trajectory: the agent is at `x0` at `t0` and moves
/// with velocity `v` until `t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub t0: f64,
    pub x0: f64,
    pub v: f64,
    pub t1: f64,
}

impl Segment {
    pub fn pos_at(&self, t: f64) -> f64 {
        self.x0 + self.v * (t - self.t0)
    }

    pub fn end_pos(&self) -> f64 {
        self.pos_at(self.t1)
    }

    pub fn duration(&self) -> f64 {
        self.t1 - self.t0
    }

    /// Same segment cut short at `t`.
    pub fn truncated(&self, t: f64) -> Segment {
        Segment { t1: t, ..*self }
    }

    /// Earliest time in `[max(t0, not_before), t1]` at which the segment is at
    /// `x`, with the usual tolerance on both position and time.
    pub fn first_visit(&self, x: f64, not_before: f64) -> Option<f64> {
        let from = self.t0.max(not_before);
        if from > self.t1 + EPS {
            return None;
        }
        if self.v == 0.0 {
            return ((self.x0 - x).abs() <= EPS).then_some(from);
        }
        let hit = self.t0 + (x - self.x0) / self.v;
        if hit < self.t0 - EPS || hit > self.t1 + EPS {
            return None;
        }
        if hit >= from - EPS {
            return Some(hit.max(from));
        }
        // crossed before `from`; still there at `from` only within tolerance
        ((self.pos_at(from) - x).abs() <= EPS).then_some(from)
    }
}

/// Continuous unit-speed path starting at the origin at time 0.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    segments: Vec<Segment>,
}

impl Trajectory {
    pub fn new() -> Self {
        Trajectory::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn end_time(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t1)
    }

    pub fn end_pos(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.end_pos())
    }

    /// Appends a piece; it must start where the path currently ends. Pieces
    /// with the same velocity are merged.
    pub fn push(&mut self, seg: Segment) {
        debug_assert!((seg.t0 - self.end_time()).abs() <= EPS);
        debug_assert!((seg.x0 - self.end_pos()).abs() <= EPS);
        debug_assert!(seg.v.abs() <= 1.0 + EPS);
        if seg.t1 <= seg.t0 {
            return;
        }
        if let Some(last) = self.segments.last_mut() {
            if last.v == seg.v {
                last.t1 = seg.t1;
                return;
            }
        }
        self.segments.push(seg);
    }

    /// Moves straight to `x` at full speed.
    pub fn move_to(&mut self, x: f64) {
        let (t, from) = (self.end_time(), self.end_pos());
        let d = (x - from).abs();
        if d > 0.0 {
            let v = if x > from { 1.0 } else { -1.0 };
            self.push(Segment { t0: t, x0: from, v, t1: t + d });
        }
    }

    /// Stays in place until `t`.
    pub fn wait_until(&mut self, t: f64) {
        let (t0, x0) = (self.end_time(), self.end_pos());
        if t > t0 {
            self.push(Segment { t0, x0, v: 0.0, t1: t });
        }
    }

    /// Drops everything after `t`.
    pub fn truncate(&mut self, t: f64) {
        self.segments.retain(|s| s.t0 < t);
        if let Some(last) = self.segments.last_mut() {
            if last.t1 > t {
                last.t1 = t;
            }
        }
    }

    /// Position at `t`; clamped to the endpoints outside the covered range.
    pub fn pos_at(&self, t: f64) -> f64 {
        if t <= 0.0 || self.segments.is_empty() {
            return if self.segments.is_empty() { 0.0 } else { self.segments[0].x0 };
        }
        let i = self.segments.partition_point(|s| s.t1 < t);
        match self.segments.get(i) {
            Some(s) => s.pos_at(t.max(s.t0)),
            None => self.end_pos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub trajectory: Trajectory,
    pub serve_time: BTreeMap<Label, f64>,
    pub t_serve: f64,
    pub makespan: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("incomplete trajectory: request {0} is never served")]
    Incomplete(Label),
}

/// Serve times and makespan of a fixed trajectory on an instance.
pub fn evaluate(trajectory: &Trajectory, instance: &Instance) -> Result<SimResult, EvalError> {
    let mut serve_time = BTreeMap::new();
    let first = Segment { t0: 0.0, x0: 0.0, v: 0.0, t1: 0.0 };
    for r in &instance.requests {
        let t = std::iter::once(&first)
            .chain(trajectory.segments())
            .find_map(|s| s.first_visit(r.pos, r.rel))
            .ok_or(EvalError::Incomplete(r.label))?;
        serve_time.insert(r.label, t.max(r.rel));
    }
    let t_serve = serve_time.values().copied().fold(0.0, f64::max);
    let makespan = match instance.variant {
        Variant::Open => t_serve,
        Variant::Closed => t_serve + trajectory.pos_at(t_serve).abs(),
    };
    Ok(SimResult { trajectory: trajectory.clone(), serve_time, t_serve, makespan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Request;

    fn inst(variant: Variant, reqs: Vec<Request>) -> Instance {
        Instance::with_exact_predictions(variant, reqs).unwrap()
    }

    #[test]
    fn straight_move_open() {
        let mut tr = Trajectory::new();
        tr.move_to(1.0);
        let res = evaluate(&tr, &inst(Variant::Open, vec![Request::new(1, 1.0, 0.0)])).unwrap();
        assert_eq!(res.makespan, 1.0);
    }

    #[test]
    fn out_and_back_closed() {
        let mut tr = Trajectory::new();
        tr.move_to(1.0);
        tr.move_to(0.0);
        let i = inst(Variant::Closed, vec![Request::new(1, 1.0, 0.0), Request::new(0, 0.0, 0.0)]);
        let res = evaluate(&tr, &i).unwrap();
        assert_eq!(res.t_serve, 1.0);
        assert_eq!(res.makespan, 2.0);
    }

    #[test]
    fn release_dominates() {
        let mut tr = Trajectory::new();
        tr.move_to(1.0);
        tr.wait_until(5.0);
        let res = evaluate(&tr, &inst(Variant::Open, vec![Request::new(1, 1.0, 5.0)])).unwrap();
        assert_eq!(res.makespan, 5.0);
        assert_eq!(res.serve_time[&Label(1)], 5.0);
    }

    #[test]
    fn interior_crossing_after_release() {
        let mut tr = Trajectory::new();
        tr.move_to(2.0);
        tr.move_to(-1.0);
        // passed 1 at t=1 before release, crosses again at t=3
        let res = evaluate(&tr, &inst(Variant::Open, vec![Request::new(1, 1.0, 2.0)])).unwrap();
        assert!((res.serve_time[&Label(1)] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn never_served_is_an_error() {
        let mut tr = Trajectory::new();
        tr.move_to(1.0);
        let err = evaluate(&tr, &inst(Variant::Open, vec![Request::new(3, -1.0, 0.0)]));
        assert_eq!(err.unwrap_err(), EvalError::Incomplete(Label(3)));
    }

    #[test]
    fn merge_and_truncate() {
        let mut tr = Trajectory::new();
        tr.move_to(1.0);
        tr.move_to(2.0);
        assert_eq!(tr.segments().len(), 1);
        tr.wait_until(4.0);
        tr.truncate(3.0);
        assert_eq!(tr.end_time(), 3.0);
        assert_eq!(tr.pos_at(1.5), 1.5);
        assert_eq!(tr.pos_at(2.5), 2.0);
    }
}
