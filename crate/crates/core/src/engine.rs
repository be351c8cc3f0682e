//! Event-driven co-simulation of an online algorithm and a release source.
//!
//! The agent executes its current plan one straight segment at a time. Each
//! segment is offered to the [`EventSource`], which answers with the earliest
//! release inside it (if any). Serves along a segment and release instants
//! are computed in closed form, so trajectories are exact up to floating
//! point rounding.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::{AlgoError, AlgoState, MovePlan, OnlineAlgorithm};
use crate::instance::{Instance, Label, PredictionSet, Request, ValidationError, Variant};
use crate::oracle::OracleResult;
use crate::trajectory::{Segment, SimResult, Trajectory};
use crate::EPS;

/// Default cut-off time after which a run is declared divergent.
pub const DEFAULT_HORIZON: f64 = 1e6;

/// Requests released together at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseEvent {
    pub time: f64,
    pub requests: Vec<Request>,
}

/// Supplier of releases, possibly reacting to the agent's motion.
pub trait EventSource {
    /// Total number of requests that will eventually be released.
    fn request_count(&self) -> usize;

    /// The agent follows `seg` from `seg.t0`. Returns the earliest release at
    /// a time in `[seg.t0, seg.t1]`, or `None` if nothing is released in that
    /// window. When an event is returned the agent is assumed to have
    /// followed `seg` only up to the event time.
    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent>;
}

/// Releases a fixed instance's requests at their stored times.
#[derive(Debug, Clone)]
pub struct FixedSource {
    pending: Vec<Request>,
    next: usize,
}

impl FixedSource {
    pub fn new(instance: &Instance) -> Self {
        let mut pending = instance.requests.clone();
        pending.sort_by(|a, b| a.rel.total_cmp(&b.rel).then(a.label.cmp(&b.label)));
        FixedSource { pending, next: 0 }
    }
}

pub fn fixed_source(instance: &Instance) -> FixedSource {
    FixedSource::new(instance)
}

impl EventSource for FixedSource {
    fn request_count(&self) -> usize {
        self.pending.len()
    }

    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
        let first = self.pending.get(self.next)?;
        if first.rel > seg.t1 {
            return None;
        }
        let time = first.rel;
        let count = self.pending[self.next..].iter().take_while(|r| r.rel == first.rel).count();
        let requests = self.pending[self.next..self.next + count].to_vec();
        self.next += count;
        Some(ReleaseEvent { time, requests })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("release event at {time} lies outside the queried segment [{t0}, {t1}]")]
    EventOutsideSegment { time: f64, t0: f64, t1: f64 },
    #[error("release event at {0} carries no requests")]
    EmptyEvent(f64),
    #[error("request {0} released twice")]
    DuplicateRelease(Label),
    #[error("released request {0} has no prediction")]
    UnknownLabel(Label),
    #[error("request {label} released at {time} but reports release time {rel}")]
    ReleaseTimeMismatch { label: Label, time: f64, rel: f64 },
    #[error("source went quiet after {released} of {expected} releases")]
    Quiescent { released: usize, expected: usize },
    #[error("{predictions} predictions for {requests} requests")]
    PredictionCount { predictions: usize, requests: usize },
    #[error("run did not finish before the horizon {0}")]
    Divergence(f64),
    #[error(transparent)]
    Algorithm(#[from] AlgoError),
    #[error(transparent)]
    Transcript(#[from] ValidationError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub horizon: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { horizon: DEFAULT_HORIZON }
    }
}

/// Outcome of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    #[serde(flatten)]
    pub result: SimResult,
    /// Requests in the order they were released, with their release times.
    pub transcript: Vec<Request>,
    /// Number of times the algorithm's update function was invoked.
    pub updates: usize,
}

impl Run {
    /// The fixed instance that reproduces this run's releases.
    pub fn transcript_instance(
        &self,
        variant: Variant,
        predictions: &PredictionSet,
    ) -> Result<Instance, ValidationError> {
        Instance::new(variant, self.transcript.clone(), predictions.clone())
    }
}

struct World<'a> {
    n: usize,
    t: f64,
    pos: f64,
    trajectory: Trajectory,
    outstanding: Vec<Request>,
    unreleased: BTreeSet<Label>,
    transcript: Vec<Request>,
    serve_time: BTreeMap<Label, f64>,
    predictions: &'a PredictionSet,
    variant: Variant,
}

impl World<'_> {
    fn release(&mut self, ev: ReleaseEvent) -> Result<(), SimError> {
        if ev.requests.is_empty() {
            return Err(SimError::EmptyEvent(ev.time));
        }
        for r in ev.requests {
            if r.rel != ev.time {
                return Err(SimError::ReleaseTimeMismatch { label: r.label, time: ev.time, rel: r.rel });
            }
            if !self.unreleased.remove(&r.label) {
                return Err(if self.predictions.get(r.label).is_some() {
                    SimError::DuplicateRelease(r.label)
                } else {
                    SimError::UnknownLabel(r.label)
                });
            }
            self.transcript.push(r);
            self.outstanding.push(r);
        }
        Ok(())
    }

    /// Serves outstanding requests at the current position.
    fn serve_here(&mut self) {
        let (t, pos) = (self.t, self.pos);
        let serve_time = &mut self.serve_time;
        self.outstanding.retain(|r| {
            if (r.pos - pos).abs() <= EPS {
                serve_time.insert(r.label, t.max(r.rel));
                false
            } else {
                true
            }
        });
    }

    /// Serves outstanding requests visited on `seg` up to `until`.
    fn serve_along(&mut self, seg: &Segment, until: f64) {
        let serve_time = &mut self.serve_time;
        self.outstanding.retain(|r| match seg.first_visit(r.pos, r.rel) {
            Some(ts) if ts <= until + EPS => {
                serve_time.insert(r.label, ts.min(until).max(r.rel));
                false
            }
            _ => true,
        });
    }

    fn done(&self) -> bool {
        self.serve_time.len() == self.n
    }

    fn state(&self) -> AlgoState<'_> {
        AlgoState {
            now: self.t,
            pos: self.pos,
            outstanding: self.outstanding.clone(),
            unreleased: self.unreleased.iter().copied().collect(),
            predictions: self.predictions,
            n: self.n,
            served: self.serve_time.keys().copied().collect(),
            variant: self.variant,
        }
    }

    fn finish(mut self, updates: usize) -> Run {
        let t_serve = self.serve_time.values().copied().fold(0.0, f64::max);
        self.trajectory.truncate(t_serve);
        let makespan = match self.variant {
            Variant::Open => t_serve,
            Variant::Closed => {
                let back = self.trajectory.pos_at(t_serve).abs();
                self.trajectory.move_to(0.0);
                t_serve + back
            }
        };
        Run {
            result: SimResult { trajectory: self.trajectory, serve_time: self.serve_time, t_serve, makespan },
            transcript: self.transcript,
            updates,
        }
    }
}

/// Runs `algorithm` against `source` with the default horizon.
pub fn simulate(
    source: &mut dyn EventSource,
    algorithm: &dyn OnlineAlgorithm,
    predictions: &PredictionSet,
    variant: Variant,
) -> Result<Run, SimError> {
    simulate_with(SimConfig::default(), source, algorithm, predictions, variant)
}

pub fn simulate_with(
    config: SimConfig,
    source: &mut dyn EventSource,
    algorithm: &dyn OnlineAlgorithm,
    predictions: &PredictionSet,
    variant: Variant,
) -> Result<Run, SimError> {
    let n = source.request_count();
    if predictions.len() != n {
        return Err(SimError::PredictionCount { predictions: predictions.len(), requests: n });
    }
    let mut w = World {
        n,
        t: 0.0,
        pos: 0.0,
        trajectory: Trajectory::new(),
        outstanding: Vec::new(),
        unreleased: predictions.labels().collect(),
        transcript: Vec::new(),
        serve_time: BTreeMap::new(),
        predictions,
        variant,
    };

    let start = Segment { t0: 0.0, x0: 0.0, v: 0.0, t1: 0.0 };
    if let Some(ev) = source.query(&start) {
        check_inside(&ev, &start)?;
        w.release(ev)?;
    }
    w.serve_here();
    if w.done() {
        return Ok(w.finish(0));
    }
    let mut plan: MovePlan = algorithm.update(&w.state())?;
    let mut updates = 1;
    let mut next = 0;

    loop {
        while next < plan.targets.len() && (plan.targets[next] - w.pos).abs() <= EPS {
            next += 1;
        }
        let moving = next < plan.targets.len();
        let seg = if moving {
            let x = plan.targets[next];
            let v = if x > w.pos { 1.0 } else { -1.0 };
            Segment { t0: w.t, x0: w.pos, v, t1: w.t + (x - w.pos).abs() }
        } else {
            Segment { t0: w.t, x0: w.pos, v: 0.0, t1: config.horizon }
        };
        if seg.t1 > config.horizon || w.t >= config.horizon {
            return Err(SimError::Divergence(config.horizon));
        }

        let ev = source.query(&seg);
        let t_end = match &ev {
            Some(e) => {
                check_inside(e, &seg)?;
                e.time.clamp(seg.t0, seg.t1)
            }
            None => seg.t1,
        };
        w.serve_along(&seg, t_end);
        if w.done() {
            if let Some(e) = ev {
                // every request is already out, so this batch repeats or invents labels
                w.release(e)?;
            }
            let t_serve = w.serve_time.values().copied().fold(0.0, f64::max);
            w.trajectory.push(seg.truncated(t_serve.max(seg.t0)));
            return Ok(w.finish(updates));
        }
        w.trajectory.push(seg.truncated(t_end));
        w.t = t_end;
        w.pos = seg.pos_at(t_end);

        match ev {
            Some(e) => {
                w.release(e)?;
                w.serve_here();
                if w.done() {
                    return Ok(w.finish(updates));
                }
                plan = algorithm.update(&w.state())?;
                updates += 1;
                next = 0;
            }
            None if moving => next += 1,
            None => {
                let released = w.n - w.unreleased.len();
                return Err(if released < w.n {
                    SimError::Quiescent { released, expected: w.n }
                } else {
                    SimError::Divergence(config.horizon)
                });
            }
        }
    }
}

fn check_inside(ev: &ReleaseEvent, seg: &Segment) -> Result<(), SimError> {
    if ev.time < seg.t0 - EPS || ev.time > seg.t1 + EPS || !ev.time.is_finite() {
        return Err(SimError::EventOutsideSegment { time: ev.time, t0: seg.t0, t1: seg.t1 });
    }
    Ok(())
}

/// Runs `algorithm` on a fixed instance with its own predictions and variant.
pub fn run_instance(instance: &Instance, algorithm: &dyn OnlineAlgorithm) -> Result<Run, SimError> {
    simulate(&mut FixedSource::new(instance), algorithm, &instance.predictions, instance.variant)
}

/// `makespan / opt`, with the all-at-origin case (`opt = 0`) defined as 1.
pub fn competitive_ratio(sim: &SimResult, oracle: &OracleResult) -> f64 {
    if oracle.opt_makespan <= EPS {
        1.0
    } else {
        sim.makespan / oracle.opt_makespan
    }
}

/// Checks the structural invariants of a finished run: unit speed, a
/// continuous path from the origin, every request served at or after its
/// release while the agent is on it, and closed runs ending at the origin.
pub fn check_run(run: &Run, variant: Variant) -> Result<(), String> {
    let segs = run.result.trajectory.segments();
    let (mut t, mut x) = (0.0, 0.0);
    for (i, s) in segs.iter().enumerate() {
        if s.v.abs() > 1.0 {
            return Err(format!("segment {i} has speed {}", s.v.abs()));
        }
        if (s.t0 - t).abs() > EPS || (s.x0 - x).abs() > EPS {
            return Err(format!("segment {i} starts at ({}, {}) after ({t}, {x})", s.t0, s.x0));
        }
        if s.t1 < s.t0 {
            return Err(format!("segment {i} runs backwards in time"));
        }
        t = s.t1;
        x = s.end_pos();
    }
    for r in &run.transcript {
        let ts = *run.result.serve_time.get(&r.label).ok_or(format!("{} never served", r.label))?;
        if ts < r.rel {
            return Err(format!("{} served at {ts} before its release {}", r.label, r.rel));
        }
        let at = run.result.trajectory.pos_at(ts);
        if (at - r.pos).abs() > EPS {
            return Err(format!("{} served at {ts} while the agent is at {at}", r.label));
        }
    }
    if run.result.serve_time.len() != run.transcript.len() {
        return Err("serve times do not match the transcript".into());
    }
    if variant == Variant::Closed {
        if (run.result.trajectory.end_pos()).abs() > EPS {
            return Err(format!("closed run ends at {}", run.result.trajectory.end_pos()));
        }
        if (run.result.trajectory.end_time() - run.result.makespan).abs() > EPS {
            return Err("closed makespan differs from the return time".into());
        }
    } else if (run.result.makespan - run.result.t_serve).abs() > 0.0 {
        return Err("open makespan differs from the last serve".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgoKind;
    use crate::instance::normalize_instance;
    use crate::oracle::opt_bruteforce;
    use crate::trajectory::evaluate;

    fn instance(variant: Variant, reqs: &[(u32, f64, f64)]) -> Instance {
        let reqs = reqs.iter().map(|&(l, q, r)| Request::new(l, q, r)).collect();
        normalize_instance(Instance::with_exact_predictions(variant, reqs).unwrap()).unwrap()
    }

    #[test]
    fn farfirst_closed_all_released() {
        let i = instance(Variant::Closed, &[(1, 2.0, 0.0), (2, -1.0, 0.0)]);
        let run = run_instance(&i, &AlgoKind::FarFirst).unwrap();
        assert_eq!(run.result.makespan, 6.0);
        let opt = opt_bruteforce(&i).unwrap();
        assert_eq!(competitive_ratio(&run.result, &opt), 1.0);
        check_run(&run, Variant::Closed).unwrap();
    }

    #[test]
    fn waitcopy_open_late_request() {
        let i = instance(Variant::Open, &[(1, 1.0, 1.0)]);
        let run = run_instance(&i, &AlgoKind::WaitCopy).unwrap();
        assert_eq!(run.result.makespan, 2.0);
        let opt = opt_bruteforce(&i).unwrap();
        assert_eq!(opt.opt_makespan, 1.0);
        assert_eq!(competitive_ratio(&run.result, &opt), 2.0);
    }

    #[test]
    fn open_run_stops_mid_segment() {
        // NEARFIRST sweeps to 1 then -1; the open run stops at the last serve
        let i = instance(Variant::Open, &[(1, 1.0, 0.0), (2, -1.0, 0.0)]);
        let run = run_instance(&i, &AlgoKind::NearFirst).unwrap();
        assert_eq!(run.result.makespan, 3.0);
        assert_eq!(run.result.trajectory.end_time(), 3.0);
        check_run(&run, Variant::Open).unwrap();
    }

    #[test]
    fn fixed_source_batches() {
        let i = instance(Variant::Open, &[(1, 1.0, 1.0), (2, 2.0, 1.0), (3, 3.0, 2.0)]);
        let mut src = FixedSource::new(&i);
        let wait = |t0: f64| Segment { t0, x0: 0.0, v: 0.0, t1: 10.0 };
        assert_eq!(src.query(&wait(0.0)).unwrap().requests.len(), 1);
        let ev = src.query(&wait(0.0)).unwrap();
        assert_eq!((ev.time, ev.requests.len()), (1.0, 2));
        assert_eq!(src.query(&wait(1.0)).unwrap().time, 2.0);
        assert!(src.query(&wait(2.0)).is_none());
    }

    #[test]
    fn origin_only_instance_finishes_at_once() {
        let i = instance(Variant::Closed, &[]);
        let run = run_instance(&i, &AlgoKind::FarFirst).unwrap();
        assert_eq!(run.result.makespan, 0.0);
        let opt = opt_bruteforce(&i).unwrap();
        assert_eq!(competitive_ratio(&run.result, &opt), 1.0);
    }

    #[test]
    fn simulation_agrees_with_evaluation() {
        let i = instance(Variant::Closed, &[(1, 2.0, 3.0), (2, -1.0, 0.5), (3, 1.0, 6.0)]);
        for algo in AlgoKind::ALL {
            let mut i = i.clone();
            if algo == AlgoKind::Pivot {
                let p = i.predictions.clone().with_final_label(Some(Label(1)));
                i = i.with_predictions(p).unwrap();
            }
            let run = run_instance(&i, &algo).unwrap();
            check_run(&run, Variant::Closed).unwrap();
            let replay = evaluate(&run.result.trajectory, &i).unwrap();
            assert!((replay.makespan - run.result.makespan).abs() < 1e-9, "{algo}");
            assert!(run.result.makespan >= opt_bruteforce(&i).unwrap().opt_makespan - 1e-9);
        }
    }

    #[test]
    fn release_and_serve_at_the_same_instant() {
        // the agent reaches 1 at t=1 exactly when the request appears
        let i = instance(Variant::Open, &[(1, 1.0, 1.0)]);
        let run = run_instance(&i, &AlgoKind::NearFirst).unwrap();
        assert_eq!(run.result.serve_time[&Label(1)], 1.0);
        assert_eq!(run.result.makespan, 1.0);
    }

    struct Liar;
    impl EventSource for Liar {
        fn request_count(&self) -> usize {
            2
        }
        fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
            Some(ReleaseEvent { time: seg.t1 + 1.0, requests: vec![Request::new(1, 1.0, seg.t1 + 1.0)] })
        }
    }

    struct Silent;
    impl EventSource for Silent {
        fn request_count(&self) -> usize {
            2
        }
        fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
            (seg.t0 == 0.0 && seg.t1 == 0.0)
                .then(|| ReleaseEvent { time: 0.0, requests: vec![Request::new(0, 0.0, 0.0)] })
        }
    }

    #[test]
    fn protocol_errors() {
        let p = PredictionSet::new([(Label(0), 0.0), (Label(1), 1.0)].into_iter().collect());
        let err = simulate(&mut Liar, &AlgoKind::NearFirst, &p, Variant::Open).unwrap_err();
        assert!(matches!(err, SimError::EventOutsideSegment { .. }));
        let err = simulate(&mut Silent, &AlgoKind::NearFirst, &p, Variant::Open).unwrap_err();
        assert_eq!(err, SimError::Quiescent { released: 1, expected: 2 });
    }

    #[test]
    fn transcript_replay_reproduces_the_run() {
        let i = instance(Variant::Open, &[(1, 2.0, 3.0), (2, -1.0, 0.5), (3, 1.0, 1.0)]);
        let run = run_instance(&i, &AlgoKind::NearFirst).unwrap();
        let again = run_instance(&run.transcript_instance(Variant::Open, &i.predictions).unwrap(), &AlgoKind::NearFirst)
            .unwrap();
        assert_eq!(run.result, again.result);
    }
}
