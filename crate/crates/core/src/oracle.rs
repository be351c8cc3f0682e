//! Exact offline optimum.
//!
//! Optimal schedules can be taken in a normal form: move straight from one
//! served request to the next and wait only at the destination. Under that
//! form a schedule is just a serve order, and the arrival time at the k-th
//! request is `max(arrival[k-1] + |q_k - q_{k-1}|, rel(q_k))`. The closed
//! variant adds the final return leg.
//!
//! Before searching, requests are reduced: a request co-located with one that
//! is released later is absorbed by it, and a request at the origin released
//! at time 0 is served by the start state.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Instance, Label, Variant};
use crate::EPS;

/// Largest reduced size accepted by [`opt_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Largest reduced size accepted by [`opt_dp`].
pub const DP_LIMIT: usize = 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance too large for brute force: {0} requests after pruning (limit {BRUTE_FORCE_LIMIT})")]
    TooLargeForBruteForce(usize),
    #[error("instance too large for the subset DP: {0} requests after pruning (limit {DP_LIMIT})")]
    TooLargeForDp(usize),
    #[error("could not certify the optimum of a {n}-request instance: lower bound {lower}, best schedule {upper}")]
    Uncertified { n: usize, lower: f64, upper: f64 },
    #[error("{0} variant is not supported here")]
    UnsupportedVariant(Variant),
}

/// How an [`OracleResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    BruteForce,
    Dp,
    /// Large instance: a structured schedule matched an elementary lower
    /// bound. The ender set is then only the enders among those schedules.
    Certified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    #[serde(rename = "opt")]
    pub opt_makespan: f64,
    #[serde(rename = "order")]
    pub optimal_order: Vec<Label>,
    #[serde(rename = "enders")]
    pub ender_set: BTreeSet<Label>,
    pub method: OracleMethod,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    label: Label,
    pos: f64,
    rel: f64,
}

/// Reduced request set plus what it takes to expand results back.
struct Reduced {
    points: Vec<Point>,
    /// Labels served for free alongside a kept point, or at the start.
    absorbed: Vec<(Option<usize>, Point)>,
}

fn reduce(instance: &Instance, prune: bool) -> Reduced {
    let all: Vec<Point> = instance
        .requests
        .iter()
        .map(|r| Point { label: r.label, pos: r.pos, rel: r.rel })
        .collect();
    if !prune {
        return Reduced { points: all, absorbed: Vec::new() };
    }
    let mut sorted = all;
    sorted.sort_by(|a, b| a.pos.total_cmp(&b.pos).then(a.label.cmp(&b.label)));
    let mut points = Vec::new();
    let mut absorbed = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j].pos - sorted[j - 1].pos <= EPS {
            j += 1;
        }
        let group = &sorted[i..j];
        // latest release wins; lowest label on ties
        let keep = group
            .iter()
            .copied()
            .reduce(|a, b| if b.rel > a.rel || (b.rel == a.rel && b.label < a.label) { b } else { a })
            .unwrap();
        let at_start = keep.pos.abs() <= EPS && keep.rel <= 0.0;
        let slot = if at_start {
            None
        } else {
            points.push(keep);
            Some(points.len() - 1)
        };
        for p in group {
            if p.label != keep.label || at_start {
                absorbed.push((slot, *p));
            }
        }
        i = j;
    }
    Reduced { points, absorbed }
}

fn arrivals(points: &[Point], order: &[usize]) -> f64 {
    let (mut t, mut x) = (0.0f64, 0.0f64);
    for &i in order {
        let p = points[i];
        t = (t + (p.pos - x).abs()).max(p.rel);
        x = p.pos;
    }
    t
}

fn finish(variant: Variant, arrival: f64, last_pos: f64) -> f64 {
    match variant {
        Variant::Open => arrival,
        Variant::Closed => arrival + last_pos.abs(),
    }
}

/// Makespan of serving `order` in normal form.
pub fn replay_order(instance: &Instance, order: &[Label]) -> Option<f64> {
    let points: Vec<Point> = order
        .iter()
        .map(|l| instance.request(*l).map(|r| Point { label: r.label, pos: r.pos, rel: r.rel }))
        .collect::<Option<_>>()?;
    let idx: Vec<usize> = (0..points.len()).collect();
    let last = points.last().map_or(0.0, |p| p.pos);
    Some(finish(instance.variant, arrivals(&points, &idx), last))
}

/// Turns a solution of the reduced problem into one for the full instance.
fn expand(
    variant: Variant,
    reduced: &Reduced,
    opt: f64,
    order: &[usize],
    ender_points: &BTreeSet<usize>,
    method: OracleMethod,
) -> OracleResult {
    let mut optimal_order: Vec<Label> = reduced
        .absorbed
        .iter()
        .filter(|(slot, _)| slot.is_none())
        .map(|(_, p)| p.label)
        .collect();
    for &i in order {
        optimal_order.push(reduced.points[i].label);
        optimal_order.extend(
            reduced.absorbed.iter().filter(|(slot, _)| *slot == Some(i)).map(|(_, p)| p.label),
        );
    }
    let mut ender_set = BTreeSet::new();
    if variant == Variant::Open {
        let mut ender_pos: Vec<f64> = ender_points.iter().map(|&i| reduced.points[i].pos).collect();
        if reduced.points.is_empty() {
            ender_pos.push(0.0);
        }
        ender_set.extend(ender_points.iter().map(|&i| reduced.points[i].label));
        for (_, p) in &reduced.absorbed {
            if ender_pos.iter().any(|e| (e - p.pos).abs() <= EPS) {
                ender_set.insert(p.label);
            }
        }
    }
    OracleResult { opt_makespan: opt, optimal_order, ender_set, method }
}

/// Exhaustive search over serve orders. Reference implementation for the DP.
pub fn opt_bruteforce(instance: &Instance) -> Result<OracleResult, OracleError> {
    opt_bruteforce_with(instance, true)
}

/// [`opt_bruteforce`] with the request reduction optionally turned off.
pub fn opt_bruteforce_with(instance: &Instance, prune: bool) -> Result<OracleResult, OracleError> {
    let reduced = reduce(instance, prune);
    let m = reduced.points.len();
    if m > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLargeForBruteForce(m));
    }

    struct Search<'a> {
        points: &'a [Point],
        variant: Variant,
        best: f64,
        best_order: Vec<usize>,
        per_last: Vec<f64>,
        stack: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, used: u32, t: f64, x: f64) {
            if t > self.best + EPS {
                return;
            }
            if self.stack.len() == self.points.len() {
                let last = *self.stack.last().unwrap();
                let value = finish(self.variant, t, x);
                self.per_last[last] = self.per_last[last].min(value);
                if value < self.best {
                    self.best = value;
                    self.best_order.clone_from(&self.stack);
                }
                return;
            }
            for i in 0..self.points.len() {
                if used & (1 << i) != 0 {
                    continue;
                }
                let p = self.points[i];
                let arrive = (t + (p.pos - x).abs()).max(p.rel);
                self.stack.push(i);
                self.go(used | (1 << i), arrive, p.pos);
                self.stack.pop();
            }
        }
    }

    if m == 0 {
        return Ok(expand(instance.variant, &reduced, 0.0, &[], &BTreeSet::new(), OracleMethod::BruteForce));
    }
    let mut search = Search {
        points: &reduced.points,
        variant: instance.variant,
        best: f64::INFINITY,
        best_order: Vec::new(),
        per_last: vec![f64::INFINITY; m],
        stack: Vec::with_capacity(m),
    };
    search.go(0, 0.0, 0.0);
    let best = search.best;
    let enders: BTreeSet<usize> = (0..m).filter(|&i| search.per_last[i] <= best + EPS).collect();
    Ok(expand(instance.variant, &reduced, best, &search.best_order, &enders, OracleMethod::BruteForce))
}

/// `min_i (a[i] + b[i])`, with independent lanes so it vectorizes.
#[inline]
fn row_min_sum(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [f64::INFINITY; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            let v = x[k] + y[k];
            acc[k] = if v < acc[k] { v } else { acc[k] };
        }
    }
    for (x, y) in ra.iter().zip(rb) {
        acc[0] = acc[0].min(x + y);
    }
    acc[0].min(acc[1]).min(acc[2].min(acc[3]))
}

/// Dynamic program over (served set, last served) states holding the earliest
/// arrival time at the last request.
pub fn opt_dp(instance: &Instance) -> Result<OracleResult, OracleError> {
    let reduced = reduce(instance, true);
    let table = dp_table(&reduced)?;
    Ok(dp_result(&reduced, &table, instance.variant))
}

/// Open and closed optima of the instance's requests from a single table.
pub fn opt_dp_both(instance: &Instance) -> Result<(OracleResult, OracleResult), OracleError> {
    let reduced = reduce(instance, true);
    let table = dp_table(&reduced)?;
    let open = dp_result(&reduced, &table, Variant::Open);
    let closed = dp_result(&reduced, &table, Variant::Closed);
    Ok((open, closed))
}

fn dp_table(reduced: &Reduced) -> Result<Vec<f64>, OracleError> {
    let m = reduced.points.len();
    if m > DP_LIMIT {
        return Err(OracleError::TooLargeForDp(m));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let pts = &reduced.points;
    // row `next` holds the distances from every point to `next`
    let dist: Vec<f64> =
        (0..m * m).map(|k| (pts[k / m].pos - pts[k % m].pos).abs()).collect();
    let full = (1usize << m) - 1;
    // row `set` holds the earliest arrival at each last point of `set` and
    // infinity elsewhere, so a row minimum needs no mask; every row is
    // written in full before it is read
    let mut dp = vec![0.0; (full + 1) * m];
    // increasing integer order visits every subset after all of its subsets
    for set in 1..=full {
        let (done, rest) = dp.split_at_mut(set * m);
        let row = &mut rest[..m];
        row.fill(f64::INFINITY);
        let mut bits = set;
        while bits != 0 {
            let next = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = set ^ (1 << next);
            let best = if prev == 0 {
                pts[next].pos.abs()
            } else {
                row_min_sum(&done[prev * m..(prev + 1) * m], &dist[next * m..(next + 1) * m])
            };
            row[next] = best.max(pts[next].rel);
        }
    }
    Ok(dp)
}

fn dp_result(reduced: &Reduced, dp: &[f64], variant: Variant) -> OracleResult {
    let m = reduced.points.len();
    if m == 0 {
        return expand(variant, reduced, 0.0, &[], &BTreeSet::new(), OracleMethod::Dp);
    }
    let pts = &reduced.points;
    let dist = |a: usize, b: usize| (pts[a].pos - pts[b].pos).abs();
    let full = (1usize << m) - 1;
    let values: Vec<f64> =
        (0..m).map(|i| finish(variant, dp[full * m + i], pts[i].pos)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let enders: BTreeSet<usize> = (0..m).filter(|&i| values[i] <= best + EPS).collect();
    let best_last = (0..m).find(|&i| values[i] == best).unwrap();

    // walk back through predecessor states
    let mut order = vec![best_last];
    let (mut set, mut last) = (full, best_last);
    while set.count_ones() > 1 {
        let t = dp[set * m + last];
        let prev_set = set & !(1 << last);
        let candidates = (0..m).filter(|&p| prev_set & (1 << p) != 0);
        let arrive = |p: usize| (dp[prev_set * m + p] + dist(p, last)).max(pts[last].rel);
        let prev = candidates
            .clone()
            .find(|&p| arrive(p) == t)
            .or_else(|| candidates.min_by(|&a, &b| arrive(a).total_cmp(&arrive(b))))
            .unwrap();
        order.push(prev);
        set = prev_set;
        last = prev;
    }
    order.reverse();
    expand(variant, reduced, best, &order, &enders, OracleMethod::Dp)
}

/// Elementary lower bound on the optimum: both extremes must be visited, and
/// nothing can be served before its release.
pub fn lower_bound(instance: &Instance) -> f64 {
    let e = instance.extremes();
    let (l, r) = (e.left.abs(), e.right.abs());
    match instance.variant {
        Variant::Open => {
            let rel = instance.requests.iter().map(|q| q.rel).fold(0.0, f64::max);
            (l + r + l.min(r)).max(rel)
        }
        Variant::Closed => {
            let rel = instance.requests.iter().map(|q| q.rel + q.pos.abs()).fold(0.0, f64::max);
            (2.0 * (l + r)).max(rel)
        }
    }
}

/// Sweep-shaped schedules: one side outward-first, then the other side in
/// either direction, with origin requests at the start, between the sides or
/// at the end.
fn structured_orders(points: &[Point]) -> Vec<Vec<usize>> {
    let by_amplitude = |pred: &dyn Fn(f64) -> bool, descending: bool| {
        let mut v: Vec<usize> = (0..points.len()).filter(|&i| pred(points[i].pos)).collect();
        v.sort_by(|&a, &b| {
            let o = points[a].pos.abs().total_cmp(&points[b].pos.abs());
            if descending { o.reverse() } else { o }
        });
        v
    };
    let zeros: Vec<usize> = (0..points.len()).filter(|&i| points[i].pos.abs() <= EPS).collect();
    let sides: [&dyn Fn(f64) -> bool; 2] = [&|x| x < -EPS, &|x| x > EPS];
    let mut orders = Vec::new();
    for (first, second) in [(0, 1), (1, 0)] {
        let out = by_amplitude(sides[first], true);
        for descending in [true, false] {
            let back = by_amplitude(sides[second], descending);
            for zero_slot in 0..3 {
                let mut o = Vec::with_capacity(points.len());
                if zero_slot == 0 {
                    o.extend(&zeros);
                }
                o.extend(&out);
                if zero_slot == 1 {
                    o.extend(&zeros);
                }
                o.extend(&back);
                if zero_slot == 2 {
                    o.extend(&zeros);
                }
                orders.push(o);
            }
        }
    }
    let mut by_release: Vec<usize> = (0..points.len()).collect();
    by_release.sort_by(|&a, &b| points[a].rel.total_cmp(&points[b].rel));
    orders.push(by_release);
    orders
}

/// Certifies the optimum of an instance too large for the DP by matching a
/// structured schedule against [`lower_bound`].
pub fn opt_certified(instance: &Instance) -> Result<OracleResult, OracleError> {
    let reduced = reduce(instance, true);
    let lower = lower_bound(instance);
    if reduced.points.is_empty() {
        return Ok(expand(instance.variant, &reduced, 0.0, &[], &BTreeSet::new(), OracleMethod::Certified));
    }
    let pts = &reduced.points;
    let scored: Vec<(f64, Vec<usize>)> = structured_orders(pts)
        .into_iter()
        .map(|o| {
            let last = pts[*o.last().unwrap()].pos;
            (finish(instance.variant, arrivals(pts, &o), last), o)
        })
        .collect();
    let (upper, best) = scored.iter().min_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
    if *upper > lower + EPS {
        return Err(OracleError::Uncertified { n: pts.len(), lower, upper: *upper });
    }
    let enders: BTreeSet<usize> = scored
        .iter()
        .filter(|(v, _)| *v <= lower + EPS)
        .map(|(_, o)| *o.last().unwrap())
        .collect();
    Ok(expand(instance.variant, &reduced, *upper, best, &enders, OracleMethod::Certified))
}

/// Exact optimum by the subset DP, or by certification beyond its size limit.
pub fn opt(instance: &Instance) -> Result<OracleResult, OracleError> {
    match opt_dp(instance) {
        Err(OracleError::TooLargeForDp(_)) => opt_certified(instance),
        other => other,
    }
}

/// Ender set of an open instance and, for every label, the distance from its
/// request to the nearest ender.
pub fn delta_inputs(
    instance: &Instance,
) -> Result<(BTreeSet<Label>, BTreeMap<Label, f64>), OracleError> {
    if instance.variant != Variant::Open {
        return Err(OracleError::UnsupportedVariant(instance.variant));
    }
    let res = opt(instance)?;
    Ok((res.ender_set.clone(), ender_distances(instance, &res)))
}

/// Distance from every request to the nearest member of `oracle.ender_set`.
pub fn ender_distances(instance: &Instance, oracle: &OracleResult) -> BTreeMap<Label, f64> {
    let ender_pos: Vec<f64> =
        oracle.ender_set.iter().filter_map(|l| instance.request(*l)).map(|r| r.pos).collect();
    instance
        .requests
        .iter()
        .map(|r| {
            let d = ender_pos.iter().map(|e| (r.pos - e).abs()).fold(f64::INFINITY, f64::min);
            (r.label, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{normalize_instance, Request};

    fn inst(variant: Variant, reqs: &[(u32, f64, f64)]) -> Instance {
        let reqs = reqs.iter().map(|&(l, p, r)| Request::new(l, p, r)).collect();
        normalize_instance(Instance::with_exact_predictions(variant, reqs).unwrap()).unwrap()
    }

    #[test]
    fn single_move_bounded_by_release() {
        let i = inst(Variant::Open, &[(0, 0.0, 0.0), (1, 1.0, 5.0)]);
        assert_eq!(opt_bruteforce(&i).unwrap().opt_makespan, 5.0);
        assert_eq!(opt_dp(&i).unwrap().opt_makespan, 5.0);
    }

    #[test]
    fn closed_two_sides() {
        let i = inst(Variant::Closed, &[(0, 0.0, 0.0), (1, -1.0, 0.0), (2, 1.0, 0.0)]);
        let bf = opt_bruteforce(&i).unwrap();
        assert_eq!(bf.opt_makespan, 4.0);
        assert!(bf.ender_set.is_empty());
        assert_eq!(opt_dp(&i).unwrap().opt_makespan, 4.0);
    }

    #[test]
    fn open_two_sides_both_end() {
        let i = inst(Variant::Open, &[(0, 0.0, 0.0), (1, -1.0, 0.0), (2, 1.0, 0.0)]);
        for res in [opt_bruteforce(&i).unwrap(), opt_dp(&i).unwrap()] {
            assert_eq!(res.opt_makespan, 3.0);
            assert_eq!(res.ender_set, BTreeSet::from([Label(1), Label(2)]));
        }
    }

    #[test]
    fn order_replays_to_opt() {
        let i = inst(
            Variant::Closed,
            &[(1, -1.0, 3.0), (2, 2.0, 0.5), (3, 0.5, 6.0), (4, -0.25, 1.0)],
        );
        let res = opt_dp(&i).unwrap();
        assert_eq!(res.optimal_order.len(), i.len());
        assert_eq!(replay_order(&i, &res.optimal_order).unwrap(), res.opt_makespan);
    }

    #[test]
    fn absorbed_requests_follow_their_keeper() {
        let i = inst(Variant::Open, &[(1, 1.0, 0.0), (2, 1.0, 4.0), (3, 0.0, 2.0)]);
        let res = opt_dp(&i).unwrap();
        assert_eq!(res.opt_makespan, 4.0);
        assert!(res.ender_set.contains(&Label(1)) && res.ender_set.contains(&Label(2)));
        assert_eq!(replay_order(&i, &res.optimal_order).unwrap(), 4.0);
    }

    #[test]
    fn all_at_origin() {
        let i = inst(Variant::Open, &[]);
        let res = opt_dp(&i).unwrap();
        assert_eq!(res.opt_makespan, 0.0);
        assert_eq!(res.ender_set, BTreeSet::from([Label(0)]));
    }

    #[test]
    fn size_limits() {
        let reqs: Vec<(u32, f64, f64)> = (1..=11).map(|k| (k, k as f64, 0.0)).collect();
        let i = inst(Variant::Open, &reqs);
        assert_eq!(opt_bruteforce(&i).unwrap_err(), OracleError::TooLargeForBruteForce(11));
        let reqs: Vec<(u32, f64, f64)> = (1..=23).map(|k| (k, k as f64, 0.0)).collect();
        let i = inst(Variant::Open, &reqs);
        assert_eq!(opt_dp(&i).unwrap_err(), OracleError::TooLargeForDp(23));
        // a one-sided sweep is certified by the lower bound
        assert_eq!(opt(&i).unwrap().opt_makespan, 23.0);
    }

    #[test]
    fn delta_inputs_nearest_ender() {
        let i = inst(Variant::Open, &[(1, -1.0, 0.0), (2, 1.0, 0.0), (3, 0.25, 0.0)]);
        let (enders, dist) = delta_inputs(&i).unwrap();
        assert_eq!(enders, BTreeSet::from([Label(1), Label(2)]));
        assert_eq!(dist[&Label(3)], 0.75);
        assert_eq!(dist[&Label(2)], 0.0);
        let closed = i.with_variant(Variant::Closed);
        assert_eq!(delta_inputs(&closed).unwrap_err(), OracleError::UnsupportedVariant(Variant::Closed));
    }
}
