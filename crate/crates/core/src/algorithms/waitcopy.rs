use crate::instance::Variant;

use super::{fold_max, fold_min, AlgoState, MovePlan};

/// Waits until every request is released, then serves what is left in the
/// cheaper of the two sweep orders. Once everything is released a sweep
/// over the two extremes is an optimal schedule.
pub fn waitcopy_update(state: &AlgoState) -> MovePlan {
    if state.released_count() < state.n || state.outstanding.is_empty() {
        return MovePlan::wait();
    }
    let lo = fold_min(state.outstanding_positions());
    let hi = fold_max(state.outstanding_positions());
    let closed = state.variant == Variant::Closed;
    let cost = |first: f64, last: f64| {
        (state.pos - first).abs() + (hi - lo) + if closed { last.abs() } else { 0.0 }
    };
    let mut targets = if cost(lo, hi) <= cost(hi, lo) { vec![lo, hi] } else { vec![hi, lo] };
    if closed {
        targets.push(0.0);
    }
    MovePlan::new(targets, false)
}
