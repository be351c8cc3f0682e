use std::cmp::Ordering;

use crate::instance::{Label, PredictionSet};
use crate::EPS;

use super::{fold_max, fold_min, AlgoState, MovePlan};

/// The side of the prediction furthest from the origin; ties go right.
pub fn far_side_is_right(predictions: &PredictionSet) -> bool {
    predictions.max().max(0.0) >= -predictions.min().min(0.0)
}

/// Far-side predictions by descending distance from the origin, then the
/// near side the same way, then predictions at the origin. Equal distances
/// keep ascending label order.
pub fn farfirst_ordering(predictions: &PredictionSet) -> Vec<Label> {
    let sign = if far_side_is_right(predictions) { 1.0 } else { -1.0 };
    let mut far = Vec::new();
    let mut near = Vec::new();
    let mut origin = Vec::new();
    for (label, p) in predictions.iter() {
        let p = sign * p;
        match p.partial_cmp(&0.0) {
            Some(Ordering::Greater) => far.push((label, p)),
            Some(Ordering::Less) => near.push((label, -p)),
            _ => origin.push((label, 0.0)),
        }
    }
    // stable sort keeps the label order from the BTreeMap on ties
    far.sort_by(|a, b| b.1.total_cmp(&a.1));
    near.sort_by(|a, b| b.1.total_cmp(&a.1));
    far.into_iter().chain(near).chain(origin).map(|(l, _)| l).collect()
}

pub fn farfirst_update(state: &AlgoState) -> MovePlan {
    let far_right = far_side_is_right(state.predictions);
    let p = farfirst_ordering(state.predictions)
        .into_iter()
        .find(|l| state.unreleased.contains(l))
        .and_then(|l| state.predictions.get(l));
    let genuine = p.is_some();
    let p = p.unwrap_or(0.0);

    let mut pos_side = state.pos > 0.0;
    let mut p_side = p > 0.0;
    if state.pos.abs() <= EPS {
        pos_side = far_right;
    }
    if p.abs() <= EPS {
        p_side = !pos_side;
    }
    let ext = |side: bool, extra: f64| {
        let all = || state.outstanding_positions().chain(std::iter::once(extra));
        if side {
            fold_max(all())
        } else {
            fold_min(all())
        }
    };
    MovePlan::new(vec![ext(pos_side, state.pos), ext(p_side, p), p], genuine)
}
