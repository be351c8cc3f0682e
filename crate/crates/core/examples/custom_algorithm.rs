//! Plugging a user-defined algorithm into the simulator: "go to the nearest
//! outstanding request, never look at predictions".

use linetsp::algorithms::{AlgoError, AlgoKind, AlgoState, MovePlan, OnlineAlgorithm};
use linetsp::engine::{competitive_ratio, run_instance};
use linetsp::experiment::{gen_instance, GenParams};
use linetsp::opt;

struct Greedy;

impl OnlineAlgorithm for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn update(&self, state: &AlgoState) -> Result<MovePlan, AlgoError> {
        let mut left: Vec<f64> = state.outstanding.iter().map(|r| r.pos).filter(|&x| x < state.pos).collect();
        let mut right: Vec<f64> = state.outstanding.iter().map(|r| r.pos).filter(|&x| x >= state.pos).collect();
        left.sort_by(|a, b| b.total_cmp(a));
        right.sort_by(f64::total_cmp);
        // nearer side first, then sweep to the other side's extreme
        let (lo, hi) = (left.last().copied(), right.last().copied());
        let targets = match (lo, hi) {
            (Some(l), Some(h)) if state.pos - l <= h - state.pos => vec![l, h],
            (Some(l), Some(h)) => vec![h, l],
            (Some(l), None) => vec![l],
            (None, Some(h)) => vec![h],
            (None, None) => vec![],
        };
        Ok(MovePlan::new(targets, false))
    }
}

fn main() {
    let params = GenParams { n_max: 12, ..GenParams::default() };
    let (mut worst_greedy, mut worst_far) = (0.0f64, 0.0f64);
    for id in 0..200 {
        let instance = gen_instance(&params, &mut params.stream(id)).unwrap();
        let best = opt(&instance).unwrap();
        let greedy = run_instance(&instance, &Greedy).unwrap();
        let far = run_instance(&instance, &AlgoKind::FarFirst).unwrap();
        worst_greedy = worst_greedy.max(competitive_ratio(&greedy.result, &best));
        worst_far = worst_far.max(competitive_ratio(&far.result, &best));
    }
    println!("worst closed ratio over 200 instances: greedy {worst_greedy:.4}, farfirst {worst_far:.4}");
}
