use super::{directed_plan, AlgoState, MovePlan};

/// Heads first toward the side whose extreme prediction is nearer.
pub fn nearfirst_update(state: &AlgoState) -> MovePlan {
    let p = state.predictions;
    directed_plan(state, || p.min().abs() < p.max().abs())
}

#[cfg(test)]
mod tests {
    use super::super::test_util::{preds, state};
    use super::*;

    #[test]
    fn all_released_sweeps_from_nearer_end() {
        let p = preds(&[0.0]);
        let s = state(&p, 0.2, &[-1.0, 1.0], &[]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![1.0, -1.0], false));
        let s = state(&p, -0.2, &[-1.0, 1.0], &[]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![-1.0, 1.0], false));
    }

    #[test]
    fn min_branch_waits_on_leftmost_unreleased() {
        // |min P| = 1 < |max P| = 2
        let p = preds(&[0.0, -1.0, 2.0]);
        let s = state(&p, 0.0, &[], &[1, 2]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![-1.0, -1.0], true));
    }

    #[test]
    fn min_branch_visits_outstanding_left_of_prediction() {
        let p = preds(&[0.0, -1.0, 2.0]);
        let s = state(&p, 0.0, &[-1.5], &[1, 2]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![-1.5, -1.0], true));
    }

    #[test]
    fn side_test_uses_released_predictions_too() {
        // the -1 prediction is released already, yet still decides the side
        let p = preds(&[0.0, -1.0, 2.0]);
        let s = state(&p, 0.0, &[], &[2]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![2.0, 2.0], true));
    }

    #[test]
    fn tie_goes_right_first() {
        let p = preds(&[0.0, -1.0, 1.0]);
        let s = state(&p, 0.0, &[], &[1, 2]);
        assert_eq!(nearfirst_update(&s), MovePlan::new(vec![1.0, 1.0], true));
    }

    #[test]
    fn nothing_left() {
        let p = preds(&[0.0]);
        assert_eq!(nearfirst_update(&state(&p, 0.3, &[], &[])), MovePlan::wait());
    }
}
