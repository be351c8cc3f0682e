use super::{directed_plan, AlgoError, AlgoState, MovePlan};

/// Heads first toward the side away from the predicted final request.
pub fn pivot_update(state: &AlgoState) -> Result<MovePlan, AlgoError> {
    let p = state.predictions;
    let f = p.final_label().ok_or(AlgoError::MissingFinalLabel("pivot"))?;
    let pf = p.get(f).ok_or(AlgoError::MissingPrediction(f))?;
    Ok(directed_plan(state, || pf > (p.max() + p.min()) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::super::test_util::{preds, state};
    use super::*;
    use crate::instance::Label;

    #[test]
    fn final_on_the_right_goes_left_first() {
        let p = preds(&[-1.0, 0.0, 3.0]).with_final_label(Some(Label(2)));
        let plan = pivot_update(&state(&p, 0.0, &[], &[0, 2])).unwrap();
        assert_eq!(plan, MovePlan::new(vec![-1.0, -1.0], true));
    }

    #[test]
    fn final_at_midpoint_goes_right_first() {
        let p = preds(&[-1.0, 1.0, 3.0]).with_final_label(Some(Label(1)));
        let plan = pivot_update(&state(&p, 0.0, &[], &[0, 2])).unwrap();
        assert_eq!(plan, MovePlan::new(vec![3.0, 3.0], true));
    }

    #[test]
    fn all_released_sweep() {
        let p = preds(&[0.0]).with_final_label(Some(Label(0)));
        let plan = pivot_update(&state(&p, -1.0, &[-2.0, 1.0], &[])).unwrap();
        assert_eq!(plan, MovePlan::new(vec![-2.0, 1.0], false));
    }

    #[test]
    fn needs_final_label() {
        let p = preds(&[0.0, 1.0]);
        assert_eq!(
            pivot_update(&state(&p, 0.0, &[], &[1])).unwrap_err(),
            AlgoError::MissingFinalLabel("pivot")
        );
    }
}
