mod common;

use linetsp::oracle::{lower_bound, opt_certified, replay_order};
use linetsp::{normalize_instance, opt, opt_bruteforce, opt_dp, opt_dp_both, Instance, Request, Variant};
use proptest::prelude::*;

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Open), Just(Variant::Closed)]
}

/// Requests on a half-unit lattice (many ties) or with continuous
/// coordinates, plus the origin request.
fn instance(max_extra: usize) -> impl Strategy<Value = Instance> {
    let lattice = (-6i32..=6, 0i32..=10).prop_map(|(p, r)| (p as f64 * 0.5, r as f64 * 0.5));
    let continuous = (-3.0f64..3.0, 0.0f64..5.0);
    let point = prop_oneof![lattice, continuous];
    (variant(), prop::collection::vec(point, 0..=max_extra)).prop_map(|(v, pts)| {
        let reqs = pts.into_iter().enumerate().map(|(i, (p, r))| Request::new(i as u32 + 1, p, r)).collect();
        normalize_instance(Instance::with_exact_predictions(v, reqs).unwrap()).unwrap()
    })
}

fn scaled(instance: &Instance, k: f64) -> Instance {
    let reqs = instance.requests.iter().map(|r| Request { pos: r.pos * k, rel: r.rel * k, ..*r }).collect();
    Instance::with_exact_predictions(instance.variant, reqs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dp_matches_bruteforce_and_enumeration(inst in instance(7)) {
        let dp = opt_dp(&inst).unwrap();
        let bf = opt_bruteforce(&inst).unwrap();
        let (naive, naive_enders) = common::naive_opt(&inst);
        prop_assert!((dp.opt_makespan - bf.opt_makespan).abs() <= 1e-9);
        prop_assert!((dp.opt_makespan - naive).abs() <= 1e-9);
        prop_assert_eq!(&dp.ender_set, &bf.ender_set);
        if inst.variant == Variant::Open {
            prop_assert_eq!(&dp.ender_set, &naive_enders);
        }
    }

    #[test]
    fn optimal_order_replays_to_the_optimum(inst in instance(9)) {
        let res = opt_dp(&inst).unwrap();
        let mut labels: Vec<_> = res.optimal_order.clone();
        labels.sort();
        let mut all: Vec<_> = inst.requests.iter().map(|r| r.label).collect();
        all.sort();
        prop_assert_eq!(labels, all);
        let replay = replay_order(&inst, &res.optimal_order).unwrap();
        prop_assert!((replay - res.opt_makespan).abs() <= 1e-9);
    }

    #[test]
    fn both_variants_from_one_table(inst in instance(9)) {
        let (open, closed) = opt_dp_both(&inst).unwrap();
        prop_assert_eq!(open, opt_dp(&inst.with_variant(Variant::Open)).unwrap());
        prop_assert_eq!(closed, opt_dp(&inst.with_variant(Variant::Closed)).unwrap());
    }

    #[test]
    fn lower_bound_and_certificate(inst in instance(9)) {
        let res = opt_dp(&inst).unwrap();
        prop_assert!(lower_bound(&inst) <= res.opt_makespan + 1e-9);
        if let Ok(cert) = opt_certified(&inst) {
            prop_assert!((cert.opt_makespan - res.opt_makespan).abs() <= 1e-9);
            prop_assert!(cert.ender_set.is_subset(&res.ender_set));
        }
    }

    #[test]
    fn more_requests_never_cost_less(inst in instance(8), pos in -3.0f64..3.0, rel in 0.0f64..5.0) {
        let mut reqs = inst.requests.clone();
        reqs.push(Request::new(100, pos, rel));
        let bigger = Instance::with_exact_predictions(inst.variant, reqs).unwrap();
        prop_assert!(opt(&bigger).unwrap().opt_makespan >= opt(&inst).unwrap().opt_makespan - 1e-9);
    }

    #[test]
    fn optimum_scales_with_the_instance(inst in instance(8), k in prop_oneof![Just(0.25), Just(0.5), Just(2.0), Just(8.0)]) {
        let a = opt(&inst).unwrap();
        let b = opt(&scaled(&inst, k)).unwrap();
        prop_assert!((b.opt_makespan - k * a.opt_makespan).abs() <= 1e-9 * k.max(1.0));
        prop_assert_eq!(a.ender_set, b.ender_set);
    }

    #[test]
    fn opt_never_below_last_release(inst in instance(9)) {
        let res = opt(&inst).unwrap();
        let last = inst.requests.iter().map(|r| r.rel).fold(0.0, f64::max);
        prop_assert!(res.opt_makespan >= last - 1e-9);
    }
}

#[test]
fn all_released_at_zero_is_a_sweep() {
    // open: nearer end first, then the far end; closed: both extremes out and back
    let reqs = vec![Request::new(1, -1.0, 0.0), Request::new(2, 3.0, 0.0), Request::new(3, 0.5, 0.0)];
    let inst = normalize_instance(Instance::with_exact_predictions(Variant::Open, reqs).unwrap()).unwrap();
    assert!((opt(&inst).unwrap().opt_makespan - 5.0).abs() < 1e-12);
    assert!((opt(&inst.with_variant(Variant::Closed)).unwrap().opt_makespan - 8.0).abs() < 1e-12);
}

#[test]
fn large_instances_fall_back_to_certification() {
    // 30 requests spread on both sides, all released at 0: the structured sweep is optimal
    let reqs = (1..=30).map(|i| Request::new(i, if i % 2 == 0 { i as f64 / 10.0 } else { -(i as f64) / 20.0 }, 0.0)).collect();
    let inst = normalize_instance(Instance::with_exact_predictions(Variant::Closed, reqs).unwrap()).unwrap();
    let res = opt(&inst).unwrap();
    assert!((res.opt_makespan - 2.0 * (3.0 + 1.45)).abs() < 1e-9);
}
