//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use linetsp::{normalize_instance, Instance, Label, Request, Variant};
use rand::Rng;

/// Optimum by plain enumeration of serve orders, without any reduction of
/// co-located or origin requests. Returns the optimum and the labels that
/// are last in some optimal order.
pub fn naive_opt(instance: &Instance) -> (f64, BTreeSet<Label>) {
    let reqs = &instance.requests;
    let mut idx: Vec<usize> = (0..reqs.len()).collect();
    let mut best = f64::INFINITY;
    let mut enders = BTreeSet::new();
    permute(&mut idx, 0, &mut |order| {
        let (mut t, mut x) = (0.0f64, 0.0f64);
        for &i in order {
            t = (t + (reqs[i].pos - x).abs()).max(reqs[i].rel);
            x = reqs[i].pos;
        }
        let total = match instance.variant {
            Variant::Open => t,
            Variant::Closed => t + x.abs(),
        };
        if total < best - 1e-9 {
            best = total;
            enders.clear();
        }
        if total <= best + 1e-9 {
            best = best.min(total);
            if let Some(&last) = order.last() {
                enders.insert(reqs[last].label);
            }
        }
    });
    if reqs.is_empty() {
        best = 0.0;
    }
    (best, enders)
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Random instance on a coarse lattice so that co-located requests, requests
/// at the origin and tied releases show up often. `extra` requests besides
/// the origin.
pub fn lattice_instance<R: Rng>(rng: &mut R, extra: usize, variant: Variant) -> Instance {
    let reqs: Vec<Request> = (1..=extra as u32)
        .map(|l| {
            let pos = rng.gen_range(-4i32..=4) as f64 * 0.5;
            let rel = rng.gen_range(0i32..=8) as f64 * 0.5;
            Request::new(l, pos, rel)
        })
        .collect();
    normalize_instance(Instance::with_exact_predictions(variant, reqs).unwrap()).unwrap()
}

/// Random instance with continuous positions and releases.
pub fn continuous_instance<R: Rng>(rng: &mut R, extra: usize, variant: Variant) -> Instance {
    let reqs: Vec<Request> = (1..=extra as u32)
        .map(|l| Request::new(l, rng.gen_range(-3.0..3.0), rng.gen_range(0.0..5.0)))
        .collect();
    normalize_instance(Instance::with_exact_predictions(variant, reqs).unwrap()).unwrap()
}
