//! Offline optimum: the subset DP, the brute force and the certified
//! fallback for instances too large for the DP.

use std::time::Instant;

use linetsp::experiment::{gen_instance, GenParams};
use linetsp::oracle::{lower_bound, opt_certified};
use linetsp::{normalize_instance, opt_bruteforce, opt_dp, opt_dp_both, Instance, Request, Variant};

fn main() {
    let params = GenParams { n_max: 8, seed: 42, ..GenParams::default() };
    let small = gen_instance(&params, &mut params.stream(0)).unwrap().with_variant(Variant::Open);
    let dp = opt_dp(&small).unwrap();
    let bf = opt_bruteforce(&small).unwrap();
    println!("{} requests, open variant", small.len());
    println!("  dp         {:.6}  order {:?}", dp.opt_makespan, dp.optimal_order);
    println!("  bruteforce {:.6}  enders {:?}", bf.opt_makespan, bf.ender_set);
    println!("  lower bound {:.6}", lower_bound(&small));

    let params = GenParams { n_max: 20, seed: 7, ..GenParams::default() };
    let mut id = 0;
    let big = loop {
        let inst = gen_instance(&params, &mut params.stream(id)).unwrap();
        if inst.len() >= 17 {
            break inst;
        }
        id += 1;
    };
    let start = Instant::now();
    let (open, closed) = opt_dp_both(&big).unwrap();
    println!(
        "{} requests: open {:.4}, closed {:.4} from one table in {:.0} ms",
        big.len(),
        open.opt_makespan,
        closed.opt_makespan,
        start.elapsed().as_secs_f64() * 1e3
    );

    // Beyond the DP limit: everything released at 0 is settled by a sweep
    // that meets the lower bound.
    let reqs: Vec<Request> = (1..=40).map(|i| Request::new(i, (i as f64 - 15.0) / 10.0, 0.0)).collect();
    let wide = normalize_instance(Instance::with_exact_predictions(Variant::Closed, reqs).unwrap()).unwrap();
    let cert = opt_certified(&wide).unwrap();
    println!("{} requests certified: opt {:.3} ({:?})", wide.len(), cert.opt_makespan, cert.method);
}
