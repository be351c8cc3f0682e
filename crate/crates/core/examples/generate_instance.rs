//! Generates a random sweep instance, shows its normalization and writes it
//! as JSON.
//!
//! ```text
//! cargo run --example generate_instance -- [seed] [id]
//! ```

use linetsp::experiment::{gen_instance, GenParams};
use linetsp::{normalize_instance, Instance, Request, Variant};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("numeric argument"));
    let seed = args.next().unwrap_or(0);
    let id = args.next().unwrap_or(0) as usize;

    // A hand-written instance without an origin request gets one added.
    let raw = Instance::with_exact_predictions(
        Variant::Open,
        vec![Request::new(1, -1.0, 0.0), Request::new(2, 2.0, 3.0)],
    )
    .unwrap();
    let normalized = normalize_instance(raw).unwrap();
    let e = normalized.extremes();
    println!("normalized: {} requests, L = {}, R = {}, far = {}", normalized.len(), e.left, e.right, e.far);

    // Generator instances: -1 and c' are always present, the rest uniform.
    let params = GenParams { seed, ..GenParams::default() };
    let instance = gen_instance(&params, &mut params.stream(id)).unwrap();
    println!("generated instance {id} of seed {seed}:");
    for r in &instance.requests {
        println!("  {}  pos {:+.4}  rel {:.4}", r.label, r.pos, r.rel);
    }
    println!("{}", serde_json::to_string_pretty(&instance).unwrap());
}
