//! The final-label attack against PIVOT: perfect locations and a correct
//! final-request guess, yet no algorithm gets below `(5 - 2 alpha) / 4`.

use linetsp::adversaries::{run_attack, Family};
use linetsp::algorithms::AlgoKind;

fn main() {
    let rank: usize = std::env::args().nth(1).map_or(201, |a| a.parse().expect("rank"));
    let out = run_attack(Family::Flf, rank, &AlgoKind::Pivot).unwrap();
    let f = out.transcript.predictions.final_label().unwrap();
    println!("predicted final request {f}, optimal enders include it: {}", out.oracle.ender_set.contains(&f));
    println!("eta {}, delta {:?}", out.eta, out.delta);
    println!("opt {:.6}, pivot {:.6}", out.oracle.opt_makespan, out.run.result.makespan);
    println!("ratio {:.6} in [{:.6}, {:.6}]", out.ratio, out.lower_bound, 4.0 / 3.0);
}
