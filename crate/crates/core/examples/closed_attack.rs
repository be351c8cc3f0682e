//! The closed-variant attack on location predictions against FARFIRST.
//!
//! ```text
//! cargo run --example closed_attack -- [rank]
//! ```

use linetsp::adversaries::{run_attack, Family};
use linetsp::algorithms::AlgoKind;

fn main() {
    let rank: usize = std::env::args().nth(1).map_or(201, |a| a.parse().expect("rank"));
    let out = run_attack(Family::Fc, rank, &AlgoKind::FarFirst).unwrap();
    let state = out.attack_state.as_ref().unwrap();
    println!("rank {rank}, alpha {:.4}", state.alpha);
    println!(
        "commit at t = {:.4} on the {:?} side (agent at {:+.4})",
        state.t_commit.unwrap(),
        state.committed_side.unwrap(),
        state.pos_commit.unwrap()
    );
    println!("opt {:.6}, farfirst {:.6}", out.oracle.opt_makespan, out.run.result.makespan);
    println!("ratio {:.6} (lower bound {:.6}, upper bound 1.5)", out.ratio, out.lower_bound);
}
