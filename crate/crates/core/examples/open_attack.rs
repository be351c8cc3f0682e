//! The open-variant attack on location predictions against NEARFIRST, and
//! what the same transcript would have cost with a different algorithm.

use linetsp::adversaries::{run_attack, Family};
use linetsp::algorithms::AlgoKind;

fn main() {
    let rank: usize = std::env::args().nth(1).map_or(201, |a| a.parse().expect("rank"));
    for algo in [AlgoKind::NearFirst, AlgoKind::FarFirst, AlgoKind::WaitCopy] {
        let out = run_attack(Family::Fo, rank, &algo).unwrap();
        let state = out.attack_state.unwrap();
        println!(
            "{algo:>9}: commit {:?} at {:.4}, opt {:.4}, makespan {:.4}, ratio {:.4} (>= {:.4})",
            state.committed_side.unwrap(),
            state.t_commit.unwrap(),
            out.oracle.opt_makespan,
            out.run.result.makespan,
            out.ratio,
            out.lower_bound
        );
    }
}
