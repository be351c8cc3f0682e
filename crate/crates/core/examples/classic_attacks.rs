//! The two prediction-free attacks, run against the waiting baseline and
//! the prediction-based algorithms (which get all-zero predictions here).

use linetsp::adversaries::{rho, run_attack, ClassicClosedAttack, Family};
use linetsp::algorithms::AlgoKind;

fn main() {
    let (i, i_prime) = ClassicClosedAttack::intervals();
    println!("rho = {:.6}, I = [-{i:.4}, {i:.4}], I' = [-{i_prime:.4}, {i_prime:.4}]", rho());
    for algo in [AlgoKind::WaitCopy, AlgoKind::FarFirst, AlgoKind::NearFirst] {
        let open = run_attack(Family::ClassicOpen, 2, &algo).unwrap();
        let closed = run_attack(Family::ClassicClosed, 4, &algo).unwrap();
        println!(
            "{algo:>9}: open ratio {:.4} (opt {:.3}), closed ratio {:.4} (opt {:.3})",
            open.ratio, open.oracle.opt_makespan, closed.ratio, closed.oracle.opt_makespan
        );
        for r in &closed.transcript.requests {
            println!("             closed request {} at {:+.4}, released {:.4}", r.label, r.pos, r.rel);
        }
    }
}
