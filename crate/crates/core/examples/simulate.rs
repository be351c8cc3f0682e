//! Runs every algorithm on a small fixed instance and prints the
//! trajectory, serve times and competitive ratio.

use linetsp::algorithms::AlgoKind;
use linetsp::engine::{competitive_ratio, run_instance};
use linetsp::{normalize_instance, opt, Instance, Label, Request, Variant};

fn main() {
    let requests = vec![
        Request::new(1, 2.0, 3.0),
        Request::new(2, -1.0, 0.5),
        Request::new(3, 1.0, 4.0),
        Request::new(4, -0.5, 2.0),
    ];
    let base = normalize_instance(Instance::with_exact_predictions(Variant::Closed, requests).unwrap()).unwrap();

    for algo in AlgoKind::ALL {
        let variant = algo.native_variant().unwrap_or(Variant::Closed);
        let mut instance = base.with_variant(variant);
        if algo == AlgoKind::Pivot {
            // pivot also needs a guess of the request an optimal schedule ends on
            let p = instance.predictions.clone().with_final_label(Some(Label(1)));
            instance = instance.with_predictions(p).unwrap();
        }
        let run = run_instance(&instance, &algo).unwrap();
        let best = opt(&instance).unwrap();
        println!(
            "{algo} ({variant:?}): makespan {:.3}, opt {:.3}, ratio {:.4}, {} updates",
            run.result.makespan,
            best.opt_makespan,
            competitive_ratio(&run.result, &best),
            run.updates
        );
        for s in run.result.trajectory.segments() {
            println!("    t {:6.3} .. {:6.3}   x {:+.3} -> {:+.3}", s.t0, s.t1, s.x0, s.end_pos());
        }
        let serves: Vec<String> = run.result.serve_time.iter().map(|(l, t)| format!("{l}@{t:.3}")).collect();
        println!("    served: {}", serves.join(" "));
    }
}
