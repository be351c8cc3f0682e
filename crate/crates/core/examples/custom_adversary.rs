//! Writing an adaptive event source: a request appears at time 1 on the
//! side the agent is moving away from.

use linetsp::algorithms::AlgoKind;
use linetsp::engine::{simulate, EventSource, ReleaseEvent};
use linetsp::trajectory::Segment;
use linetsp::{opt, Label, PredictionSet, Request, Variant};

#[derive(Default)]
struct Contrarian {
    step: u32,
}

impl EventSource for Contrarian {
    fn request_count(&self) -> usize {
        3
    }

    fn query(&mut self, seg: &Segment) -> Option<ReleaseEvent> {
        match self.step {
            0 => {
                self.step = 1;
                Some(ReleaseEvent { time: 0.0, requests: vec![Request::new(0, 0.0, 0.0), Request::new(1, 0.5, 0.0)] })
            }
            1 if seg.t1 >= 1.0 => {
                self.step = 2;
                let x = if seg.pos_at(1.0) > 0.0 { -1.0 } else { 1.0 };
                Some(ReleaseEvent { time: 1.0, requests: vec![Request::new(2, x, 1.0)] })
            }
            _ => None,
        }
    }
}

fn main() {
    // the algorithm is told request 2 will be at +1
    let predictions = PredictionSet::new([(Label(0), 0.0), (Label(1), 0.5), (Label(2), 1.0)].into_iter().collect());
    for algo in [AlgoKind::FarFirst, AlgoKind::WaitCopy] {
        let run = simulate(&mut Contrarian::default(), &algo, &predictions, Variant::Closed).unwrap();
        let transcript = run.transcript_instance(Variant::Closed, &predictions).unwrap();
        let best = opt(&transcript).unwrap();
        println!(
            "{algo:>9}: request 2 went to {:+}, makespan {:.3}, opt {:.3}",
            transcript.request(Label(2)).unwrap().pos,
            run.result.makespan,
            best.opt_makespan
        );
    }
}
