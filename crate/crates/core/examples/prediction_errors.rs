//! Synthesizes predictions from a mould at several error levels and
//! measures both error metrics.

use linetsp::experiment::{sweep_instance, GenParams};
use linetsp::predictions::{apply_mould, delta_error, eta_error, extremes_lemma_slack};
use linetsp::{opt, Variant};

fn main() {
    let params = GenParams { n_max: 10, seed: 3, ..GenParams::default() };
    let (base, mould) = sweep_instance(&params, 0).unwrap();
    let base = base.with_variant(Variant::Open);
    let oracle = opt(&base).unwrap();
    println!("{} requests, span {:.3}, enders {:?}", base.len(), base.extremes().span(), oracle.ender_set);
    println!("mould: {:?}", mould.scalars().iter().map(|m| (m * 100.0).round() / 100.0).collect::<Vec<_>>());

    for eta in [0.0, 0.1, 0.25, 0.5, 1.0] {
        let predictions = apply_mould(&base, &mould, eta).unwrap();
        let instance = base.with_predictions(predictions).unwrap();
        let report = eta_error(&instance).unwrap();
        println!(
            "target {eta:.2}: measured eta {:.4}, M {:.4}, extremes lemma slack {:.4}",
            report.eta,
            report.m,
            extremes_lemma_slack(&instance).unwrap()
        );
    }

    // final-label error of every possible guess
    for r in &base.requests {
        let guess = base.with_predictions(base.predictions.clone().with_final_label(Some(r.label))).unwrap();
        let report = delta_error(&guess, &oracle).unwrap();
        println!("  guess {}: delta {:.4}", r.label, report.delta.unwrap());
    }
}
