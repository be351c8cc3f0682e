//! A small error sweep: rows, the max-ratio curve, a percentile grid and the
//! (delta, eta) grid of PIVOT, written as CSV and SVG.
//!
//! ```text
//! cargo run --release --example error_sweep -- [count] [out_dir]
//! ```

use std::fs;
use std::path::PathBuf;

use linetsp::algorithms::AlgoKind;
use linetsp::experiment::{
    curve_csv, curves_svg, default_etas, error_grid, grid_svg, max_ratio_curve, percentile_grid, steps, sweep,
    write_rows, GenParams, SweepSpec,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map_or(50, |a| a.parse().expect("count"));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep_out".into()));
    fs::create_dir_all(&out).unwrap();

    let spec = SweepSpec { count, ..SweepSpec::default() };
    let rows = sweep(&GenParams::default(), &spec).unwrap();
    let violations = rows.iter().filter(|r| r.violates_bound(1e-6)).count();
    println!("{} rows from {count} instances, {violations} bound violations", rows.len());
    write_rows(&out.join("rows.csv"), &rows).unwrap();

    let mut series = Vec::new();
    for algo in [AlgoKind::FarFirst, AlgoKind::NearFirst, AlgoKind::Pivot] {
        let mine: Vec<_> = rows.iter().filter(|r| r.algorithm == algo).cloned().collect();
        let curve = max_ratio_curve(&mine);
        println!("{algo:>9}: max ratio {:.4}", curve.iter().map(|p| p.1).fold(0.0, f64::max));
        let grid = percentile_grid(&mine, &default_etas(), &steps(100.0, 10.0).unwrap()[1..]);
        fs::write(out.join(format!("{algo}_percentiles.svg")), grid_svg(&grid, &format!("{algo}"))).unwrap();
        if algo == AlgoKind::Pivot {
            let grid = error_grid(&mine, &steps(1.0, 0.1).unwrap(), &default_etas());
            fs::write(out.join("pivot_errors.svg"), grid_svg(&grid, "pivot by (delta, eta)")).unwrap();
        }
        series.push((algo.to_string(), curve));
    }
    fs::write(out.join("max_ratio.csv"), curve_csv(&series).unwrap()).unwrap();
    fs::write(out.join("max_ratio.svg"), curves_svg(&series, "max ratio up to eta")).unwrap();
    println!("wrote {}", out.display());
}
