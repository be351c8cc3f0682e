use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use linetsp::adversaries::{run_attack, Family};
use linetsp::algorithms::AlgoKind;
use linetsp::engine::run_instance;
use linetsp::experiment::{
    curve_csv, curves_svg, error_grid, gen_instance, grid_csv, grid_svg, percentile_grid, ratio_curve_at,
    read_rows, sweep, write_rows, ExperimentConfig, GenParams, ReportConfig, SweepRow,
};
use linetsp::oracle::{opt, opt_bruteforce, opt_dp};
use linetsp::{Instance, Label, Variant};

#[derive(Parser)]
#[command(name = "linetsp", version, about = "Online TSP on the line with predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance as JSON.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance index within the seed's streams.
        #[arg(long, default_value_t = 0)]
        id: usize,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 6.0)]
        r_max: f64,
        #[arg(long, default_value = "closed")]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate an algorithm on an instance file.
    Run {
        #[arg(long)]
        algo: AlgoKind,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        variant: Option<Variant>,
        /// Predicted final label for pivot, overriding the file.
        #[arg(long)]
        final_label: Option<u32>,
    },
    /// Compute the offline optimum of an instance file.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        variant: Option<Variant>,
        /// auto, dp or bruteforce.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Run an algorithm against an adaptive attack.
    Attack {
        /// fc, fo, flf, classic-closed or classic-open.
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long)]
        algo: AlgoKind,
        /// Leave the trajectory out of the output.
        #[arg(long)]
        brief: bool,
    },
    /// Run an error sweep and write its rows as CSV.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        algos: Option<Vec<AlgoKind>>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Turn sweep rows into curves and grids (CSV and SVG).
    Report {
        #[arg(long)]
        rows: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn read_instance(path: &Path, variant: Option<Variant>) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let instance: Instance = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(match variant {
        Some(v) => instance.with_variant(v),
        None => instance,
    })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { seed, id, n_max, c, r_max, variant, out } => {
            let params = GenParams { n_max, c, r_max, seed };
            let instance = gen_instance(&params, &mut params.stream(id))?.with_variant(variant);
            let text = serde_json::to_string_pretty(&instance)?;
            match out {
                Some(path) => {
                    fs::write(&path, text)?;
                    println!("{}", path.display());
                }
                None => println!("{text}"),
            }
        }
        Command::Run { algo, instance, variant, final_label } => {
            let mut instance = read_instance(&instance, variant)?;
            if let Some(f) = final_label {
                let p = instance.predictions.clone().with_final_label(Some(Label(f)));
                instance = instance.with_predictions(p)?;
            }
            print_json(&run_instance(&instance, &algo)?)?;
        }
        Command::Oracle { instance, variant, method } => {
            let instance = read_instance(&instance, variant)?;
            let result = match method.as_str() {
                "auto" => opt(&instance)?,
                "dp" => opt_dp(&instance)?,
                "bruteforce" => opt_bruteforce(&instance)?,
                other => bail!("unknown method {other:?} (expected auto, dp or bruteforce)"),
            };
            print_json(&result)?;
        }
        Command::Attack { family, n, algo, brief } => {
            let out = run_attack(family, n, &algo)?;
            let mut value = serde_json::to_value(&out)?;
            if brief {
                if let Some(run) = value.get_mut("run").and_then(|r| r.as_object_mut()) {
                    run.remove("trajectory");
                }
            }
            print_json(&value)?;
        }
        Command::Sweep { config, seed, count, n_max, c, r_max, algos, out } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => ExperimentConfig::default(),
            };
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.count = count.unwrap_or(cfg.count);
            cfg.n_max = n_max.unwrap_or(cfg.n_max);
            cfg.c = c.unwrap_or(cfg.c);
            cfg.r_max = r_max.unwrap_or(cfg.r_max);
            if let Some(a) = algos {
                cfg.algos = a;
            }
            let rows = sweep(&cfg.params(), &cfg.spec()?)?;
            fs::create_dir_all(&out)?;
            let path = out.join("rows.csv");
            write_rows(&path, &rows)?;
            let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let violations = rows.iter().filter(|r| r.violates_bound(1e-6)).count();
            eprintln!("{} rows, max ratio {worst:.4}, {violations} bound violations", rows.len());
            println!("{}", path.display());
        }
        Command::Report { rows, config, out } => {
            let cfg = match config {
                Some(path) => toml::from_str(&fs::read_to_string(path)?)?,
                None => ReportConfig::default(),
            };
            let rows = read_rows(&rows)?;
            fs::create_dir_all(&out)?;
            for path in report(&rows, &cfg, &out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn report(rows: &[SweepRow], cfg: &ReportConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let etas = cfg.eta_buckets()?;
    let mut written = Vec::new();
    let mut write = |name: String, text: String| -> Result<()> {
        let path = out.join(name);
        fs::write(&path, text)?;
        written.push(path);
        Ok(())
    };
    let mut series = Vec::new();
    for algo in AlgoKind::ALL {
        let mine: Vec<SweepRow> = rows.iter().filter(|r| r.algorithm == algo).cloned().collect();
        if mine.is_empty() {
            continue;
        }
        series.push((algo.to_string(), ratio_curve_at(&mine, &etas)));
        let grid = percentile_grid(&mine, &etas, &cfg.pct_buckets()?);
        write(format!("{algo}_percentiles.csv"), grid_csv(&grid)?)?;
        write(format!("{algo}_percentiles.svg"), grid_svg(&grid, &format!("{algo}: max ratio of the best x% of rows")))?;
        if algo == AlgoKind::Pivot {
            let grid = error_grid(&mine, &cfg.delta_buckets()?, &etas);
            write(format!("{algo}_errors.csv"), grid_csv(&grid)?)?;
            write(format!("{algo}_errors.svg"), grid_svg(&grid, &format!("{algo}: max ratio by (delta, eta)")))?;
        }
    }
    if series.is_empty() {
        bail!("no rows to report");
    }
    write("max_ratio.csv".into(), curve_csv(&series)?)?;
    write("max_ratio.svg".into(), curves_svg(&series, "max ratio over rows with error up to eta"))?;
    Ok(written)
}
