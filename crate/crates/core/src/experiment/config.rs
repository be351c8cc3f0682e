use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentError, GenParams, SweepSpec};
use crate::algorithms::AlgoKind;

/// Sweep settings as read from a TOML file. Every key is optional.
///
/// ```toml
/// seed = 1
/// n_max = 20
/// c = 2.0
/// r_max = 6.0
/// count = 7500
/// eta_max = 1.0
/// eta_step = 0.05
/// algos = ["farfirst", "nearfirst", "pivot"]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_max: usize,
    pub c: f64,
    pub r_max: f64,
    pub count: usize,
    pub eta_max: f64,
    pub eta_step: f64,
    pub algos: Vec<AlgoKind>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let g = GenParams::default();
        let s = SweepSpec::default();
        ExperimentConfig {
            seed: g.seed,
            n_max: g.n_max,
            c: g.c,
            r_max: g.r_max,
            count: s.count,
            eta_max: 1.0,
            eta_step: 0.05,
            algos: s.algos,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::InvalidParams(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn params(&self) -> GenParams {
        GenParams { n_max: self.n_max, c: self.c, r_max: self.r_max, seed: self.seed }
    }

    pub fn etas(&self) -> Result<Vec<f64>, ExperimentError> {
        steps(self.eta_max, self.eta_step)
    }

    pub fn spec(&self) -> Result<SweepSpec, ExperimentError> {
        Ok(SweepSpec { count: self.count, etas: self.etas()?, algos: self.algos.clone(), check_runs: false })
    }
}

/// Bucket settings for `report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub eta_max: f64,
    pub eta_step: f64,
    pub delta_max: f64,
    pub delta_step: f64,
    pub pct_step: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { eta_max: 1.0, eta_step: 0.05, delta_max: 1.0, delta_step: 0.05, pct_step: 5.0 }
    }
}

impl ReportConfig {
    pub fn eta_buckets(&self) -> Result<Vec<f64>, ExperimentError> {
        steps(self.eta_max, self.eta_step)
    }

    pub fn delta_buckets(&self) -> Result<Vec<f64>, ExperimentError> {
        steps(self.delta_max, self.delta_step)
    }

    /// `pct_step, 2 pct_step, ..., 100`.
    pub fn pct_buckets(&self) -> Result<Vec<f64>, ExperimentError> {
        let mut v = steps(100.0, self.pct_step)?;
        v.remove(0);
        Ok(v)
    }
}

/// `0, step, 2 step, ..., max`, each point rounded to 12 decimals so that
/// `3 * 0.05` comes out as `0.15`.
pub fn steps(max: f64, step: f64) -> Result<Vec<f64>, ExperimentError> {
    if !step.is_finite() || step <= 0.0 || !max.is_finite() || max < 0.0 {
        return Err(ExperimentError::InvalidParams(format!("bad grid: max {max}, step {step}")));
    }
    let k = (max / step + 1e-9).floor() as usize;
    Ok((0..=k).map(|i| (i as f64 * step * 1e12).round() / 1e12).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_reference_setup() {
        let c = ExperimentConfig::default();
        assert_eq!((c.count, c.n_max, c.c, c.r_max), (7500, 20, 2.0, 6.0));
        let etas = c.etas().unwrap();
        assert_eq!(etas.len(), 21);
        assert_eq!(etas[20], 1.0);
        assert_eq!(etas[1], 0.05);
        assert_eq!(etas[3], 0.15);
        assert_eq!(etas[7], 0.35);
    }

    #[test]
    fn parse_partial_toml() {
        let c = ExperimentConfig::from_toml("seed = 4\ncount = 10\nalgos = [\"pivot\"]\n").unwrap();
        assert_eq!(c.seed, 4);
        assert_eq!(c.count, 10);
        assert_eq!(c.algos, vec![AlgoKind::Pivot]);
        assert_eq!(c.n_max, 20);
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn percent_buckets() {
        let p = ReportConfig::default().pct_buckets().unwrap();
        assert_eq!(p.len(), 20);
        assert_eq!(p[0], 5.0);
        assert_eq!(*p.last().unwrap(), 100.0);
    }
}
