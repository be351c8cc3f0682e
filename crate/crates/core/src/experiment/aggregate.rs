use serde::{Deserialize, Serialize};

use super::SweepRow;

/// Slack when comparing a measured error against a bucket edge, so that a
/// measured 0.05000000000000001 still lands in the 0.05 bucket.
const BUCKET_TOL: f64 = 1e-9;

/// `(error, value)` points.
pub type Curve = Vec<(f64, f64)>;

/// Values on a rectangular grid. `cells[j][i]` belongs to `(xs[i], ys[j])`;
/// `None` marks a cell with no rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_name: String,
    pub y_name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl Grid {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[j][i]
    }

    pub fn max(&self) -> Option<f64> {
        self.cells.iter().flatten().flatten().copied().reduce(f64::max)
    }
}

/// Cumulative maximum ratio over the distinct measured errors.
pub fn max_ratio_curve(rows: &[SweepRow]) -> Curve {
    let mut pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.eta, r.ratio)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut curve: Curve = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (eta, ratio) in pts {
        best = best.max(ratio);
        match curve.last_mut() {
            Some(last) if last.0 == eta => last.1 = best,
            _ => curve.push((eta, best)),
        }
    }
    curve
}

/// Maximum ratio among rows with error at most each bucket; empty buckets
/// are skipped.
pub fn ratio_curve_at(rows: &[SweepRow], buckets: &[f64]) -> Curve {
    let curve = max_ratio_curve(rows);
    buckets
        .iter()
        .filter_map(|&b| {
            let k = curve.partition_point(|p| p.0 <= b + BUCKET_TOL);
            (k > 0).then(|| (b, curve[k - 1].1))
        })
        .collect()
}

/// Index of the first bucket at or above `x`.
fn bucket_of(buckets: &[f64], x: f64) -> Option<usize> {
    let k = buckets.partition_point(|&b| b + BUCKET_TOL < x);
    (k < buckets.len()).then_some(k)
}

/// Cell `(eta bucket, pct)`: the largest ratio among the best `pct`% (by
/// ratio, rounded up to at least one row) of the rows with error at most the
/// bucket.
pub fn percentile_grid(rows: &[SweepRow], eta_buckets: &[f64], pct_buckets: &[f64]) -> Grid {
    let mut per_bucket: Vec<Vec<f64>> = vec![Vec::new(); eta_buckets.len()];
    for r in rows {
        if let Some(k) = bucket_of(eta_buckets, r.eta) {
            per_bucket[k].push(r.ratio);
        }
    }
    let mut cells = vec![vec![None; eta_buckets.len()]; pct_buckets.len()];
    let mut acc: Vec<f64> = Vec::new();
    for (i, bucket) in per_bucket.into_iter().enumerate() {
        acc.extend(bucket);
        acc.sort_by(f64::total_cmp);
        if acc.is_empty() {
            continue;
        }
        for (j, &pct) in pct_buckets.iter().enumerate() {
            let take = ((pct / 100.0 * acc.len() as f64) - 1e-9).ceil().max(1.0) as usize;
            cells[j][i] = Some(acc[take.min(acc.len()) - 1]);
        }
    }
    Grid {
        x_name: "eta".into(),
        y_name: "percent".into(),
        xs: eta_buckets.to_vec(),
        ys: pct_buckets.to_vec(),
        cells,
    }
}

/// Cell `(delta bucket, eta bucket)`: the largest ratio among rows with
/// `delta <= x` and `eta <= y`. Rows without a final-label error are skipped.
pub fn error_grid(rows: &[SweepRow], delta_buckets: &[f64], eta_buckets: &[f64]) -> Grid {
    let (nx, ny) = (delta_buckets.len(), eta_buckets.len());
    let mut cells: Vec<Vec<Option<f64>>> = vec![vec![None; nx]; ny];
    for r in rows {
        let Some(delta) = r.delta else { continue };
        if let (Some(i), Some(j)) = (bucket_of(delta_buckets, delta), bucket_of(eta_buckets, r.eta)) {
            let c = &mut cells[j][i];
            *c = Some(c.map_or(r.ratio, |v| v.max(r.ratio)));
        }
    }
    // prefix maxima along both axes
    for j in 0..ny {
        for i in 0..nx {
            let mut v = cells[j][i];
            for prev in [(i > 0).then(|| cells[j][i - 1]), (j > 0).then(|| cells[j - 1][i])].into_iter().flatten() {
                v = match (v, prev) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
            }
            cells[j][i] = v;
        }
    }
    Grid {
        x_name: "delta".into(),
        y_name: "eta".into(),
        xs: delta_buckets.to_vec(),
        ys: eta_buckets.to_vec(),
        cells,
    }
}
