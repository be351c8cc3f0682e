use std::fmt::Write as _;
use std::path::Path;

use super::{Curve, ExperimentError, Grid, SweepRow};

/// Fixed color scale: ratio 1 maps to the lightest color, 3 to the darkest.
const SCALE: (f64, f64) = (1.0, 3.0);
const STOPS: [(f64, [u8; 3]); 3] = [(0.0, [255, 255, 204]), (0.5, [253, 141, 60]), (1.0, [128, 0, 38])];

/// Hex color for a ratio, clamped to the scale.
pub fn color_for(ratio: f64) -> String {
    let t = ((ratio - SCALE.0) / (SCALE.1 - SCALE.0)).clamp(0.0, 1.0);
    let k = if t <= STOPS[1].0 { 0 } else { 1 };
    let (t0, c0) = STOPS[k];
    let (t1, c1) = STOPS[k + 1];
    let u = (t - t0) / (t1 - t0);
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2]))
}

pub fn write_rows(path: &Path, rows: &[SweepRow]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// `series,error,value` with one line per curve point.
pub fn curve_csv(series: &[(String, Curve)]) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "error", "value"])?;
    for (name, curve) in series {
        for &(x, y) in curve {
            w.serialize((name, x, y))?;
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

/// `x,y,value` with one line per cell; empty cells have an empty value.
pub fn grid_csv(grid: &Grid) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([grid.x_name.as_str(), grid.y_name.as_str(), "value"])?;
    for (j, &y) in grid.ys.iter().enumerate() {
        for (i, &x) in grid.xs.iter().enumerate() {
            w.serialize((x, y, grid.cells[j][i]))?;
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

/// Inverse of [`grid_csv`].
pub fn parse_grid_csv(text: &str) -> Result<Grid, ExperimentError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    let mut points: Vec<(f64, f64, Option<f64>)> = Vec::new();
    for rec in r.deserialize() {
        points.push(rec?);
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for &(x, y, _) in &points {
        if !xs.contains(&x) {
            xs.push(x);
        }
        if !ys.contains(&y) {
            ys.push(y);
        }
    }
    let mut cells = vec![vec![None; xs.len()]; ys.len()];
    for (x, y, v) in points {
        let i = xs.iter().position(|&a| a == x).unwrap();
        let j = ys.iter().position(|&b| b == y).unwrap();
        cells[j][i] = v;
    }
    Ok(Grid { x_name: headers[0].to_string(), y_name: headers[1].to_string(), xs, ys, cells })
}

fn label(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Heatmap with one square per cell, on the fixed color scale.
pub fn grid_svg(grid: &Grid, title: &str) -> String {
    const CELL: f64 = 24.0;
    const LEFT: f64 = 60.0;
    const TOP: f64 = 40.0;
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    let width = LEFT + CELL * nx as f64 + 110.0;
    let height = TOP + CELL * ny as f64 + 50.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r#"<text x="{LEFT}" y="20" font-size="13">{}</text>"#, escape(title));
    // y grows upward like a plot
    for j in 0..ny {
        let y = TOP + CELL * (ny - 1 - j) as f64;
        for i in 0..nx {
            let x = LEFT + CELL * i as f64;
            let (fill, tip) = match grid.cells[j][i] {
                Some(v) => (color_for(v), format!("{v:.4}")),
                None => ("#dddddd".to_string(), "no data".to_string()),
            };
            let _ = writeln!(
                s,
                r#"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}"><title>{}={}, {}={}: {tip}</title></rect>"#,
                grid.x_name,
                label(grid.xs[i]),
                grid.y_name,
                label(grid.ys[j])
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            LEFT - 4.0,
            y + CELL * 0.65,
            label(grid.ys[j])
        );
    }
    let bottom = TOP + CELL * ny as f64;
    let step = nx.div_ceil(10).max(1);
    for i in (0..nx).step_by(step) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + CELL * (i as f64 + 0.5),
            bottom + 14.0,
            label(grid.xs[i])
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + CELL * nx as f64 / 2.0,
        bottom + 32.0,
        escape(&grid.x_name)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{}</text>"#,
        TOP + CELL * ny as f64 / 2.0,
        TOP + CELL * ny as f64 / 2.0,
        escape(&grid.y_name)
    );
    legend(&mut s, LEFT + CELL * nx as f64 + 30.0, TOP, CELL * ny as f64);
    s.push_str("</svg>\n");
    s
}

fn legend(s: &mut String, x: f64, y: f64, h: f64) {
    let _ = writeln!(s, r#"<defs><linearGradient id="scale" x1="0" y1="1" x2="0" y2="0">"#);
    for (t, _) in STOPS {
        let _ = writeln!(
            s,
            r#"<stop offset="{t}" stop-color="{}"/>"#,
            color_for(SCALE.0 + t * (SCALE.1 - SCALE.0))
        );
    }
    let _ = writeln!(s, "</linearGradient></defs>");
    let _ = writeln!(s, r#"<rect class="legend" x="{x}" y="{y}" width="14" height="{h}" fill="url(#scale)"/>"#);
    for v in [1.0, 1.5, 2.0, 2.5, 3.0] {
        let ty = y + h * (1.0 - (v - SCALE.0) / (SCALE.1 - SCALE.0));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, x + 18.0, ty + 3.0, label(v));
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart of step curves on the ratio range `[1, 3]`.
pub fn curves_svg(series: &[(String, Curve)], title: &str) -> String {
    const W: f64 = 480.0;
    const H: f64 = 300.0;
    const LEFT: f64 = 50.0;
    const TOP: f64 = 40.0;
    let x_max = series
        .iter()
        .flat_map(|(_, c)| c.iter().map(|p| p.0))
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let px = |x: f64| LEFT + W * x / x_max;
    let py = |y: f64| TOP + H * (1.0 - (y.clamp(SCALE.0, SCALE.1) - SCALE.0) / (SCALE.1 - SCALE.0));
    let palette = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a"];
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="10">"#,
        LEFT + W + 130.0,
        TOP + H + 50.0
    );
    let _ = writeln!(s, r#"<text x="{LEFT}" y="20" font-size="13">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{W}" height="{H}" fill="none" stroke="#888"/>"##
    );
    for v in [1.0, 1.5, 2.0, 2.5, 3.0] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 4.0, py(v) + 3.0, label(v));
    }
    for k in 0..=4 {
        let x = x_max * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, px(x), TOP + H + 14.0, label(x));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">error</text>"#, LEFT + W / 2.0, TOP + H + 32.0);
    for (k, (name, curve)) in series.iter().enumerate() {
        let color = palette[k % palette.len()];
        let mut pts = String::new();
        let mut prev: Option<f64> = None;
        for &(x, y) in curve {
            if let Some(p) = prev {
                let _ = write!(pts, "{:.2},{:.2} ", px(x), py(p));
            }
            let _ = write!(pts, "{:.2},{:.2} ", px(x), py(y));
            prev = Some(y);
        }
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.trim_end()
        );
        let ly = TOP + 14.0 * k as f64 + 6.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            LEFT + W + 10.0,
            LEFT + W + 26.0,
            LEFT + W + 30.0,
            ly + 3.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid {
            x_name: "delta".into(),
            y_name: "eta".into(),
            xs: vec![0.0, 0.05, 0.1],
            ys: vec![0.0, 0.5],
            cells: vec![vec![Some(1.0), Some(1.25), None], vec![Some(1.1), Some(2.999999999), Some(3.5)]],
        }
    }

    #[test]
    fn grid_csv_round_trip() {
        let g = grid();
        assert_eq!(parse_grid_csv(&grid_csv(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn one_cell_one_rect() {
        let g = Grid { x_name: "x".into(), y_name: "y".into(), xs: vec![0.0], ys: vec![0.0], cells: vec![vec![Some(1.5)]] };
        assert_eq!(grid_svg(&g, "t").matches(r#"class="cell""#).count(), 1);
    }

    #[test]
    fn color_scale_is_clamped() {
        assert_eq!(color_for(3.0), "#800026");
        assert_eq!(color_for(7.0), color_for(3.0));
        assert_eq!(color_for(1.0), "#ffffcc");
        assert_eq!(color_for(0.2), color_for(1.0));
        assert_eq!(color_for(2.0), "#fd8d3c");
    }

    #[test]
    fn curve_csv_has_header_and_points() {
        let text = curve_csv(&[("farfirst".into(), vec![(0.0, 1.5), (0.05, 1.6)])]).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("series,error,value"));
        let svg = curves_svg(&[("farfirst".into(), vec![(0.0, 1.5), (0.05, 1.6)])], "max ratio");
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
