//! Minimal deterministic SVG rendering for report series and P1 fields.

use crate::error::{invalid, Result};
use crate::geometry::vec2::Point;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// A named curve `y(x)` with an optional horizontal reference line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<[f64; 2]>,
    pub reference: Option<f64>,
    pub log_log: bool,
}

/// Nodal values on a triangulation, rendered as flat-shaded triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub name: String,
    pub vertices: Vec<Point>,
    pub cells: Vec<Vec<usize>>,
    pub values: Vec<f64>,
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Line plot of a series; log–log axes drop non-positive points.
pub fn line_plot(series: &Series) -> Result<String> {
    let tx = |v: f64| if series.log_log { v.log10() } else { v };
    let pts: Vec<[f64; 2]> = series
        .points
        .iter()
        .filter(|p| !series.log_log || (p[0] > 0.0 && p[1] > 0.0))
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .map(|p| [tx(p[0]), tx(p[1])])
        .collect();
    if pts.is_empty() {
        return Err(invalid(format!("series '{}' has no plottable points", series.name)));
    }
    let mut xr = pts.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |r, p| [r[0].min(p[0]), r[1].max(p[0])]);
    let mut yr = pts.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |r, p| [r[0].min(p[1]), r[1].max(p[1])]);
    if let Some(r) = series.reference.filter(|_| !series.log_log) {
        yr = [yr[0].min(r), yr[1].max(r)];
    }
    for r in [&mut xr, &mut yr] {
        if r[1] - r[0] < 1e-12 {
            r[0] -= 0.5;
            r[1] += 0.5;
        }
        let pad = 0.05 * (r[1] - r[0]);
        r[0] -= pad;
        r[1] += pad;
    }
    let sx = |x: f64| MARGIN + (x - xr[0]) / (xr[1] - xr[0]) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - yr[0]) / (yr[1] - yr[0]) * (HEIGHT - 2.0 * MARGIN);
    let mut s = header(&series.name);
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    );
    for k in 0..=4 {
        let fx = xr[0] + (xr[1] - xr[0]) * k as f64 / 4.0;
        let fy = yr[0] + (yr[1] - yr[0]) * k as f64 / 4.0;
        let lab = |v: f64| if series.log_log { format!("1e{v:.1}") } else { format!("{v:.4}") };
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#, fmt(sx(fx)), fmt(HEIGHT - MARGIN + 16.0), lab(fx));
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, fmt(MARGIN - 4.0), fmt(sy(fy) + 4.0), lab(fy));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#, fmt(WIDTH / 2.0), fmt(HEIGHT - 12.0), escape(&series.x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        fmt(HEIGHT / 2.0),
        fmt(HEIGHT / 2.0),
        escape(&series.y_label)
    );
    if let Some(r) = series.reference.filter(|_| !series.log_log) {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="gray" stroke-dasharray="6 4"/>"#,
            fmt(MARGIN),
            fmt(WIDTH - MARGIN),
            y = fmt(sy(r))
        );
    }
    let path: Vec<String> = pts.iter().map(|p| format!("{},{}", fmt(sx(p[0])), fmt(sy(p[1])))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
    for p in &pts {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="3" fill="steelblue"/>"#, fmt(sx(p[0])), fmt(sy(p[1])));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Flat-shaded triangle plot with a blue–white–red colour scale.
pub fn heatmap(map: &Heatmap) -> Result<String> {
    if map.values.is_empty() || map.cells.is_empty() {
        return Err(invalid(format!("heatmap '{}' is empty", map.name)));
    }
    let lo = map.vertices.iter().fold([f64::INFINITY; 2], |m, v| [m[0].min(v[0]), m[1].min(v[1])]);
    let hi = map.vertices.iter().fold([f64::NEG_INFINITY; 2], |m, v| [m[0].max(v[0]), m[1].max(v[1])]);
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let scale = (HEIGHT - 2.0 * MARGIN).min(WIDTH - 2.0 * MARGIN) / span;
    let vmax = map.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut s = header(&map.name);
    for cell in &map.cells {
        let mean = cell.iter().map(|&i| map.values[i]).sum::<f64>() / cell.len() as f64;
        let pts: Vec<String> = cell
            .iter()
            .map(|&i| {
                let v = map.vertices[i];
                format!("{},{}", fmt(MARGIN + (v[0] - lo[0]) * scale), fmt(HEIGHT - MARGIN - (v[1] - lo[1]) * scale))
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="{}"/>"#, pts.join(" "), colour(mean / vmax));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn colour(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<title>{}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
