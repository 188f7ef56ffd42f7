//! Batch outputs: CSV summaries, per-trial JSON and SVG drawings.
//!
//! `summary.csv` and `curves.csv` hold one block of rows per method. Writing a
//! batch replaces that method's rows and keeps the others, so several methods
//! can share an output directory and be plotted together.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BatchSummary, Method, Region, TrialResult};
use crate::error::PlanError;
use crate::geometry::{dist, Point};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub mean_rel_a: f64,
    pub sd_rel_a: f64,
    pub mean_lec: f64,
    pub sd_lec: f64,
    pub failed_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub method: Method,
    pub additions: usize,
    pub mean: f64,
    pub sd: f64,
    pub trials: usize,
}

impl From<&BatchSummary> for SummaryRow {
    fn from(s: &BatchSummary) -> Self {
        SummaryRow {
            method: s.method,
            mean_rel_a: s.mean_rel_a,
            sd_rel_a: s.sd_rel_a,
            mean_lec: s.mean_lec,
            sd_lec: s.sd_lec,
            failed_trials: s.failed_trials,
        }
    }
}

fn csv_err(e: csv::Error) -> PlanError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => PlanError::Io(io),
        other => PlanError::Config(format!("malformed csv: {other:?}")),
    }
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, PlanError> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    reader.deserialize().map(|r| r.map_err(csv_err)).collect()
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), PlanError> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

fn merge<T: Serialize + for<'de> Deserialize<'de>>(
    path: &Path,
    fresh: Vec<T>,
    method: Method,
    method_of: impl Fn(&T) -> Method,
) -> Result<(), PlanError> {
    let mut rows: Vec<T> = if path.exists() { read_rows(path)? } else { Vec::new() };
    rows.retain(|r| method_of(r) != method);
    rows.extend(fresh);
    rows.sort_by_key(|r| method_of(r) as u8);
    write_rows(path, &rows)
}

/// Writes `summary.csv`, `curves.csv`, and `trial_<i>.json` plus
/// `formation_<i>.svg` for every trial into `dir`.
pub fn write_batch(dir: &Path, summary: &BatchSummary, region: &Region) -> Result<(), PlanError> {
    fs::create_dir_all(dir)?;
    merge(&dir.join("summary.csv"), vec![SummaryRow::from(summary)], summary.method, |r| r.method)?;
    let curves = summary
        .curves
        .iter()
        .map(|c| CurveRow { method: summary.method, additions: c.additions, mean: c.mean, sd: c.sd, trials: c.trials })
        .collect();
    merge(&dir.join("curves.csv"), curves, summary.method, |r| r.method)?;
    for t in &summary.trials {
        fs::write(dir.join(format!("trial_{}.json", t.trial)), serde_json::to_string_pretty(t)?)?;
        fs::write(dir.join(format!("formation_{}.svg", t.trial)), formation_svg(t, region))?;
    }
    Ok(())
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Vertices, unit-distance edges, region boundary and the largest empty
/// circle. Seed vertices are drawn hollow.
pub fn formation_svg(trial: &TrialResult, region: &Region) -> String {
    let pts = &trial.final_points;
    let (mut lo, mut hi) = region.bounds();
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let scale = (SIZE - 2.0 * MARGIN) / (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let map = |p: Point| (MARGIN + (p.x - lo.x) * scale, SIZE - MARGIN - (p.y - lo.y) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    match region {
        Region::Disk { center, radius } => {
            let (cx, cy) = map(*center);
            let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#, radius * scale);
        }
        Region::ConvexPolygon { vertices } => {
            let coords: Vec<String> = vertices.iter().map(|&v| map(v)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#, coords.join(" "));
        }
    }
    let (cx, cy) = map(trial.lec_center);
    let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="tomato"/>"#, trial.lec_radius * scale);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if dist(pts[i], pts[j]) < 1.0 {
                let ((x1, y1), (x2, y2)) = (map(pts[i]), map(pts[j]));
                let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="steelblue"/>"#);
            }
        }
    }
    let seeds = pts.len() - trial.additions.len();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = map(p);
        let fill = if i < seeds { "white" } else { "black" };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{fill}" stroke="black"/>"#);
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="16" font-family="sans-serif" font-size="12">{} trial {}: reliability {:.4}, empty circle {:.3}</text>"#,
        trial.method, trial.trial, trial.rel_a.p_hat, trial.lec_radius
    );
    s.push_str("</svg>\n");
    s
}

fn color(m: Method) -> &'static str {
    match m {
        Method::M1 => "#1f77b4",
        Method::M2 => "#ff7f0e",
        Method::M3 => "#2ca02c",
        Method::M4 => "#d62728",
    }
}

/// Mean reliability against number of additions, one line per method with
/// a one-standard-deviation band.
pub fn curves_svg(rows: &[CurveRow]) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (56.0, 90.0, 20.0, 44.0);
    let max_x = rows.iter().map(|r| r.additions).max().unwrap_or(1).max(1) as f64;
    let min_y = rows.iter().map(|r| (r.mean - r.sd).max(0.0)).fold(1.0f64, f64::min);
    let min_y = (min_y * 10.0).floor() / 10.0;
    let px = |x: f64| left + x / max_x * (w - left - right);
    let py = |y: f64| top + (1.0 - (y - min_y) / (1.0 - min_y).max(1e-9)) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#, h - bottom, w - right);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#, h - bottom);
    let mut tick = min_y;
    while tick <= 1.0 + 1e-9 {
        let y = py(tick);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{tick:.1}</text>"#, left - 6.0, y + 4.0);
        tick += 0.1;
    }
    let step = (max_x / 5.0).ceil().max(1.0) as usize;
    for a in (0..=max_x as usize).step_by(step) {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{a}</text>"#, px(a as f64), h - bottom + 16.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">vertices added</text>"#, (left + w - right) / 2.0, h - 8.0);

    let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
    methods.dedup();
    for (k, &m) in methods.iter().enumerate() {
        let mut pts: Vec<&CurveRow> = rows.iter().filter(|r| r.method == m).collect();
        pts.sort_by_key(|r| r.additions);
        let upper = pts.iter().map(|r| format!("{:.2},{:.2}", px(r.additions as f64), py((r.mean + r.sd).min(1.0))));
        let lower = pts.iter().rev().map(|r| format!("{:.2},{:.2}", px(r.additions as f64), py((r.mean - r.sd).max(min_y))));
        let band: Vec<String> = upper.chain(lower).collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="{}" fill-opacity="0.15" stroke="none"/>"#, band.join(" "), color(m));
        let line: Vec<String> = pts.iter().map(|r| format!("{:.2},{:.2}", px(r.additions as f64), py(r.mean))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#, line.join(" "), color(m));
        let ly = top + 16.0 * k as f64 + 8.0;
        let _ = writeln!(s, r#"<line x1="{0}" y1="{ly}" x2="{1}" y2="{ly}" stroke="{2}" stroke-width="2"/><text x="{3}" y="{4}">{m}</text>"#, w - right + 10.0, w - right + 30.0, color(m), w - right + 36.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

/// Reads `curves.csv` from `dir` and writes the comparison chart to `out`.
pub fn plot_dir(dir: &Path, out: &Path) -> Result<(), PlanError> {
    let rows: Vec<CurveRow> = read_rows(&dir.join("curves.csv"))?;
    if rows.is_empty() {
        return Err(PlanError::Config(format!("{} has no curve rows", dir.join("curves.csv").display())));
    }
    fs::write(out, curves_svg(&rows))?;
    Ok(())
}
