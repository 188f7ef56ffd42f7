//! Fruchterman-Reingold spring layout that never breaks a unit-distance edge.
//!
//! A round whose proposed moves would stretch any currently adjacent pair to
//! distance 1 or more is discarded; the temperature still decays, so later
//! rounds propose smaller steps.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diskgraph::DiskGraph;
use crate::error::LayoutError;
use crate::geometry::{dist, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveMode {
    /// Every free vertex moves each round.
    #[default]
    AllAtOnce,
    /// One free vertex per round, cycling in index order.
    OneAtATime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpringConfig {
    pub iterations: usize,
    /// Optimal pair distance; defaults to `sqrt(frame area / n)`.
    pub k_opt: Option<f64>,
    /// Initial temperature; defaults to a tenth of the longer frame side.
    pub t0: Option<f64>,
    pub mode: MoveMode,
    pub fixed: BTreeSet<usize>,
}

impl Default for SpringConfig {
    fn default() -> Self {
        SpringConfig { iterations: 50, k_opt: None, t0: None, mode: MoveMode::AllAtOnce, fixed: BTreeSet::new() }
    }
}

impl SpringConfig {
    pub fn with_fixed(mut self, fixed: impl IntoIterator<Item = usize>) -> Self {
        self.fixed = fixed.into_iter().collect();
        self
    }

    fn validate(&self) -> Result<(), LayoutError> {
        if self.iterations == 0 {
            return Err(LayoutError::InvalidConfig("iterations must be at least 1"));
        }
        if self.k_opt.is_some_and(|k| !(k > 0.0 && k.is_finite())) {
            return Err(LayoutError::InvalidConfig("k_opt must be positive"));
        }
        if self.t0.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(LayoutError::InvalidConfig("t0 must be positive"));
        }
        Ok(())
    }

    /// `(k, t0)` for the given positions, using the bounding-box frame for
    /// unset values. `None` when the frame is a single point.
    pub fn resolve(&self, points: &[Point]) -> Option<(f64, f64)> {
        let (w, h) = frame(points);
        let side = w.max(h);
        if side == 0.0 {
            return None;
        }
        let area = if w * h > 0.0 { w * h } else { side * side };
        let k = self.k_opt.unwrap_or_else(|| (area / points.len() as f64).sqrt());
        let t0 = self.t0.unwrap_or(side / 10.0);
        Some((k, t0))
    }
}

fn frame(points: &[Point]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (hi.x - lo.x, hi.y - lo.y)
}

/// `F = k²/d² − (d/k if adjacent)`; positive values push apart.
pub fn pair_force(d: f64, k: f64, adjacent: bool) -> f64 {
    let repulsion = k * k / (d * d);
    let attraction = if adjacent { d / k } else { 0.0 };
    repulsion - attraction
}

const MIN_DISPLACEMENT: f64 = 1e-12;

fn displacement_of(points: &[Point], v: usize, k: f64, t: f64) -> Result<Point, LayoutError> {
    let pv = points[v];
    let mut disp = Point::ORIGIN;
    for (w, &pw) in points.iter().enumerate() {
        if w == v {
            continue;
        }
        let d = dist(pv, pw);
        if d == 0.0 {
            return Err(LayoutError::Coincident(v.min(w), v.max(w)));
        }
        disp = disp + (pv - pw) * pair_force(d, k, d < 1.0);
    }
    let len = disp.norm();
    Ok(if len < MIN_DISPLACEMENT { Point::ORIGIN } else { disp * (t / len) })
}

/// Temperature-scaled displacement for every vertex of `g` (zero for fixed
/// vertices). Each nonzero step has length exactly `t`.
pub fn step_displacements(g: &DiskGraph, cfg: &SpringConfig, t: f64) -> Result<Vec<Point>, LayoutError> {
    cfg.validate()?;
    let points = g.points();
    let Some((k, _)) = cfg.resolve(points) else {
        return Ok(vec![Point::ORIGIN; points.len()]);
    };
    displacements(points, &cfg.fixed, k, t)
}

fn displacements(points: &[Point], fixed: &BTreeSet<usize>, k: f64, t: f64) -> Result<Vec<Point>, LayoutError> {
    (0..points.len())
        .map(|v| if fixed.contains(&v) { Ok(Point::ORIGIN) } else { displacement_of(points, v, k, t) })
        .collect()
}

fn adjacent_pairs(points: &[Point]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if dist(points[i], points[j]) < 1.0 {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn acceptable(proposal: &[Point], protected: &[(usize, usize)]) -> bool {
    if protected.iter().any(|&(i, j)| dist(proposal[i], proposal[j]) >= 1.0) {
        return false;
    }
    // a collision would make the next round's repulsion infinite
    (0..proposal.len()).all(|i| ((i + 1)..proposal.len()).all(|j| proposal[i] != proposal[j]))
}

/// Positions after relaxation plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub positions: Vec<Point>,
    pub accepted: usize,
    pub rejected: usize,
    /// Temperature used in each round.
    pub temperatures: Vec<f64>,
}

/// Runs `cfg.iterations` rounds. The output keeps every input edge and
/// leaves fixed vertices untouched.
pub fn relax(g: &DiskGraph, cfg: &SpringConfig) -> Result<Vec<Point>, LayoutError> {
    Ok(relax_traced(g, cfg)?.positions)
}

pub fn relax_traced(g: &DiskGraph, cfg: &SpringConfig) -> Result<Relaxation, LayoutError> {
    cfg.validate()?;
    let mut positions = g.points().to_vec();
    let mut out = Relaxation { positions: positions.clone(), accepted: 0, rejected: 0, temperatures: Vec::new() };
    let Some((k, t0)) = cfg.resolve(&positions) else {
        return Ok(out);
    };
    let free: Vec<usize> = (0..positions.len()).filter(|v| !cfg.fixed.contains(v)).collect();
    if free.is_empty() {
        return Ok(out);
    }
    let cooling = t0 / (cfg.iterations as f64 + 1.0);
    let mut protected = adjacent_pairs(&positions);
    for round in 0..cfg.iterations {
        let t = t0 - round as f64 * cooling;
        out.temperatures.push(t);
        let proposal = match cfg.mode {
            MoveMode::AllAtOnce => {
                let steps = displacements(&positions, &cfg.fixed, k, t)?;
                positions.iter().zip(&steps).map(|(&p, &s)| p + s).collect::<Vec<_>>()
            }
            MoveMode::OneAtATime => {
                let v = free[round % free.len()];
                let mut next = positions.clone();
                next[v] = next[v] + displacement_of(&positions, v, k, t)?;
                next
            }
        };
        if acceptable(&proposal, &protected) {
            positions = proposal;
            protected = adjacent_pairs(&positions);
            out.accepted += 1;
        } else {
            out.rejected += 1;
        }
    }
    out.positions = positions;
    Ok(out)
}
