//! Slow reference implementations used to cross-check the fast paths:
//! dense angle scans, grid scans of candidate centers, brute-force circles
//! and exhaustive reliability.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diskgraph::{is_connected, DiskGraph, SubgraphMask};
use crate::geometry::{circumcircle, dist, in_convex_polygon, Circle, Point, Tolerance};
use crate::sweep::NeighborhoodCandidate;

/// Angles in `[0, 2π)` at which `w` switches between outside and inside the
/// radius-`r` circle centered at `pivot + rho·(cos θ, sin θ)`, found by
/// testing `steps` evenly spaced angles. Each entry is `(θ, now_inside)`.
pub fn membership_scan(pivot: Point, w: Point, rho: f64, r: f64, steps: usize) -> Vec<(f64, bool)> {
    let inside = |i: usize| {
        let theta = std::f64::consts::TAU * i as f64 / steps as f64;
        dist(w, pivot.polar_offset(rho, theta)) < r
    };
    let mut out = Vec::new();
    let mut prev = inside(steps - 1);
    for i in 0..steps {
        let now = inside(i);
        if now != prev {
            out.push((std::f64::consts::TAU * i as f64 / steps as f64, now));
        }
        prev = now;
    }
    out
}

/// Smallest circle through two or three of the points that covers them all.
/// O(n⁴).
pub fn brute_force_sec(points: &[Point]) -> Option<Circle> {
    if points.len() == 1 {
        return Some(Circle { center: points[0], radius: 0.0 });
    }
    let covers = |c: &Circle| points.iter().all(|&p| dist(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-12);
    let mut best: Option<Circle> = None;
    let mut consider = |c: Circle| {
        if best.is_none_or(|b| c.radius < b.radius) && covers(&c) {
            best = Some(c);
        }
    };
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let center = Point::new((points[i].x + points[j].x) / 2.0, (points[i].y + points[j].y) / 2.0);
            consider(Circle { center, radius: dist(points[i], points[j]) / 2.0 });
            for k in (j + 1)..points.len() {
                if let Some(c) = circumcircle(points[i], points[j], points[k]) {
                    consider(c);
                }
            }
        }
    }
    best
}

/// Neighborhoods realized at the centers of a regular grid.
#[derive(Debug, Clone)]
pub struct GridFamily {
    /// Grid spacing (the larger of the two axes).
    pub spacing: f64,
    /// Each realized set with the largest clearance from any constraint
    /// boundary among the grid centers realizing it.
    pub sets: HashMap<Vec<usize>, f64>,
}

impl GridFamily {
    /// Sets realized at some center farther than `cells` grid spacings from
    /// every constraint circle.
    pub fn robust(&self, cells: f64) -> impl Iterator<Item = &Vec<usize>> {
        let limit = cells * self.spacing;
        self.sets.iter().filter(move |(_, &m)| m > limit).map(|(s, _)| s)
    }
}

fn members_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Scans a `resolution × resolution` grid over the bounding box of `vset`
/// inflated by `pad`. With `buffer = Some(b)`, centers within distance `b`
/// of a vertex are skipped. At most 64 points.
pub fn grid_family(vset: &[Point], buffer: Option<f64>, resolution: usize, pad: f64) -> GridFamily {
    assert!(vset.len() <= 64 && !vset.is_empty() && resolution >= 2);
    let (mut lo, mut hi) = (vset[0], vset[0]);
    for p in vset {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo = Point::new(lo.x - pad, lo.y - pad);
    hi = Point::new(hi.x + pad, hi.y + pad);
    let hx = (hi.x - lo.x) / (resolution - 1) as f64;
    let hy = (hi.y - lo.y) / (resolution - 1) as f64;

    let rows: Vec<HashMap<u64, f64>> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let mut row: HashMap<u64, f64> = HashMap::new();
            let y = lo.y + i as f64 * hy;
            'center: for j in 0..resolution {
                let c = Point::new(lo.x + j as f64 * hx, y);
                let mut mask = 0u64;
                let mut margin = f64::INFINITY;
                for (k, &p) in vset.iter().enumerate() {
                    let d = dist(c, p);
                    if let Some(b) = buffer {
                        if d <= b {
                            continue 'center;
                        }
                        margin = margin.min(d - b);
                    }
                    margin = margin.min((d - 1.0).abs());
                    if d < 1.0 {
                        mask |= 1 << k;
                    }
                }
                let e = row.entry(mask).or_insert(margin);
                *e = e.max(margin);
            }
            row
        })
        .collect();

    let mut merged: HashMap<u64, f64> = HashMap::new();
    for row in rows {
        for (mask, m) in row {
            let e = merged.entry(mask).or_insert(m);
            *e = e.max(m);
        }
    }
    GridFamily { spacing: hx.max(hy), sets: merged.into_iter().map(|(m, v)| (members_of(m), v)).collect() }
}

/// Outcome of comparing an enumerated family with a grid family.
#[derive(Debug, Clone, Default)]
pub struct FamilyComparison {
    /// Robust grid sets the enumeration missed.
    pub missing: Vec<Vec<usize>>,
    /// Enumerated sets whose witness does not realize them.
    pub unsound: Vec<Vec<usize>>,
    /// Enumerated sets the grid never hit (cells thinner than the grid).
    pub thin: usize,
}

impl FamilyComparison {
    pub fn agrees(&self) -> bool {
        self.missing.is_empty() && self.unsound.is_empty()
    }
}

/// Every grid set realized more than `cells` spacings from all constraint
/// boundaries must be enumerated, and every enumerated witness must realize
/// its set under a direct distance check.
pub fn compare_family(
    enumerated: &[NeighborhoodCandidate],
    grid: &GridFamily,
    vset: &[Point],
    buffer: Option<f64>,
    cells: f64,
) -> FamilyComparison {
    let mut out = FamilyComparison::default();
    let known: std::collections::HashSet<&Vec<usize>> = enumerated.iter().map(|c| &c.members).collect();
    out.missing = grid.robust(cells).filter(|s| !known.contains(s)).cloned().collect();
    out.missing.sort();
    for c in enumerated {
        if c.validate(vset, buffer, Tolerance::DEFAULT).is_err() {
            out.unsound.push(c.members.clone());
        }
        if !grid.sets.contains_key(&c.members) {
            out.thin += 1;
        }
    }
    out
}

/// Largest distance to the nearest point over a `resolution²` grid of
/// centers inside `hull`.
pub fn lec_grid(points: &[Point], hull: &[Point], resolution: usize) -> f64 {
    let (mut lo, mut hi) = (hull[0], hull[0]);
    for p in hull {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let step = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / (resolution - 1) as f64;
    let mut best = 0.0f64;
    for i in 0..resolution {
        for j in 0..resolution {
            let c = Point::new(step(lo.x, hi.x, j), step(lo.y, hi.y, i));
            if in_convex_polygon(hull, c, Tolerance::DEFAULT) {
                best = best.max(points.iter().map(|&p| dist(c, p)).fold(f64::INFINITY, f64::min));
            }
        }
    }
    best
}

/// All-terminal reliability by summing over every edge subset. Panics for
/// more than 24 edges.
pub fn rel_a_bruteforce(g: &DiskGraph, p: f64) -> f64 {
    let m = g.edge_count();
    assert!(m <= 24, "{m} edges is too many to enumerate");
    let mut total = 0.0;
    for bits in 0u32..(1 << m) {
        let on: Vec<bool> = (0..m).map(|e| bits >> e & 1 == 1).collect();
        let mask = SubgraphMask::edges_only(g, on).expect("mask sized to graph");
        if is_connected(g, &mask) {
            let k = bits.count_ones() as i32;
            total += p.powi(k) * (1.0 - p).powi(m as i32 - k);
        }
    }
    total
}
