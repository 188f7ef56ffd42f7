//! Shared generators and property checks. Each check returns `Err` with a
//! description on the first violation.

#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;

use annulus_core::diskgraph::{is_connected, DiskGraph, SubgraphMask};
use annulus_core::geometry::{
    convex_hull, crossing_angles, dist, in_convex_polygon, largest_empty_circle, smallest_enclosing_circle, Point,
    Tolerance,
};
use annulus_core::layout::{relax, MoveMode, SpringConfig};
use annulus_core::oracle::{brute_force_sec, lec_grid};
use annulus_core::reliability::{rel_a_exact, FailureModel, Probabilities};
use annulus_core::sweep::{
    buffer_neighborhoods, circle_events, initial_set, inner_sweep, outer_sweep, realized_set, replay,
    unbuffered_neighborhoods,
};

pub type Check = Result<(), String>;

pub const BUFFERS: [f64; 3] = [0.3, 0.5, 0.65];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn point_in(side: f64) -> impl Strategy<Value = Point> {
    (0.0..side, 0.0..side).prop_map(|(x, y)| Point::new(x, y))
}

pub fn points(side: f64, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point_in(side), n).prop_filter("points too close together", |pts| well_separated(pts, 1e-6))
}

pub fn well_separated(pts: &[Point], gap: f64) -> bool {
    (0..pts.len()).all(|i| ((i + 1)..pts.len()).all(|j| dist(pts[i], pts[j]) > gap))
}

pub fn buffer() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.3), Just(0.5), Just(0.65), 0.05..0.95]
}

/// Membership from `crossing_angles` agrees with a direct distance check at
/// 1000 angles, except within `eps` of the circle.
pub fn crossing_matches_distance(pivot: Point, w: Point, rho: f64, r: f64) -> Check {
    if dist(pivot, w) < 1e-9 {
        return Ok(());
    }
    let crossing = crossing_angles(pivot, w, rho, r).map_err(|e| e.to_string())?;
    let eps = Tolerance::DEFAULT.eps;
    for i in 0..1000 {
        let theta = std::f64::consts::TAU * (i as f64 + 0.5) / 1000.0;
        let d = dist(w, pivot.polar_offset(rho, theta));
        if (d - r).abs() <= 1e3 * eps {
            continue;
        }
        ensure!(crossing.inside_at(theta) == (d < r), "θ={theta}: {crossing:?} but distance {d} vs radius {r}");
    }
    Ok(())
}

pub fn enclosing_circle_is_minimal(pts: &[Point]) -> Check {
    let c = smallest_enclosing_circle(pts).map_err(|e| e.to_string())?;
    for &p in pts {
        ensure!(dist(c.center, p) <= c.radius + 1e-9, "{p:?} outside {c:?}");
    }
    let brute = brute_force_sec(pts).expect("nonempty");
    ensure!((brute.radius - c.radius).abs() <= 1e-9, "radius {} but brute force {}", c.radius, brute.radius);
    Ok(())
}

pub fn empty_circle_is_empty_and_largest(pts: &[Point]) -> Check {
    let hull = convex_hull(pts);
    if hull.len() < 3 {
        return Ok(());
    }
    let c = largest_empty_circle(pts, &hull).map_err(|e| e.to_string())?;
    ensure!(in_convex_polygon(&hull, c.center, Tolerance::DEFAULT), "center {:?} outside hull", c.center);
    for &p in pts {
        ensure!(dist(c.center, p) >= c.radius - 1e-9, "{p:?} strictly inside {c:?}");
    }
    let res = 60;
    let grid = lec_grid(pts, &hull, res);
    let (mut lo, mut hi) = (hull[0], hull[0]);
    for p in &hull {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let cell = ((hi.x - lo.x).powi(2) + (hi.y - lo.y).powi(2)).sqrt() / (res - 1) as f64;
    ensure!(c.radius >= grid - cell, "radius {} below grid value {grid}", c.radius);
    Ok(())
}

/// Moving every point by less than `eps/2` keeps the edge set when no pair
/// is within `eps` of unit distance.
pub fn adjacency_is_stable(pts: &[Point], jitter: &[(f64, f64)]) -> Check {
    let eps = 1e-6;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if (dist(pts[i], pts[j]) - 1.0).abs() <= eps {
                return Ok(());
            }
        }
    }
    let moved: Vec<Point> =
        pts.iter().zip(jitter).map(|(&p, &(dx, dy))| Point::new(p.x + dx * eps / 3.0, p.y + dy * eps / 3.0)).collect();
    let a = DiskGraph::build(pts.to_vec()).map_err(|e| e.to_string())?;
    let b = DiskGraph::build(moved).map_err(|e| e.to_string())?;
    ensure!(a.edges() == b.edges(), "edges changed under perturbation");
    Ok(())
}

fn dfs_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let next = if a == u { b } else if b == u { a } else { continue };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `is_connected` agrees with depth-first search for every edge mask.
pub fn connectivity_matches_search(pts: &[Point]) -> Check {
    let g = DiskGraph::build(pts.to_vec()).map_err(|e| e.to_string())?;
    let m = g.edge_count().min(12);
    for bits in 0u32..(1 << m) {
        let on: Vec<bool> = (0..g.edge_count()).map(|e| e < m && bits >> e & 1 == 1).collect();
        let kept: Vec<(usize, usize)> = g.edges().iter().zip(&on).filter(|(_, &o)| o).map(|(&e, _)| e).collect();
        let mask = SubgraphMask::edges_only(&g, on).map_err(|e| e.to_string())?;
        ensure!(is_connected(&g, &mask) == dfs_connected(g.len(), &kept), "mask {bits:b} disagrees");
    }
    Ok(())
}

/// Every buffered and unbuffered witness realizes exactly its set, and the
/// empty set is always present.
pub fn witnesses_are_sound(pts: &[Point], b: f64) -> Check {
    let tol = Tolerance::DEFAULT;
    let buffered = buffer_neighborhoods(pts, b).map_err(|e| e.to_string())?;
    for c in &buffered {
        c.validate(pts, Some(b), tol).map_err(|e| format!("buffered {:?}: {e:?}", c.members))?;
    }
    ensure!(buffered.iter().any(|c| c.members.is_empty()), "buffered family lacks the empty set");
    for c in &unbuffered_neighborhoods(pts).map_err(|e| e.to_string())? {
        c.validate(pts, None, tol).map_err(|e| format!("unbuffered {:?}: {e:?}", c.members))?;
    }
    Ok(())
}

/// Sets realized at sampled centers clear of every constraint circle by
/// `margin` appear in the enumerated families.
pub fn sampled_centers_are_enumerated(pts: &[Point], b: f64, centers: &[Point]) -> Check {
    let margin = 1e-6;
    let buffered: HashSet<Vec<usize>> =
        buffer_neighborhoods(pts, b).map_err(|e| e.to_string())?.into_iter().map(|c| c.members).collect();
    let plain: HashSet<Vec<usize>> =
        unbuffered_neighborhoods(pts).map_err(|e| e.to_string())?.into_iter().map(|c| c.members).collect();
    for &c in centers {
        let ds: Vec<f64> = pts.iter().map(|&p| dist(p, c)).collect();
        if ds.iter().any(|d| (d - 1.0).abs() < margin) {
            continue;
        }
        let set = realized_set(pts, c);
        ensure!(plain.contains(&set), "unbuffered family misses {set:?} realized at {c:?}");
        if ds.iter().all(|&d| d > b + margin) {
            ensure!(buffered.contains(&set), "buffered family misses {set:?} realized at {c:?}");
        }
    }
    Ok(())
}

/// Per-pivot event counts stay within four per nearby point, candidate
/// counts stay quadratic, and every sweep returns to its starting state.
pub fn sweeps_are_bounded_and_periodic(pts: &[Point], b: f64) -> Check {
    for v in 0..pts.len() {
        let near = pts.iter().enumerate().filter(|&(w, &p)| w != v && dist(p, pts[v]) < 2.0).count();
        for sweep in [
            circle_events(pts, v).map_err(|e| e.to_string())?,
            outer_sweep(pts, v, b).map_err(|e| e.to_string())?,
            inner_sweep(pts, v, b).map_err(|e| e.to_string())?,
        ] {
            let events = sweep.event_points().len();
            ensure!(events <= 4 * near, "pivot {v}: {events} events for {near} nearby points");
            ensure!(replay(&sweep) == initial_set(&sweep), "pivot {v} {:?} sweep is not periodic", sweep.kind);
        }
    }
    let n = pts.len();
    let plain = unbuffered_neighborhoods(pts).map_err(|e| e.to_string())?.len();
    ensure!(plain <= 4 * n * n, "{plain} unbuffered sets for n={n}");
    let buffered = buffer_neighborhoods(pts, b).map_err(|e| e.to_string())?.len();
    ensure!(buffered <= 8 * n * n, "{buffered} buffered sets for n={n}");
    Ok(())
}

/// Raising one edge's probability from 0 to `p` never lowers reliability.
pub fn reliability_is_monotone(pts: &[Point], p: f64) -> Check {
    let g = DiskGraph::build(pts.to_vec()).map_err(|e| e.to_string())?;
    let m = g.edge_count();
    if m == 0 || m > 14 {
        return Ok(());
    }
    for e in 0..m {
        let mut probs = vec![p; m];
        probs[e] = 0.0;
        let without = FailureModel { edge_p: Probabilities::PerItem(probs.clone()), vertex_p: Probabilities::Uniform(1.0) };
        probs[e] = p;
        let with = FailureModel { edge_p: Probabilities::PerItem(probs), vertex_p: Probabilities::Uniform(1.0) };
        let (a, b) = (rel_a_exact(&g, &without).map_err(|e| e.to_string())?, rel_a_exact(&g, &with).map_err(|e| e.to_string())?);
        ensure!(b >= a - 1e-12, "edge {e}: {a} with it failed, {b} with it live");
    }
    Ok(())
}

/// Relaxation keeps every edge and leaves fixed vertices bit-identical.
pub fn relax_preserves_edges(pts: &[Point], fixed_every: usize) -> Check {
    let g = DiskGraph::build(pts.to_vec()).map_err(|e| e.to_string())?;
    for mode in [MoveMode::AllAtOnce, MoveMode::OneAtATime] {
        let cfg = SpringConfig { mode, iterations: 30, ..SpringConfig::default() }
            .with_fixed((0..pts.len()).filter(|v| v % fixed_every == 0));
        let out = relax(&g, &cfg).map_err(|e| e.to_string())?;
        for &(u, v) in g.edges() {
            let d = dist(out[u], out[v]);
            ensure!(d <= 1.0 + 1e-9, "{mode:?}: edge ({u},{v}) stretched to {d}");
        }
        for &v in &cfg.fixed {
            ensure!(out[v].x.to_bits() == pts[v].x.to_bits() && out[v].y.to_bits() == pts[v].y.to_bits(), "{mode:?}: fixed {v} moved");
        }
        ensure!(relax(&g, &cfg).map_err(|e| e.to_string())? == out, "{mode:?}: not deterministic");
    }
    Ok(())
}
