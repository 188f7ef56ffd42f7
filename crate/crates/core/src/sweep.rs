//! Radial sweeps that enumerate every neighbor set a new vertex can realize.
//!
//! A sweep pins one existing vertex (the pivot) to the boundary of a circle
//! or a `(b, 1)`-annulus and rotates the shape a full turn around it. Every
//! other point crosses the outer and inner circles at a handful of angles;
//! between consecutive crossings the set of enclosed points is constant.
//! Each arc whose inner circle is empty yields a realizable neighborhood,
//! and every realizable neighborhood is bounded by at least one such arc, so
//! running the sweep around every vertex (on both the outer and inner
//! boundary) lists all of them in `O(nΔ)` events.
//!
//! Angles are measured counterclockwise in `[0, 2π)`; the shape's center at
//! angle θ is `pivot + rho·(cos θ, sin θ)` with `rho = 1` for an outer-pivot
//! sweep and `rho = b` for an inner-pivot sweep.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SweepError;
use crate::geometry::{crossing_angles, dist, Crossing, Point, Tolerance};

/// Which boundary circle of the swept shape the pivot sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotKind {
    Outer,
    Inner,
}

/// How a candidate's witness was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Unbuffered,
    OuterPivot,
    InnerPivot,
    /// The empty neighborhood, placed outside every unit disk.
    Exterior,
}

/// Crossing angles of one point during one sweep. The outer pair
/// (`theta_min`, `theta_max`) and the inner pair (`theta_dis`, `theta_re`)
/// are each either both present or both absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEvent {
    pub w: usize,
    /// Enters the outer circle.
    pub theta_min: Option<f64>,
    /// Enters the inner circle and leaves the annulus.
    pub theta_dis: Option<f64>,
    /// Leaves the inner circle and reappears in the annulus.
    pub theta_re: Option<f64>,
    /// Leaves the outer circle.
    pub theta_max: Option<f64>,
}

impl SweepEvent {
    fn new(w: usize, outer: Option<(f64, f64)>, inner: Option<(f64, f64)>) -> Self {
        SweepEvent {
            w,
            theta_min: outer.map(|o| o.0),
            theta_max: outer.map(|o| o.1),
            theta_dis: inner.map(|i| i.0),
            theta_re: inner.map(|i| i.1),
        }
    }

    pub fn outer_pair(&self) -> Option<(f64, f64)> {
        self.theta_min.zip(self.theta_max)
    }

    pub fn inner_pair(&self) -> Option<(f64, f64)> {
        self.theta_dis.zip(self.theta_re)
    }
}

/// Crossing type. The derived order is the processing order for events at
/// the same angle: removals before additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Max,
    Dis,
    Re,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventPoint {
    pub w: usize,
    pub theta: f64,
    pub kind: EventKind,
}

/// Points in the annulus (`running`) and strictly inside its inner circle
/// (`bad`) at the current sweep angle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepState {
    pub running: BTreeSet<usize>,
    pub bad: BTreeSet<usize>,
}

impl SweepState {
    fn apply(&mut self, e: &EventPoint) {
        match e.kind {
            EventKind::Max => {
                self.running.remove(&e.w);
            }
            EventKind::Min => {
                self.running.insert(e.w);
            }
            EventKind::Dis => {
                self.running.remove(&e.w);
                self.bad.insert(e.w);
            }
            EventKind::Re => {
                self.running.insert(e.w);
                self.bad.remove(&e.w);
            }
        }
    }
}

/// All crossing data for one pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotSweep {
    pub pivot: usize,
    pub kind: PivotKind,
    /// Distance from the pivot to the swept center.
    pub rho: f64,
    /// Inner radius; `None` for the plain unit-circle sweep.
    pub buffer: Option<f64>,
    pub events: Vec<SweepEvent>,
    /// Points inside the annulus for the whole rotation.
    pub always_inside: Vec<usize>,
}

impl PivotSweep {
    pub fn center_at(&self, points: &[Point], theta: f64) -> Point {
        points[self.pivot].polar_offset(self.rho, theta)
    }

    /// Flattened crossings sorted by angle, ties broken by [`EventKind`]
    /// order then point index.
    pub fn event_points(&self) -> Vec<EventPoint> {
        let mut out = Vec::with_capacity(self.events.len() * 4);
        for ev in &self.events {
            let tagged = [
                (ev.theta_min, EventKind::Min),
                (ev.theta_dis, EventKind::Dis),
                (ev.theta_re, EventKind::Re),
                (ev.theta_max, EventKind::Max),
            ];
            for (theta, kind) in tagged {
                if let Some(theta) = theta {
                    out.push(EventPoint { w: ev.w, theta, kind });
                }
            }
        }
        out.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.kind.cmp(&b.kind)).then(a.w.cmp(&b.w)));
        out
    }
}

fn check_pivot(vset: &[Point], v: usize) -> Result<(), SweepError> {
    if v >= vset.len() {
        return Err(SweepError::IndexOutOfRange { index: v, len: vset.len() });
    }
    Ok(())
}

fn check_buffer(b: f64) -> Result<(), SweepError> {
    if b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(SweepError::InvalidBuffer(b))
    }
}

fn arc(c: Crossing) -> Option<(f64, f64)> {
    match c {
        Crossing::Arc { enter, exit } => Some((enter, exit)),
        _ => None,
    }
}

/// Shared classification: outer circle radius 1, optional inner radius `b`,
/// center orbiting the pivot at `rho`.
fn sweep_around(vset: &[Point], v: usize, rho: f64, buffer: Option<f64>, kind: PivotKind) -> Result<PivotSweep, SweepError> {
    check_pivot(vset, v)?;
    let pivot = vset[v];
    let reach = rho + 1.0;
    let mut events = Vec::new();
    let mut always_inside = Vec::new();
    for (w, &p) in vset.iter().enumerate() {
        if w == v || dist(pivot, p) >= reach {
            continue;
        }
        let outer = crossing_angles(pivot, p, rho, 1.0)?;
        if outer == Crossing::NeverInside {
            continue;
        }
        let inner = match buffer {
            Some(b) => crossing_angles(pivot, p, rho, b)?,
            None => Crossing::NeverInside,
        };
        match (outer, inner) {
            (Crossing::AlwaysInside, Crossing::NeverInside) => always_inside.push(w),
            // inner thresholds d/(2b) and (d² + 1 − b²)/(2d) are always positive
            (_, Crossing::AlwaysInside) => unreachable!("point permanently inside the inner circle"),
            _ => events.push(SweepEvent::new(w, arc(outer), arc(inner))),
        }
    }
    Ok(PivotSweep { pivot: v, kind, rho, buffer, events, always_inside })
}

/// Entry and exit angles of every point within distance 2 of `vset[v]` for
/// a unit circle pivoting on `vset[v]`.
pub fn circle_events(vset: &[Point], v: usize) -> Result<PivotSweep, SweepError> {
    sweep_around(vset, v, 1.0, None, PivotKind::Outer)
}

/// Crossings for a `(b, 1)`-annulus with `vset[v]` pinned to its outer
/// circle. Points at distance in `(1 − b, 1 + b)` cross both circles; other
/// points within 2 cross only the outer one.
pub fn outer_sweep(vset: &[Point], v: usize, b: f64) -> Result<PivotSweep, SweepError> {
    check_buffer(b)?;
    sweep_around(vset, v, 1.0, Some(b), PivotKind::Outer)
}

/// Crossings for a `(b, 1)`-annulus with `vset[v]` pinned to its inner
/// circle.
///
/// A point at distance `d < 1 + b` crosses the outer circle iff
/// `d > 1 − b` and the inner circle iff `d < 2b`. When `b < 1/3` a point
/// with `2b < d < 1 − b` crosses neither and stays in the annulus for the
/// whole turn; it is reported in `always_inside`.
pub fn inner_sweep(vset: &[Point], v: usize, b: f64) -> Result<PivotSweep, SweepError> {
    check_buffer(b)?;
    sweep_around(vset, v, b, Some(b), PivotKind::Inner)
}

/// Membership at sweep angle 0.
pub fn initial_set(sweep: &PivotSweep) -> SweepState {
    let mut state = SweepState { running: sweep.always_inside.iter().copied().collect(), bad: BTreeSet::new() };
    for ev in &sweep.events {
        // an arc contains angle 0 iff it wraps, i.e. exit < enter
        let in_outer = match ev.outer_pair() {
            Some((enter, exit)) => exit < enter,
            None => true,
        };
        let in_inner = match ev.inner_pair() {
            Some((dis, re)) => re < dis,
            None => false,
        };
        if in_inner {
            state.bad.insert(ev.w);
        } else if in_outer {
            state.running.insert(ev.w);
        }
    }
    state
}

/// State after replaying every event once, starting from [`initial_set`].
/// A full turn is periodic, so this equals the initial state.
pub fn replay(sweep: &PivotSweep) -> SweepState {
    let mut state = initial_set(sweep);
    for e in sweep.event_points() {
        state.apply(&e);
    }
    state
}

/// A set realized on an arc of the sweep, with the arc's midpoint angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    pub members: Vec<usize>,
    pub theta: f64,
}

/// Replays the sweep and records the annulus contents on every arc whose
/// inner circle is empty, following the per-kind rules:
/// `max` emits R and R ∪ w, `min` emits R and R − w, `dis` emits R ∪ w and
/// `re` emits R, each only while no point is inside the inner circle.
///
/// Sets that hold after an event carry the midpoint of the following arc as
/// their witness angle; sets that held before it carry the midpoint of the
/// preceding arc. The pivot is never in a returned set.
pub fn sets_from_intervals(sweep: &PivotSweep) -> Vec<ArcSet> {
    let events = sweep.event_points();
    let mut state = initial_set(sweep);
    let mut out = Vec::new();
    if events.is_empty() {
        if state.bad.is_empty() {
            out.push(ArcSet { members: state.running.into_iter().collect(), theta: PI });
        }
        return out;
    }

    let k = events.len();
    let arc_mid = |i: usize| {
        let start = events[i].theta;
        let end = if i + 1 < k { events[i + 1].theta } else { events[0].theta + TAU };
        crate::geometry::normalize_angle((start + end) / 2.0)
    };
    let with = |set: &BTreeSet<usize>, w: usize| {
        let mut s = set.clone();
        s.insert(w);
        s.into_iter().collect::<Vec<_>>()
    };
    let without = |set: &BTreeSet<usize>, w: usize| set.iter().copied().filter(|&x| x != w).collect::<Vec<_>>();

    for (i, e) in events.iter().enumerate() {
        let after = arc_mid(i);
        let before = arc_mid((i + k - 1) % k);
        match e.kind {
            EventKind::Max => {
                state.apply(e);
                if state.bad.is_empty() {
                    out.push(ArcSet { members: state.running.iter().copied().collect(), theta: after });
                    out.push(ArcSet { members: with(&state.running, e.w), theta: before });
                }
            }
            EventKind::Min => {
                state.apply(e);
                if state.bad.is_empty() {
                    out.push(ArcSet { members: state.running.iter().copied().collect(), theta: after });
                    out.push(ArcSet { members: without(&state.running, e.w), theta: before });
                }
            }
            EventKind::Dis => {
                state.running.remove(&e.w);
                if state.bad.is_empty() {
                    out.push(ArcSet { members: with(&state.running, e.w), theta: before });
                }
                state.bad.insert(e.w);
            }
            EventKind::Re => {
                state.apply(e);
                if state.bad.is_empty() {
                    out.push(ArcSet { members: state.running.iter().copied().collect(), theta: after });
                }
            }
        }
    }
    out
}

/// A realizable neighbor set with a center that realizes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodCandidate {
    /// Sorted vertex indices.
    pub members: Vec<usize>,
    pub witness: Point,
    pub boundary_kind: BoundaryKind,
    /// The pivot whose sweep produced this candidate.
    pub pivot: Option<usize>,
}

/// Why a witness failed validation.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessViolation {
    /// Vertex `w` is within `eps` of the unit circle around the witness.
    Ambiguous { w: usize, distance: f64 },
    /// Vertex `w` is not farther than the buffer.
    InsideBuffer { w: usize, distance: f64 },
    /// The witness realizes a different set.
    WrongSet { realized: Vec<usize> },
}

impl NeighborhoodCandidate {
    /// Checks the witness by direct distance computation: members strictly
    /// closer than `1 − eps`, non-members farther than `1 + eps`, and every
    /// vertex farther than `b + eps` when buffered.
    pub fn validate(&self, vset: &[Point], buffer: Option<f64>, tol: Tolerance) -> Result<(), WitnessViolation> {
        validate_witness(vset, &self.members, self.witness, buffer, tol)
    }

    /// One diagnostic JSON record.
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            members: &'a [usize],
            witness: Point,
            pivot: Option<usize>,
            kind: &'static str,
        }
        let kind = match self.boundary_kind {
            BoundaryKind::OuterPivot => "outer",
            BoundaryKind::InnerPivot => "inner",
            BoundaryKind::Unbuffered => "unbuffered",
            BoundaryKind::Exterior => "exterior",
        };
        serde_json::to_string(&Line { members: &self.members, witness: self.witness, pivot: self.pivot, kind })
            .expect("plain record serializes")
    }
}

/// Neighbor set realized at `center` (strict unit distance), sorted.
pub fn realized_set(vset: &[Point], center: Point) -> Vec<usize> {
    vset.iter().enumerate().filter(|(_, &p)| dist(p, center) < 1.0).map(|(i, _)| i).collect()
}

fn validate_witness(
    vset: &[Point],
    members: &[usize],
    witness: Point,
    buffer: Option<f64>,
    tol: Tolerance,
) -> Result<(), WitnessViolation> {
    let mut realized = Vec::new();
    for (w, &p) in vset.iter().enumerate() {
        let d = dist(p, witness);
        if let Some(b) = buffer {
            if d <= b + tol.eps {
                return Err(WitnessViolation::InsideBuffer { w, distance: d });
            }
        }
        if (d - 1.0).abs() <= tol.eps {
            return Err(WitnessViolation::Ambiguous { w, distance: d });
        }
        if d < 1.0 {
            realized.push(w);
        }
    }
    if realized != members {
        return Err(WitnessViolation::WrongSet { realized });
    }
    Ok(())
}

/// Smallest distance from `center` to any relevant circle of a point other
/// than the pivot.
fn clearance(vset: &[Point], pivot: usize, center: Point, buffer: Option<f64>) -> f64 {
    vset.iter()
        .enumerate()
        .filter(|&(w, _)| w != pivot)
        .map(|(_, &p)| {
            let d = dist(p, center);
            let outer = (d - 1.0).abs();
            match buffer {
                Some(b) => outer.min((d - b).abs()),
                None => outer,
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn sorted_with(members: &[usize], v: usize) -> Vec<usize> {
    let mut s = members.to_vec();
    if let Err(pos) = s.binary_search(&v) {
        s.insert(pos, v);
    }
    s
}

/// Turns arc sets of one sweep into concrete candidates by nudging the
/// center radially off the pivot's circle, then validates each one.
fn candidates_from_sweep(vset: &[Point], sweep: &PivotSweep, tol: Tolerance) -> Vec<NeighborhoodCandidate> {
    let v = sweep.pivot;
    let pivot = vset[v];
    let buffer = sweep.buffer;
    let boundary_kind = match (buffer, sweep.kind) {
        (None, _) => BoundaryKind::Unbuffered,
        (Some(_), PivotKind::Outer) => BoundaryKind::OuterPivot,
        (Some(_), PivotKind::Inner) => BoundaryKind::InnerPivot,
    };
    let mut out = Vec::new();
    for set in sets_from_intervals(sweep) {
        let on_circle = sweep.center_at(vset, set.theta);
        let cap = buffer.map_or(0.5, |b| (1.0 - b) / 2.0);
        let nudge = (clearance(vset, v, on_circle, buffer) / 2.0).min(cap);
        // (members, distance from pivot to witness)
        let variants: Vec<(Vec<usize>, f64)> = match sweep.kind {
            PivotKind::Outer => vec![(set.members.clone(), 1.0 + nudge), (sorted_with(&set.members, v), 1.0 - nudge)],
            PivotKind::Inner => vec![(sorted_with(&set.members, v), sweep.rho + nudge)],
        };
        for (members, radius) in variants {
            let witness = pivot.polar_offset(radius, set.theta);
            match validate_witness(vset, &members, witness, buffer, tol) {
                Ok(()) => out.push(NeighborhoodCandidate { members, witness, boundary_kind, pivot: Some(v) }),
                Err(why) => log::debug!("pivot {v} ({:?}) discarded witness for {members:?}: {why:?}", sweep.kind),
            }
        }
    }
    out
}

/// The empty neighborhood, placed `offset` beyond the rightmost point.
fn exterior_candidate(vset: &[Point], offset: f64) -> NeighborhoodCandidate {
    let right = vset
        .iter()
        .copied()
        .max_by(|a, b| a.x.total_cmp(&b.x))
        .expect("nonempty vertex set");
    NeighborhoodCandidate {
        members: Vec::new(),
        witness: Point::new(right.x + offset, right.y),
        boundary_kind: BoundaryKind::Exterior,
        pivot: None,
    }
}

/// Every validated candidate from every outer- and inner-pivot sweep, before
/// deduplication, in pivot order. The exterior empty candidate comes first.
pub fn buffer_candidates(vset: &[Point], b: f64) -> Result<Vec<NeighborhoodCandidate>, SweepError> {
    check_buffer(b)?;
    if vset.is_empty() {
        return Err(SweepError::Empty);
    }
    let tol = Tolerance::DEFAULT;
    let per_pivot: Vec<Vec<NeighborhoodCandidate>> = (0..vset.len())
        .into_par_iter()
        .map(|v| {
            let outer = outer_sweep(vset, v, b)?;
            let inner = inner_sweep(vset, v, b)?;
            let mut c = candidates_from_sweep(vset, &outer, tol);
            c.extend(candidates_from_sweep(vset, &inner, tol));
            Ok(c)
        })
        .collect::<Result<_, SweepError>>()?;
    let mut out = vec![exterior_candidate(vset, 1.0 + b)];
    out.extend(per_pivot.into_iter().flatten());
    Ok(out)
}

/// Keeps the first candidate for each distinct member set.
pub fn dedup_candidates(cands: Vec<NeighborhoodCandidate>) -> Vec<NeighborhoodCandidate> {
    let mut seen = HashSet::new();
    cands.into_iter().filter(|c| seen.insert(c.members.clone())).collect()
}

/// All neighbor sets a vertex can have when placed farther than `b` from
/// every point of `vset`, each with a validated witness.
pub fn buffer_neighborhoods(vset: &[Point], b: f64) -> Result<Vec<NeighborhoodCandidate>, SweepError> {
    Ok(dedup_candidates(buffer_candidates(vset, b)?))
}

/// Every validated candidate of the plain unit-circle sweep, before
/// deduplication.
pub fn unbuffered_candidates(vset: &[Point]) -> Result<Vec<NeighborhoodCandidate>, SweepError> {
    if vset.is_empty() {
        return Err(SweepError::Empty);
    }
    let tol = Tolerance::DEFAULT;
    let per_pivot: Vec<Vec<NeighborhoodCandidate>> = (0..vset.len())
        .into_par_iter()
        .map(|v| Ok(candidates_from_sweep(vset, &circle_events(vset, v)?, tol)))
        .collect::<Result<_, SweepError>>()?;
    let mut out = vec![exterior_candidate(vset, 1.5)];
    out.extend(per_pivot.into_iter().flatten());
    Ok(out)
}

/// All neighbor sets a new vertex can have, with no separation constraint.
pub fn unbuffered_neighborhoods(vset: &[Point]) -> Result<Vec<NeighborhoodCandidate>, SweepError> {
    Ok(dedup_candidates(unbuffered_candidates(vset)?))
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Candidates whose member set is not strictly contained in another's.
/// Duplicate sets collapse to their first occurrence.
pub fn maximal_candidates(cands: &[NeighborhoodCandidate]) -> Vec<NeighborhoodCandidate> {
    let unique = dedup_candidates(cands.to_vec());
    unique
        .iter()
        .filter(|c| !unique.iter().any(|o| is_strict_subset(&c.members, &o.members)))
        .cloned()
        .collect()
}
