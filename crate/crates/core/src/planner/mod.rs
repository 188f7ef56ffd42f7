//! Formation planning: grow a seed ring by adding vertices one at a time,
//! either at random (optionally relaxed by the spring layout) or at the
//! reliability-maximizing buffered placement, and score the result by
//! all-terminal reliability and largest empty circle.

pub mod report;

use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskgraph::DiskGraph;
use crate::error::{GeometryError, PlanError};
use crate::geometry::{convex_hull, dist, in_convex_polygon, largest_empty_circle, Circle, Point, Tolerance};
use crate::layout::{relax, MoveMode, SpringConfig};
use crate::reliability::{rel_a_mc, rel_mc, FailureModel, Probabilities, ReliabilityEstimate};
use crate::sweep::{buffer_candidates, maximal_candidates, NeighborhoodCandidate};

/// Draw budget for conditioned random placement.
pub const REJECTION_CAP: u64 = 1_000_000;

/// Closed convex placement region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk { center: Point, radius: f64 },
    /// Counterclockwise vertex list.
    ConvexPolygon { vertices: Vec<Point> },
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self, PlanError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(PlanError::Geometry(GeometryError::InvalidRadius(radius)));
        }
        Ok(Region::Disk { center, radius })
    }

    /// Convex hull of `vertices`; needs three non-collinear points.
    pub fn polygon(vertices: &[Point]) -> Result<Self, PlanError> {
        let hull = convex_hull(vertices);
        if hull.len() < 3 {
            return Err(PlanError::Geometry(GeometryError::Degenerate));
        }
        Ok(Region::ConvexPolygon { vertices: hull })
    }

    pub fn contains(&self, p: Point) -> bool {
        let tol = Tolerance::DEFAULT;
        match self {
            Region::Disk { center, radius } => dist(*center, p) <= radius + tol.eps,
            Region::ConvexPolygon { vertices } => in_convex_polygon(vertices, p, tol),
        }
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bounds(&self) -> (Point, Point) {
        match self {
            Region::Disk { center, radius } => {
                (Point::new(center.x - radius, center.y - radius), Point::new(center.x + radius, center.y + radius))
            }
            Region::ConvexPolygon { vertices } => {
                let mut lo = vertices[0];
                let mut hi = vertices[0];
                for v in vertices {
                    lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
        }
    }

    /// Uniform point in the region.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Region::Disk { center, radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                center.polar_offset(r, 2.0 * PI * rng.random::<f64>())
            }
            Region::ConvexPolygon { .. } => {
                let (lo, hi) = self.bounds();
                loop {
                    let p = Point::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
                    if self.contains(p) {
                        return p;
                    }
                }
            }
        }
    }
}

/// Regular `n`-gon centered at the origin with the given side length; the
/// first vertex lies on the positive x-axis.
pub fn ring_points(n: usize, side: f64) -> Result<Vec<Point>, PlanError> {
    if n < 3 {
        return Err(PlanError::Config(format!("ring needs at least 3 vertices, got {n}")));
    }
    if !(side > 0.0 && side.is_finite()) {
        return Err(PlanError::Config(format!("ring side must be positive, got {side}")));
    }
    let r = ring_radius(n, side);
    Ok((0..n).map(|i| Point::ORIGIN.polar_offset(r, 2.0 * PI * i as f64 / n as f64)).collect())
}

pub fn ring_radius(n: usize, side: f64) -> f64 {
    side / (2.0 * (PI / n as f64).sin())
}

pub fn seed_ring(n: usize, side: f64) -> Result<DiskGraph, PlanError> {
    Ok(DiskGraph::build(ring_points(n, side)?)?)
}

/// Appends a uniform point of `region` conditioned on lying within unit
/// distance of some existing vertex.
pub fn add_random<R: Rng + ?Sized>(g: &DiskGraph, region: &Region, rng: &mut R) -> Result<DiskGraph, PlanError> {
    for _ in 0..REJECTION_CAP {
        let p = region.sample(rng);
        let mut near = false;
        let mut coincident = false;
        for &q in g.points() {
            let d = dist(p, q);
            near |= d < 1.0;
            coincident |= d == 0.0;
        }
        if near && !coincident {
            return Ok(g.with_vertex(p)?);
        }
    }
    Err(PlanError::RejectionCap { draws: REJECTION_CAP })
}

/// Connectivity measure used to rank placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    AllTerminal,
    Residual,
}

fn estimate(g: &DiskGraph, model: &FailureModel, objective: Objective, samples: u64, seed: u64) -> Result<ReliabilityEstimate, PlanError> {
    Ok(match objective {
        Objective::AllTerminal => rel_a_mc(g, model, samples, seed)?,
        Objective::Residual => rel_mc(g, model, samples, seed)?,
    })
}

/// The placement picked by [`add_best_buffered`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub candidate: NeighborhoodCandidate,
    pub estimate: ReliabilityEstimate,
    pub considered: usize,
}

/// Largest empty circle over the hull of `points`, or zero radius when the
/// hull is degenerate.
pub fn lec_of(points: &[Point]) -> Circle {
    let hull = convex_hull(points);
    largest_empty_circle(points, &hull).unwrap_or(Circle { center: points[0], radius: 0.0 })
}

/// Adds the in-region vertex at distance more than `b` from every vertex
/// whose neighborhood maximizes estimated reliability. All candidates share
/// `seed`, so their estimates use common random numbers. Ties go to the
/// smaller resulting largest empty circle, then to the earlier candidate.
pub fn add_best_buffered(
    g: &DiskGraph,
    region: &Region,
    b: f64,
    model: &FailureModel,
    mc_samples: u64,
    seed: u64,
) -> Result<(DiskGraph, Placement), PlanError> {
    add_best_buffered_with(g, region, b, model, Objective::AllTerminal, mc_samples, seed)
}

pub fn add_best_buffered_with(
    g: &DiskGraph,
    region: &Region,
    b: f64,
    model: &FailureModel,
    objective: Objective,
    mc_samples: u64,
    seed: u64,
) -> Result<(DiskGraph, Placement), PlanError> {
    let in_region: Vec<NeighborhoodCandidate> =
        buffer_candidates(g.points(), b)?.into_iter().filter(|c| region.contains(c.witness)).collect();
    let candidates = maximal_candidates(&in_region);
    if candidates.is_empty() {
        return Err(PlanError::RegionSaturated { buffer: b });
    }

    let extended_model = |h: &DiskGraph| FailureModel {
        edge_p: match &model.edge_p {
            Probabilities::Uniform(p) => Probabilities::Uniform(*p),
            Probabilities::PerItem(_) => Probabilities::Uniform(mean_probability(&model.edge_p, g.edge_count())),
        },
        vertex_p: match &model.vertex_p {
            Probabilities::Uniform(p) => Probabilities::Uniform(*p),
            Probabilities::PerItem(ps) => {
                let mut ps = ps.clone();
                ps.resize(h.len(), 1.0);
                Probabilities::PerItem(ps)
            }
        },
    };

    let scored: Vec<(DiskGraph, ReliabilityEstimate)> = candidates
        .par_iter()
        .map(|c| {
            let h = g.with_vertex(c.witness)?;
            let est = estimate(&h, &extended_model(&h), objective, mc_samples, seed)?;
            Ok((h, est))
        })
        .collect::<Result<_, PlanError>>()?;

    let best_p = scored.iter().map(|(_, e)| e.p_hat).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..scored.len()).filter(|&i| scored[i].1.p_hat == best_p).collect();
    let pick = if tied.len() == 1 {
        tied[0]
    } else {
        let lec: Vec<f64> = tied.iter().map(|&i| lec_of(scored[i].0.points()).radius).collect();
        let best_lec = lec.iter().copied().fold(f64::INFINITY, f64::min);
        tied[lec.iter().position(|&r| r == best_lec).expect("nonempty tie set")]
    };
    let (h, est) = scored.into_iter().nth(pick).expect("pick in range");
    Ok((h, Placement { candidate: candidates[pick].clone(), estimate: est, considered: candidates.len() }))
}

// Per-edge probabilities are indexed by edge order, which changes when a
// vertex is added; new graphs fall back to the mean probability.
fn mean_probability(p: &Probabilities, count: usize) -> f64 {
    match p {
        Probabilities::Uniform(p) => *p,
        Probabilities::PerItem(ps) if !ps.is_empty() => ps.iter().sum::<f64>() / ps.len() as f64,
        Probabilities::PerItem(_) => {
            debug_assert_eq!(count, 0);
            1.0
        }
    }
}

/// How relaxation picks the optimal pair distance `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpringScale {
    /// `sqrt(frame area / n)`, the layout default.
    FrameArea,
    /// Largest absolute coordinate over `sqrt(n)`, as NetworkX's spring
    /// layout does when some positions are fixed. With the frame-area scale
    /// almost every all-at-once round around a fixed ring is rejected.
    #[default]
    DomainSize,
}

impl SpringScale {
    fn k_for(self, points: &[Point]) -> Option<f64> {
        match self {
            SpringScale::FrameArea => None,
            SpringScale::DomainSize => {
                let dom = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
                Some(if dom == 0.0 { 1.0 } else { dom } / (points.len() as f64).sqrt())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Random, conditioned on connectivity.
    M1,
    /// Random, then spring relaxation with the seed ring fixed.
    M2,
    /// Buffered reliability-maximizing placement.
    M3,
    /// Buffered placement, then spring relaxation with the seed ring fixed.
    M4,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::M1, Method::M2, Method::M3, Method::M4];

    pub fn is_buffered(self) -> bool {
        matches!(self, Method::M3 | Method::M4)
    }

    pub fn relaxes(self) -> bool {
        matches!(self, Method::M2 | Method::M4)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "M1" => Ok(Method::M1),
            "M2" => Ok(Method::M2),
            "M3" => Ok(Method::M3),
            "M4" => Ok(Method::M4),
            other => Err(format!("unknown method {other:?}, expected M1..M4")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedFormation {
    pub ring_n: usize,
    pub side: f64,
}

fn default_relax_iterations() -> usize {
    50
}

fn default_vertex_p() -> f64 {
    1.0
}

/// Experiment parameters. The JSON form uses these field names; fields
/// after `mc_samples_report` are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed_formation: SeedFormation,
    pub additions: usize,
    pub buffer_b: f64,
    pub edge_p: f64,
    pub trials: usize,
    pub method: Method,
    pub rng_seed: u64,
    pub mc_samples_opt: u64,
    pub mc_samples_report: u64,
    #[serde(default = "default_relax_iterations")]
    pub relax_iterations: usize,
    #[serde(default)]
    pub relax_mode: MoveMode,
    #[serde(default)]
    pub relax_k: SpringScale,
    #[serde(default)]
    pub objective: Objective,
    #[serde(default = "default_vertex_p")]
    pub vertex_p: f64,
    /// Defaults to the disk circumscribing the seed ring.
    #[serde(default)]
    pub region: Option<Region>,
}

impl Default for ExperimentConfig {
    /// Fifteen-vertex ring of side 0.9, fifteen additions, buffer 0.65,
    /// edge reliability 0.9.
    fn default() -> Self {
        ExperimentConfig {
            seed_formation: SeedFormation { ring_n: 15, side: 0.9 },
            additions: 15,
            buffer_b: 0.65,
            edge_p: 0.9,
            trials: 100,
            method: Method::M3,
            rng_seed: 1,
            mc_samples_opt: 10_000,
            mc_samples_report: 100_000,
            relax_iterations: default_relax_iterations(),
            relax_mode: MoveMode::AllAtOnce,
            relax_k: SpringScale::DomainSize,
            objective: Objective::AllTerminal,
            vertex_p: default_vertex_p(),
            region: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |msg: String| Err(PlanError::Config(msg));
        if !(self.buffer_b > 0.0 && self.buffer_b < 1.0) {
            return bad(format!("buffer_b must lie in (0, 1), got {}", self.buffer_b));
        }
        if !(self.edge_p > 0.0 && self.edge_p <= 1.0) {
            return bad(format!("edge_p must lie in (0, 1], got {}", self.edge_p));
        }
        if !(0.0..=1.0).contains(&self.vertex_p) {
            return bad(format!("vertex_p must lie in [0, 1], got {}", self.vertex_p));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.mc_samples_opt == 0 || self.mc_samples_report == 0 {
            return bad("sample counts must be positive".into());
        }
        if self.relax_iterations == 0 && self.method.relaxes() {
            return bad("relax_iterations must be at least 1".into());
        }
        ring_points(self.seed_formation.ring_n, self.seed_formation.side)?;
        Ok(())
    }

    pub fn region(&self) -> Region {
        self.region.clone().unwrap_or_else(|| Region::Disk {
            center: Point::ORIGIN,
            radius: ring_radius(self.seed_formation.ring_n, self.seed_formation.side),
        })
    }

    pub fn failure_model(&self) -> FailureModel {
        FailureModel { edge_p: Probabilities::Uniform(self.edge_p), vertex_p: Probabilities::Uniform(self.vertex_p) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditionRecord {
    /// 1-based count of added vertices.
    pub step: usize,
    pub point: Point,
    /// Neighbors at insertion time.
    pub neighbors: Vec<usize>,
    /// Smallest distance to a pre-existing vertex at insertion time.
    pub clearance: f64,
    /// Candidates compared (buffered methods only).
    pub candidates: usize,
    /// Reliability of the graph after this step (and after relaxation).
    pub reliability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrialOutcome {
    Completed,
    Saturated { after: usize },
    RejectionCap { after: usize },
}

impl TrialOutcome {
    pub fn failed(&self) -> bool {
        !matches!(self, TrialOutcome::Completed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub method: Method,
    pub outcome: TrialOutcome,
    pub final_points: Vec<Point>,
    pub rel_a: ReliabilityEstimate,
    pub lec_radius: f64,
    pub lec_center: Point,
    /// Reliability of the seed formation before any addition.
    pub initial_reliability: f64,
    pub additions: Vec<AdditionRecord>,
}

impl TrialResult {
    /// Reliability after 0, 1, 2, … additions.
    pub fn curve(&self) -> Vec<f64> {
        std::iter::once(self.initial_reliability).chain(self.additions.iter().map(|a| a.reliability)).collect()
    }
}

fn trial_rng(cfg: &ExperimentConfig, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(trial as u64);
    rng
}

/// One trial with its own random stream derived from `cfg.rng_seed`.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialResult, PlanError> {
    cfg.validate()?;
    let region = cfg.region();
    let model = cfg.failure_model();
    let ring_n = cfg.seed_formation.ring_n;
    let mut rng = trial_rng(cfg, trial);
    let mut g = seed_ring(ring_n, cfg.seed_formation.side)?;
    let spring = SpringConfig {
        iterations: cfg.relax_iterations.max(1),
        mode: cfg.relax_mode,
        ..SpringConfig::default()
    }
    .with_fixed(0..ring_n);

    let initial_reliability = estimate(&g, &model, cfg.objective, cfg.mc_samples_opt, rng.next_u64())?.p_hat;
    let mut additions = Vec::with_capacity(cfg.additions);
    let mut outcome = TrialOutcome::Completed;

    for step in 1..=cfg.additions {
        let mc_seed = rng.next_u64();
        let (next, candidates) = if cfg.method.is_buffered() {
            match add_best_buffered_with(&g, &region, cfg.buffer_b, &model, cfg.objective, cfg.mc_samples_opt, mc_seed) {
                Ok((h, placement)) => (h, placement.considered),
                Err(PlanError::RegionSaturated { .. }) => {
                    outcome = TrialOutcome::Saturated { after: step - 1 };
                    break;
                }
                Err(e) => return Err(e),
            }
        } else {
            match add_random(&g, &region, &mut rng) {
                Ok(h) => (h, 0),
                Err(PlanError::RejectionCap { .. }) => {
                    outcome = TrialOutcome::RejectionCap { after: step - 1 };
                    break;
                }
                Err(e) => return Err(e),
            }
        };
        let point = next.point(next.len() - 1);
        let clearance = g.points().iter().map(|&q| dist(point, q)).fold(f64::INFINITY, f64::min);
        let neighbors = next.neighborhood(next.len() - 1)?.to_vec();
        g = if cfg.method.relaxes() {
            let spring = SpringConfig { k_opt: cfg.relax_k.k_for(next.points()), ..spring.clone() };
            next.with_points(relax(&next, &spring)?)?
        } else {
            next
        };
        let reliability = estimate(&g, &model, cfg.objective, cfg.mc_samples_opt, mc_seed)?.p_hat;
        additions.push(AdditionRecord { step, point, neighbors, clearance, candidates, reliability });
    }

    let rel_a = estimate(&g, &model, cfg.objective, cfg.mc_samples_report, rng.next_u64())?;
    let lec = lec_of(g.points());
    Ok(TrialResult {
        trial,
        method: cfg.method,
        outcome,
        final_points: g.points().to_vec(),
        rel_a,
        lec_radius: lec.radius,
        lec_center: lec.center,
        initial_reliability,
        additions,
    })
}

/// A single trial (trial index 0).
pub fn run_method(cfg: &ExperimentConfig) -> Result<TrialResult, PlanError> {
    run_trial(cfg, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub additions: usize,
    pub mean: f64,
    pub sd: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub method: Method,
    pub mean_rel_a: f64,
    pub sd_rel_a: f64,
    pub mean_lec: f64,
    pub sd_lec: f64,
    pub failed_trials: usize,
    pub curves: Vec<CurvePoint>,
    pub trials: Vec<TrialResult>,
}

impl BatchSummary {
    pub fn completed(&self) -> impl Iterator<Item = &TrialResult> {
        self.trials.iter().filter(|t| !t.outcome.failed())
    }

    /// More than half of the trials failed.
    pub fn saturation_dominated(&self) -> bool {
        2 * self.failed_trials > self.trials.len()
    }
}

/// Sample mean and standard deviation (`n − 1` denominator).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs `trials` independent trials. Failed trials are excluded from the
/// means and counted in `failed_trials`.
pub fn run_batch(cfg: &ExperimentConfig, trials: usize) -> Result<BatchSummary, PlanError> {
    cfg.validate()?;
    if trials == 0 {
        return Err(PlanError::Config("trials must be at least 1".into()));
    }
    let results: Vec<TrialResult> = (0..trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<_, _>>()?;
    Ok(summarize(cfg.method, results))
}

pub fn summarize(method: Method, trials: Vec<TrialResult>) -> BatchSummary {
    let ok: Vec<&TrialResult> = trials.iter().filter(|t| !t.outcome.failed()).collect();
    let (mean_rel_a, sd_rel_a) = mean_sd(&ok.iter().map(|t| t.rel_a.p_hat).collect::<Vec<_>>());
    let (mean_lec, sd_lec) = mean_sd(&ok.iter().map(|t| t.lec_radius).collect::<Vec<_>>());
    let curves_src: Vec<Vec<f64>> = ok.iter().map(|t| t.curve()).collect();
    let steps = curves_src.iter().map(Vec::len).max().unwrap_or(0);
    let curves = (0..steps)
        .map(|s| {
            let column: Vec<f64> = curves_src.iter().filter_map(|c| c.get(s).copied()).collect();
            let (mean, sd) = mean_sd(&column);
            CurvePoint { additions: s, mean, sd, trials: column.len() }
        })
        .collect();
    BatchSummary {
        method,
        mean_rel_a,
        sd_rel_a,
        mean_lec,
        sd_lec,
        failed_trials: trials.len() - ok.len(),
        curves,
        trials,
    }
}
