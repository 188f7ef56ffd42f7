//! All-terminal reliability and residual connectedness: exact enumeration for
//! small graphs, seeded Monte Carlo with Wilson intervals otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskgraph::{DiskGraph, UnionFind};
use crate::error::ReliabilityError;

/// Largest edge count accepted by [`rel_a_exact`].
pub const MAX_EXACT_EDGES: usize = 25;
/// Largest `n + m` accepted by [`rel_exact`].
pub const MAX_EXACT_ITEMS: usize = 22;

const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probabilities {
    Uniform(f64),
    /// Indexed like [`DiskGraph::edges`] or vertex order.
    PerItem(Vec<f64>),
}

impl Probabilities {
    fn get(&self, i: usize) -> f64 {
        match self {
            Probabilities::Uniform(p) => *p,
            Probabilities::PerItem(ps) => ps[i],
        }
    }

    fn validate(&self, count: usize) -> Result<(), ReliabilityError> {
        let check = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(ReliabilityError::InvalidProbability(p))
            }
        };
        match self {
            Probabilities::Uniform(p) => check(*p),
            Probabilities::PerItem(ps) => {
                if ps.len() != count {
                    return Err(ReliabilityError::ProbabilityCount { expected: count, got: ps.len() });
                }
                ps.iter().try_for_each(|&p| check(p))
            }
        }
    }

    fn is_certain(&self) -> bool {
        match self {
            Probabilities::Uniform(p) => *p == 1.0,
            Probabilities::PerItem(ps) => ps.iter().all(|&p| p == 1.0),
        }
    }
}

/// Operation probabilities for edges and vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureModel {
    pub edge_p: Probabilities,
    pub vertex_p: Probabilities,
}

impl FailureModel {
    /// Every edge works with probability `p`; vertices never fail.
    pub fn uniform(p: f64) -> Result<Self, ReliabilityError> {
        let m = FailureModel { edge_p: Probabilities::Uniform(p), vertex_p: Probabilities::Uniform(1.0) };
        m.edge_p.validate(0)?;
        Ok(m)
    }

    pub fn with_vertex_p(mut self, vertex_p: Probabilities) -> Self {
        self.vertex_p = vertex_p;
        self
    }

    pub fn validate(&self, g: &DiskGraph) -> Result<(), ReliabilityError> {
        self.edge_p.validate(g.edge_count())?;
        self.vertex_p.validate(g.len())
    }
}

/// Monte Carlo estimate of a connectivity probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityEstimate {
    pub p_hat: f64,
    pub samples: u64,
    /// Half-width of the 95% Wilson score interval.
    pub ci_half_width: f64,
    pub seed: u64,
}

impl ReliabilityEstimate {
    fn from_counts(successes: u64, samples: u64, seed: u64) -> Self {
        let p_hat = successes as f64 / samples as f64;
        let (lo, hi) = wilson(p_hat, samples);
        ReliabilityEstimate { p_hat, samples, ci_half_width: (hi - lo) / 2.0, seed }
    }

    /// 95% Wilson score interval `(low, high)`.
    pub fn wilson_interval(&self) -> (f64, f64) {
        wilson(self.p_hat, self.samples)
    }

    pub fn covers(&self, value: f64) -> bool {
        let (lo, hi) = self.wilson_interval();
        value >= lo && value <= hi
    }
}

fn wilson(p_hat: f64, samples: u64) -> (f64, f64) {
    let n = samples as f64;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

// ---- exact enumeration -------------------------------------------------

fn bitmask_connected(adj: &[u32], alive: u32) -> bool {
    if alive.count_ones() <= 1 {
        return true;
    }
    let start = alive.trailing_zeros();
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen & alive == alive
}

/// Sum over all subsets of `edges` of P(subset) · [alive vertices connected].
struct EdgeEnumeration<'a> {
    edges: &'a [(usize, usize)],
    probs: &'a [f64],
    alive: u32,
    needed: usize,
    adj: Vec<u32>,
}

impl EdgeEnumeration<'_> {
    fn run(&mut self, i: usize, chosen: usize, weight: f64) -> f64 {
        if weight == 0.0 || chosen + (self.edges.len() - i) < self.needed {
            return 0.0;
        }
        if i == self.edges.len() {
            return if bitmask_connected(&self.adj, self.alive) { weight } else { 0.0 };
        }
        let (u, v) = self.edges[i];
        let p = self.probs[i];
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        let with = self.run(i + 1, chosen + 1, weight * p);
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        with + self.run(i + 1, chosen, weight * (1.0 - p))
    }
}

fn enumerate_edges(n: usize, alive: u32, edges: &[(usize, usize)], probs: &[f64]) -> f64 {
    let alive_count = alive.count_ones() as usize;
    let mut e = EdgeEnumeration { edges, probs, alive, needed: alive_count.saturating_sub(1), adj: vec![0; n] };
    e.run(0, 0, 1.0)
}

/// Exact all-terminal reliability by enumerating every edge subset.
/// Vertices must be perfectly reliable and `m ≤ 25`.
pub fn rel_a_exact(g: &DiskGraph, model: &FailureModel) -> Result<f64, ReliabilityError> {
    model.validate(g)?;
    if !model.vertex_p.is_certain() {
        return Err(ReliabilityError::UnreliableVertices);
    }
    let m = g.edge_count();
    if m > MAX_EXACT_EDGES {
        return Err(ReliabilityError::TooLarge { what: "edges", size: m, limit: MAX_EXACT_EDGES });
    }
    if g.len() <= 1 {
        return Ok(1.0);
    }
    // monotone: a disconnected graph stays disconnected under edge failures
    if !g.is_connected() {
        return Ok(0.0);
    }
    let n = g.len();
    let probs: Vec<f64> = (0..m).map(|i| model.edge_p.get(i)).collect();
    let alive = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(enumerate_edges(n, alive, g.edges(), &probs))
}

/// Exact residual connectedness: vertices fail first, then the edges
/// among survivors. Requires `n + m ≤ 22`.
pub fn rel_exact(g: &DiskGraph, model: &FailureModel) -> Result<f64, ReliabilityError> {
    model.validate(g)?;
    let (n, m) = (g.len(), g.edge_count());
    if n + m > MAX_EXACT_ITEMS {
        return Err(ReliabilityError::TooLarge { what: "vertices + edges", size: n + m, limit: MAX_EXACT_ITEMS });
    }
    let edge_probs: Vec<f64> = (0..m).map(|i| model.edge_p.get(i)).collect();
    let mut total = 0.0;
    for alive in 0u32..(1u32 << n) {
        let mut weight = 1.0;
        for v in 0..n {
            let p = model.vertex_p.get(v);
            weight *= if alive & (1 << v) != 0 { p } else { 1.0 - p };
        }
        if weight == 0.0 {
            continue;
        }
        let (edges, probs): (Vec<(usize, usize)>, Vec<f64>) = g
            .edges()
            .iter()
            .zip(&edge_probs)
            .filter(|(&(u, v), _)| alive & (1 << u) != 0 && alive & (1 << v) != 0)
            .map(|(&e, &p)| (e, p))
            .unzip();
        total += weight * enumerate_edges(n, alive, &edges, &probs);
    }
    Ok(total)
}

// ---- Monte Carlo -------------------------------------------------------

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample stream base; draws for individual edges and vertices are
/// derived from it by key, so adding an edge never shifts the draws of others.
fn sample_base(seed: u64, sample: u64) -> u64 {
    splitmix(splitmix(seed) ^ sample.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

fn unit_draw(base: u64, key: u64) -> f64 {
    (splitmix(base ^ key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stable key for the unordered pair `(u, v)`, independent of the graph.
fn edge_key(u: usize, v: usize) -> u64 {
    let (lo, hi) = if u < v { (u as u64, v as u64) } else { (v as u64, u as u64) };
    hi * (hi.wrapping_sub(1)) / 2 + lo
}

fn vertex_key(v: usize) -> u64 {
    (1 << 63) | v as u64
}

struct Sampler<'a> {
    g: &'a DiskGraph,
    model: &'a FailureModel,
    edge_keys: Vec<u64>,
    vertex_failures: bool,
}

impl Sampler<'_> {
    fn count(&self, seed: u64, range: std::ops::Range<u64>) -> u64 {
        let n = self.g.len();
        let mut dsu = UnionFind::new(n);
        let mut alive = vec![true; n];
        let mut degree = vec![0u32; n];
        let mut kept: Vec<(usize, usize)> = Vec::with_capacity(self.g.edge_count());
        let mut successes = 0;
        for s in range {
            let base = sample_base(seed, s);
            let mut alive_count = n;
            if self.vertex_failures {
                for (v, a) in alive.iter_mut().enumerate() {
                    *a = unit_draw(base, vertex_key(v)) < self.model.vertex_p.get(v);
                }
                alive_count = alive.iter().filter(|&&a| a).count();
            }
            if alive_count <= 1 {
                successes += 1;
                continue;
            }
            kept.clear();
            degree.fill(0);
            for (i, (&(u, v), &key)) in self.g.edges().iter().zip(&self.edge_keys).enumerate() {
                if alive[u] && alive[v] && unit_draw(base, key) < self.model.edge_p.get(i) {
                    kept.push((u, v));
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
            if (0..n).any(|v| alive[v] && degree[v] == 0) || kept.len() + 1 < alive_count {
                continue;
            }
            dsu.reset();
            let mut components = alive_count;
            for &(u, v) in &kept {
                if dsu.union(u, v) {
                    components -= 1;
                }
            }
            if components == 1 {
                successes += 1;
            }
        }
        successes
    }
}

const CHUNK: u64 = 4096;

fn estimate(g: &DiskGraph, model: &FailureModel, samples: u64, seed: u64, vertex_failures: bool) -> Result<ReliabilityEstimate, ReliabilityError> {
    if samples == 0 {
        return Err(ReliabilityError::NoSamples);
    }
    model.validate(g)?;
    let sampler = Sampler {
        g,
        model,
        edge_keys: g.edges().iter().map(|&(u, v)| edge_key(u, v)).collect(),
        vertex_failures: vertex_failures && !model.vertex_p.is_certain(),
    };
    let chunks = samples.div_ceil(CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| sampler.count(seed, c * CHUNK..((c + 1) * CHUNK).min(samples)))
        .sum();
    Ok(ReliabilityEstimate::from_counts(successes, samples, seed))
}

/// Fraction of edge-sampled subgraphs that are connected. Deterministic in
/// `seed`; the draw for an edge depends only on `(seed, sample, endpoints)`,
/// so estimates for graphs sharing edges use common random numbers.
pub fn rel_a_mc(g: &DiskGraph, model: &FailureModel, samples: u64, seed: u64) -> Result<ReliabilityEstimate, ReliabilityError> {
    estimate(g, model, samples, seed, false)
}

/// Two-stage sampling: vertices first, then edges among survivors.
pub fn rel_mc(g: &DiskGraph, model: &FailureModel, samples: u64, seed: u64) -> Result<ReliabilityEstimate, ReliabilityError> {
    estimate(g, model, samples, seed, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn graph(raw: &[(f64, f64)]) -> DiskGraph {
        DiskGraph::build(raw.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn triangle() -> DiskGraph {
        graph(&[(0.0, 0.0), (0.5, 0.0), (0.25, 0.4)])
    }

    fn square() -> DiskGraph {
        graph(&[(0.0, 0.0), (0.9, 0.0), (0.9, 0.9), (0.0, 0.9)])
    }

    fn path3() -> DiskGraph {
        graph(&[(0.0, 0.0), (0.8, 0.0), (1.6, 0.0)])
    }

    #[test]
    fn exact_small_graphs() {
        let m = FailureModel::uniform(0.9).unwrap();
        let edge = graph(&[(0.0, 0.0), (0.5, 0.0)]);
        assert!((rel_a_exact(&edge, &m).unwrap() - 0.9).abs() < 1e-15);
        assert!((rel_a_exact(&triangle(), &m).unwrap() - 0.972).abs() < 1e-12);
        assert_eq!(square().edge_count(), 4);
        assert!((rel_a_exact(&square(), &m).unwrap() - 0.9477).abs() < 1e-12);
    }

    #[test]
    fn exact_rejects_large_or_unreliable_vertices() {
        let pts: Vec<Point> = (0..10).flat_map(|i| (0..3).map(move |j| Point::new(i as f64 * 0.6, j as f64 * 0.6))).collect();
        let g = DiskGraph::build(pts).unwrap();
        assert!(g.edge_count() > MAX_EXACT_EDGES);
        let m = FailureModel::uniform(0.9).unwrap();
        assert!(matches!(rel_a_exact(&g, &m), Err(ReliabilityError::TooLarge { .. })));
        let mv = m.with_vertex_p(Probabilities::Uniform(0.5));
        assert_eq!(rel_a_exact(&triangle(), &mv), Err(ReliabilityError::UnreliableVertices));
    }

    #[test]
    fn residual_connectedness() {
        let single = graph(&[(0.0, 0.0)]);
        let m = FailureModel::uniform(0.9).unwrap().with_vertex_p(Probabilities::Uniform(0.5));
        assert_eq!(rel_exact(&single, &m).unwrap(), 1.0);

        let edge = graph(&[(0.0, 0.0), (0.5, 0.0)]);
        let m = FailureModel::uniform(0.9).unwrap();
        assert!((rel_exact(&edge, &m).unwrap() - 0.9).abs() < 1e-15);

        // fails only when both ends survive and the middle does not
        let m = FailureModel::uniform(1.0).unwrap().with_vertex_p(Probabilities::Uniform(0.9));
        let expected = 1.0 - 0.9 * 0.9 * 0.1;
        assert!((rel_exact(&path3(), &m).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn invalid_probability_rejected() {
        assert_eq!(FailureModel::uniform(1.5), Err(ReliabilityError::InvalidProbability(1.5)));
        let m = FailureModel { edge_p: Probabilities::PerItem(vec![0.5]), vertex_p: Probabilities::Uniform(1.0) };
        assert!(matches!(rel_a_exact(&triangle(), &m), Err(ReliabilityError::ProbabilityCount { .. })));
    }

    #[test]
    fn mc_degenerate_cases() {
        let m = FailureModel::uniform(1.0).unwrap();
        let est = rel_a_mc(&square(), &m, 1000, 7).unwrap();
        assert_eq!(est.p_hat, 1.0);
        let split = graph(&[(0.0, 0.0), (5.0, 0.0)]);
        let est = rel_a_mc(&split, &FailureModel::uniform(0.9).unwrap(), 1000, 7).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(rel_a_mc(&split, &m, 0, 7), Err(ReliabilityError::NoSamples));
    }

    #[test]
    fn mc_triangle_close_to_exact() {
        let m = FailureModel::uniform(0.9).unwrap();
        let est = rel_a_mc(&triangle(), &m, 100_000, 11).unwrap();
        assert!((est.p_hat - 0.972).abs() < 0.003, "{est:?}");
        assert!(est.covers(0.972));
    }

    #[test]
    fn mc_is_deterministic() {
        let m = FailureModel::uniform(0.8).unwrap();
        assert_eq!(rel_a_mc(&square(), &m, 20_000, 3).unwrap(), rel_a_mc(&square(), &m, 20_000, 3).unwrap());
        assert_ne!(rel_a_mc(&square(), &m, 20_000, 3).unwrap().p_hat, rel_a_mc(&square(), &m, 20_000, 4).unwrap().p_hat);
    }

    #[test]
    fn rel_mc_reduces_to_rel_a_mc() {
        let m = FailureModel::uniform(0.8).unwrap();
        assert_eq!(rel_mc(&square(), &m, 10_000, 5).unwrap(), rel_a_mc(&square(), &m, 10_000, 5).unwrap());
        let single = graph(&[(0.0, 0.0)]);
        let mv = m.with_vertex_p(Probabilities::Uniform(0.3));
        assert_eq!(rel_mc(&single, &mv, 1000, 5).unwrap().p_hat, 1.0);
    }

    #[test]
    fn rel_mc_path_matches_exact() {
        let m = FailureModel::uniform(0.85).unwrap().with_vertex_p(Probabilities::Uniform(0.9));
        let exact = rel_exact(&path3(), &m).unwrap();
        let est = rel_mc(&path3(), &m, 100_000, 17).unwrap();
        assert!(est.covers(exact), "{est:?} vs {exact}");
    }

    #[test]
    fn wilson_interval_at_extremes() {
        let e = ReliabilityEstimate::from_counts(100, 100, 0);
        let (lo, hi) = e.wilson_interval();
        assert_eq!(hi, 1.0);
        assert!(lo > 0.95 && lo < 1.0);
        assert!(e.ci_half_width > 0.0);
    }

    #[test]
    fn edge_keys_are_pair_stable() {
        assert_eq!(edge_key(2, 5), edge_key(5, 2));
        let mut keys: Vec<u64> = (0..20).flat_map(|v| (0..v).map(move |u| edge_key(u, v))).collect();
        let len = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), len);
    }
}
