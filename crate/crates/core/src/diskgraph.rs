//! Unit disk graphs: points with edges between pairs closer than 1.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::geometry::{dist, Point};

/// Vertices with unit-distance adjacency. Adjacency is always derived from
/// the positions; the serialized form stores positions only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct DiskGraph {
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    points: Vec<Point>,
}

impl TryFrom<GraphFile> for DiskGraph {
    type Error = GraphError;
    fn try_from(file: GraphFile) -> Result<Self, GraphError> {
        DiskGraph::build(file.points)
    }
}

impl From<DiskGraph> for GraphFile {
    fn from(g: DiskGraph) -> Self {
        GraphFile { points: g.points }
    }
}

impl DiskGraph {
    /// O(n²) construction. Rejects non-finite and duplicate points.
    pub fn build(points: Vec<Point>) -> Result<Self, GraphError> {
        for p in &points {
            if !p.is_finite() {
                return Err(crate::error::GeometryError::NonFinite { x: p.x, y: p.y }.into());
            }
        }
        let n = points.len();
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist(points[i], points[j]);
                if d == 0.0 {
                    return Err(GraphError::DuplicatePoint(i, j));
                }
                if d < 1.0 {
                    edges.push((i, j));
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Ok(DiskGraph { points, edges, adjacency })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order. Edge indices used
    /// by [`SubgraphMask`] refer to this order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.len() && self.adjacency[u].contains(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Indices of all vertices within distance 1 of `v`, ascending.
    pub fn neighborhood(&self, v: usize) -> Result<&[usize], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::IndexOutOfRange { index: v, len: self.len() })
    }

    /// New graph with `p` appended as the last vertex.
    pub fn with_vertex(&self, p: Point) -> Result<Self, GraphError> {
        let mut points = self.points.clone();
        points.push(p);
        DiskGraph::build(points)
    }

    /// New graph with the same vertex order and moved positions.
    pub fn with_points(&self, points: Vec<Point>) -> Result<Self, GraphError> {
        DiskGraph::build(points)
    }

    /// Connectivity of the whole graph.
    pub fn is_connected(&self) -> bool {
        is_connected(self, &SubgraphMask::all_on(self))
    }
}

/// Which vertices and edges survive in a sampled subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgraphMask {
    vertex_on: Vec<bool>,
    edge_on: Vec<bool>,
}

impl SubgraphMask {
    pub fn all_on(g: &DiskGraph) -> Self {
        SubgraphMask { vertex_on: vec![true; g.len()], edge_on: vec![true; g.edge_count()] }
    }

    /// Edges incident to an off vertex are forced off.
    pub fn new(g: &DiskGraph, vertex_on: Vec<bool>, mut edge_on: Vec<bool>) -> Result<Self, GraphError> {
        if vertex_on.len() != g.len() {
            return Err(GraphError::MaskLength { expected: g.len(), got: vertex_on.len() });
        }
        if edge_on.len() != g.edge_count() {
            return Err(GraphError::MaskLength { expected: g.edge_count(), got: edge_on.len() });
        }
        for (on, &(u, v)) in edge_on.iter_mut().zip(g.edges()) {
            *on &= vertex_on[u] && vertex_on[v];
        }
        Ok(SubgraphMask { vertex_on, edge_on })
    }

    pub fn edges_only(g: &DiskGraph, edge_on: Vec<bool>) -> Result<Self, GraphError> {
        SubgraphMask::new(g, vec![true; g.len()], edge_on)
    }

    pub fn vertex_on(&self) -> &[bool] {
        &self.vertex_on
    }

    pub fn edge_on(&self) -> &[bool] {
        &self.edge_on
    }
}

/// True iff the on-vertices form a single component. Graphs with zero or one
/// on-vertex count as connected.
pub fn is_connected(g: &DiskGraph, mask: &SubgraphMask) -> bool {
    let alive = mask.vertex_on.iter().filter(|&&on| on).count();
    if alive <= 1 {
        return true;
    }
    let mut dsu = UnionFind::new(g.len());
    let mut components = alive;
    for (&(u, v), _) in g.edges().iter().zip(&mask.edge_on).filter(|(_, &on)| on) {
        if dsu.union(u, v) {
            components -= 1;
            if components == 1 {
                return true;
            }
        }
    }
    components == 1
}

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
