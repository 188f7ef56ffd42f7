use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("invalid annulus radii inner={inner} outer={outer}")]
    InvalidAnnulus { inner: f64, outer: f64 },
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("coincident points at ({}, {})", .0.x, .0.y)]
    Coincident(Point),
    #[error("empty point set")]
    Empty,
    #[error("degenerate (collinear) point set")]
    Degenerate,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate vertices {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("mask length mismatch: expected {expected}, got {got}")]
    MaskLength { expected: usize, got: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("buffer {0} outside (0, 1)")]
    InvalidBuffer(f64),
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("empty vertex set")]
    Empty,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReliabilityError {
    #[error("graph too large for exact enumeration: {what} = {size} exceeds {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("per-item probabilities cover {got} items, graph has {expected}")]
    ProbabilityCount { expected: usize, got: usize },
    #[error("exact all-terminal reliability needs perfectly reliable vertices")]
    UnreliableVertices,
    #[error("sample count must be positive")]
    NoSamples,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("vertices {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("invalid spring configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no in-region placement at distance >= {buffer} from every vertex")]
    RegionSaturated { buffer: f64 },
    #[error("no connected placement found after {draws} random draws")]
    RejectionCap { draws: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Reliability(#[from] ReliabilityError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
