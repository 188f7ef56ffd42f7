//! Neighborhood enumeration for a new vertex of a unit disk graph, with and
//! without a buffer radius, plus the reliability, layout and planning code
//! built on top of it.
//!
//! A vertex placed at `c` is adjacent to every existing vertex closer than 1.
//! [`sweep::buffer_neighborhoods`] lists every neighborhood achievable by a
//! center farther than `b` from all vertices, each with a witness center.

pub mod diskgraph;
pub mod error;
pub mod geometry;
pub mod layout;
pub mod oracle;
pub mod planner;
pub mod reliability;
pub mod sweep;

pub use diskgraph::{DiskGraph, SubgraphMask};
pub use error::{GeometryError, GraphError, LayoutError, PlanError, ReliabilityError, SweepError};
pub use geometry::{Annulus, Circle, Point, Tolerance};
pub use layout::{relax, MoveMode, SpringConfig};
pub use planner::{ExperimentConfig, Method, Region, TrialResult};
pub use reliability::{rel_a_exact, rel_a_mc, rel_exact, rel_mc, FailureModel, Probabilities, ReliabilityEstimate};
pub use sweep::{buffer_neighborhoods, unbuffered_neighborhoods, NeighborhoodCandidate};
