//! Receding-horizon path planning over lattice graphs with lexicographic
//! (hierarchically ranked) cost minimization.
//!
//! The library is organized bottom-up:
//!
//! - [`geometry`]: planar primitives (poses, polylines, projections, obstacle sets)
//! - [`costs`]: the risk / heading / distance cost hierarchy and cost-vector ordering
//! - [`graph`]: roll-out / roll-in lattice graph generation along a reference path
//! - [`search`]: lexicographic Dijkstra, naive and heap variants, plus a brute-force oracle
//! - [`planner`]: the receding-horizon replanning loop
//! - [`sim`]: a deterministic 2D scenario simulator closing the loop around the planner
//! - [`bench`]: runtime-scaling measurement harness

pub mod bench;
pub mod costs;
pub mod geometry;
pub mod graph;
pub mod planner;
pub mod search;
pub mod sim;

pub use costs::{CostConfig, CostVector, Criterion};
pub use geometry::{ObstacleSet, PathProjection, Point2, Pose2D, ReferencePath};
pub use graph::{Connectivity, GraphConfig, PlanGraph};
pub use planner::{ActivePath, Planner, PlannerConfig, PlannerOutput};
pub use search::SearchResult;
pub use sim::{RunMetrics, Scenario, World};
