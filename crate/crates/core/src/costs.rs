//! The three-level cost hierarchy (risk, heading, distance), edge-cost
//! integration by midpoint sampling, and lexicographic comparison of cost
//! vectors.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{angular_difference, ObstacleSet, Point2, ReferencePath, project_onto_path};

/// One criterion in the cost hierarchy, highest priority first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Risk,
    Heading,
    Distance,
}

#[derive(Debug, Error)]
pub enum CostError {
    #[error("point ({0}, {1}) lies exactly on an obstacle")]
    PointOnObstacle(f64, f64),
    #[error("zero-length edge geometry")]
    ZeroLengthEdge,
    #[error("cost vectors have mismatched lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// A K-tuple of non-negative costs, index 0 holding the highest priority.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostVector(pub Vec<f64>);

impl CostVector {
    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn add(&self, other: &CostVector) -> CostVector {
        debug_assert_eq!(self.len(), other.len());
        CostVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn add_assign(&mut self, other: &CostVector) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += *b;
        }
    }
}

/// Configuration of the cost hierarchy and its thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostConfig {
    /// The ranked criteria; K = `criteria.len()`.
    pub criteria: Vec<Criterion>,
    /// Risk activation threshold, 1/meters. May be infinite (risk off).
    pub th_risk: f64,
    /// Heading activation threshold, radians in [0, π).
    pub th_head: f64,
    /// Arc-length step for the midpoint-rule path integrals, meters.
    pub integration_step: f64,
    /// Relative tolerance for cost-equality at each lexicographic level.
    pub tie_epsilon: f64,
}

impl Default for CostConfig {
    fn default() -> Self {
        Self {
            criteria: vec![Criterion::Risk, Criterion::Heading, Criterion::Distance],
            th_risk: 2.0,
            th_head: 5.0_f64.to_radians(),
            integration_step: 0.1,
            tie_epsilon: 1e-9,
        }
    }
}

impl CostConfig {
    pub fn k(&self) -> usize {
        self.criteria.len()
    }

    /// Index of the distance criterion, if present.
    pub fn distance_level(&self) -> Option<usize> {
        self.criteria.iter().position(|c| *c == Criterion::Distance)
    }
}

/// Thresholded risk at a point: 1/nearest-obstacle-distance when that exceeds
/// `th_risk`, else 0. Empty obstacle set or infinite threshold give 0.
pub fn risk_at(p: Point2, obstacles: &ObstacleSet, cfg: &CostConfig) -> Result<f64, CostError> {
    let Some(d) = obstacles.distance_to_nearest(p) else {
        return Ok(0.0);
    };
    if d == 0.0 {
        return Err(CostError::PointOnObstacle(p.x, p.y));
    }
    let r = 1.0 / d;
    Ok(if r > cfg.th_risk { r } else { 0.0 })
}

/// Thresholded heading penalty: the angular difference when it exceeds
/// `th_head`, else 0.
pub fn heading_penalty(h: f64, ref_h: f64, cfg: &CostConfig) -> f64 {
    let diff = angular_difference(h, ref_h);
    if diff > cfg.th_head {
        diff
    } else {
        0.0
    }
}

/// Integrate the configured cost criteria along an edge polyline.
///
/// Each integrand is evaluated at midpoints of equal sub-segments of length
/// at most `integration_step` and multiplied by the sub-segment length. The
/// heading integrand uses the edge's local travel direction versus the
/// projection of the midpoint onto the reference path. Distance is the exact
/// edge length, strictly positive for every valid edge.
pub fn edge_cost(
    edge_geometry: &[Point2],
    obstacles: &ObstacleSet,
    reference: &ReferencePath,
    cfg: &CostConfig,
) -> Result<CostVector, CostError> {
    let mut out = CostVector::zeros(cfg.k());
    let mut total_len = 0.0;
    for pair in edge_geometry.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let seg_len = a.distance(b);
        if seg_len == 0.0 {
            continue;
        }
        total_len += seg_len;
        let travel_heading = (b.y - a.y).atan2(b.x - a.x);
        let n = (seg_len / cfg.integration_step).ceil().max(1.0) as usize;
        let h = seg_len / n as f64;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let mid = Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
            for (level, crit) in cfg.criteria.iter().enumerate() {
                match crit {
                    Criterion::Risk => {
                        out.0[level] += risk_at(mid, obstacles, cfg)? * h;
                    }
                    Criterion::Heading => {
                        let proj = project_onto_path(mid, reference);
                        out.0[level] +=
                            heading_penalty(travel_heading, proj.segment_heading, cfg) * h;
                    }
                    Criterion::Distance => {}
                }
            }
        }
    }
    if total_len <= 0.0 {
        return Err(CostError::ZeroLengthEdge);
    }
    if let Some(level) = cfg.distance_level() {
        out.0[level] = total_len;
    }
    Ok(out)
}

/// True when two scalar costs are tied at the given tolerance (relative, with
/// an absolute floor for near-zero values). Two infinities are tied.
pub fn costs_tied(a: f64, b: f64, tie_epsilon: f64) -> bool {
    if a == b {
        return true;
    }
    if a.is_infinite() || b.is_infinite() {
        return false;
    }
    (a - b).abs() <= tie_epsilon * a.abs().max(b.abs()).max(1.0)
}

/// Compare two cost vectors lexicographically: the first non-tied level
/// decides; all levels tied gives `Equal`.
pub fn lex_compare(a: &CostVector, b: &CostVector, tie_epsilon: f64) -> Ordering {
    assert_eq!(
        a.len(),
        b.len(),
        "lex_compare on mismatched cost-vector lengths"
    );
    for (x, y) in a.0.iter().zip(&b.0) {
        if costs_tied(*x, *y, tie_epsilon) {
            continue;
        }
        return x.partial_cmp(y).expect("cost entries must not be NaN");
    }
    Ordering::Equal
}
