//! Planar primitives: points, poses, reference-path polylines, arc-length
//! projection, angular arithmetic, and point-set distance queries.
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so everything here is safe to share between threads.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A 2D point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn distance(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    #[inline]
    pub fn distance_squared(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Normalize an angle to the half-open interval (-π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Absolute smallest rotation between two angles, in [0, π]. Symmetric.
pub fn angular_difference(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// Planar robot configuration: position plus heading.
///
/// Heading is normalized to (-π, π] on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    #[inline]
    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("reference path needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("reference path vertices {0} and {1} coincide")]
    DegenerateSegment(usize, usize),
}

/// Projection of a point onto a [`ReferencePath`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProjection {
    /// Index of the nearest segment.
    pub segment_index: usize,
    /// Arc length along the path of the projected point, clamped to [0, total].
    pub arclength: f64,
    /// Signed lateral offset; positive to the left of the travel direction.
    pub lateral_offset: f64,
    /// Heading of the nearest segment.
    pub segment_heading: f64,
}

/// The global reference path: a polyline with per-segment headings and a
/// cumulative arc-length index.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    vertices: Vec<Point2>,
    cumulative_arclength: Vec<f64>,
    segment_headings: Vec<f64>,
}

impl ReferencePath {
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        let mut cumulative_arclength = Vec::with_capacity(vertices.len());
        let mut segment_headings = Vec::with_capacity(vertices.len() - 1);
        cumulative_arclength.push(0.0);
        for i in 0..vertices.len() - 1 {
            let a = vertices[i];
            let b = vertices[i + 1];
            let len = a.distance(b);
            if len <= 0.0 {
                return Err(GeometryError::DegenerateSegment(i, i + 1));
            }
            cumulative_arclength.push(cumulative_arclength[i] + len);
            segment_headings.push((b.y - a.y).atan2(b.x - a.x));
        }
        Ok(Self {
            vertices,
            cumulative_arclength,
            segment_headings,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segment_headings(&self) -> &[f64] {
        &self.segment_headings
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.cumulative_arclength
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative_arclength.last().unwrap()
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    /// Point on the path at a given arc length, clamped to the path extent.
    pub fn point_at(&self, arclength: f64) -> Point2 {
        let (seg, t) = self.locate(arclength);
        let a = self.vertices[seg];
        let b = self.vertices[seg + 1];
        Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
    }

    /// Segment heading at a given arc length, clamped to the path extent.
    pub fn heading_at(&self, arclength: f64) -> f64 {
        let (seg, _) = self.locate(arclength);
        self.segment_headings[seg]
    }

    /// Pose on the path at a given arc length (heading from the segment).
    pub fn pose_at(&self, arclength: f64) -> Pose2D {
        let p = self.point_at(arclength);
        Pose2D::new(p.x, p.y, self.heading_at(arclength))
    }

    fn locate(&self, arclength: f64) -> (usize, f64) {
        let s = arclength.clamp(0.0, self.total_length());
        // binary search over the cumulative index
        let seg = match self
            .cumulative_arclength
            .binary_search_by(|v| v.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(self.segment_headings.len() - 1),
            Err(i) => i - 1,
        };
        let seg_len = self.cumulative_arclength[seg + 1] - self.cumulative_arclength[seg];
        let t = (s - self.cumulative_arclength[seg]) / seg_len;
        (seg, t)
    }
}

/// Project a point onto the globally nearest segment of the path.
///
/// Ties between adjacent segments are broken toward the lower segment index.
/// Projection beyond the path endpoints clamps to the endpoint.
pub fn project_onto_path(p: Point2, path: &ReferencePath) -> PathProjection {
    let mut best: Option<(f64, PathProjection)> = None;
    for i in 0..path.segment_headings.len() {
        let a = path.vertices[i];
        let b = path.vertices[i + 1];
        let seg_len = path.cumulative_arclength[i + 1] - path.cumulative_arclength[i];
        let ux = (b.x - a.x) / seg_len;
        let uy = (b.y - a.y) / seg_len;
        // longitudinal coordinate along the segment, clamped to it
        let t = ((p.x - a.x) * ux + (p.y - a.y) * uy).clamp(0.0, seg_len);
        let fx = a.x + ux * t;
        let fy = a.y + uy * t;
        let dist = p.distance(Point2::new(fx, fy));
        if best.map_or(true, |(d, _)| dist < d - 1e-12) {
            // signed distance to the foot point; positive on the left of the
            // direction of travel (magnitude stays the true point-to-segment
            // distance even when the foot clamps to a segment endpoint)
            let cross = -(p.x - fx) * uy + (p.y - fy) * ux;
            let lateral = if cross >= 0.0 { dist } else { -dist };
            best = Some((
                dist,
                PathProjection {
                    segment_index: i,
                    arclength: path.cumulative_arclength[i] + t,
                    lateral_offset: lateral,
                    segment_heading: path.segment_headings[i],
                },
            ));
        }
    }
    best.unwrap().1
}

/// Perceived obstacle points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSet {
    points: Vec<Point2>,
}

impl ObstacleSet {
    pub fn new(points: Vec<Point2>) -> Self {
        Self { points }
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean distance to the nearest obstacle point, or `None` when the
    /// set is empty (callers treat that as infinite distance / zero risk).
    pub fn distance_to_nearest(&self, p: Point2) -> Option<f64> {
        self.points
            .iter()
            .map(|o| o.distance_squared(p))
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            })
            .map(f64::sqrt)
    }

    /// True when `p` lies strictly inside the inflated region of any obstacle.
    pub fn in_collision(&self, p: Point2, inflation_radius: f64) -> bool {
        self.distance_to_nearest(p)
            .map_or(false, |d| d < inflation_radius)
    }
}
