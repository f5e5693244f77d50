//! Roll-out / roll-in lattice graph generation along a reference path.
//!
//! Stations are placed ahead of the robot's projection onto the reference
//! path; at each station lateral offsets span a corridor whose half-width
//! ramps up from the robot's lateral offset (roll-out), holds at `d_span`,
//! and ramps back down to zero (roll-in), so the final station converges on
//! the reference path. Nodes and straight-line edges intersecting inflated
//! obstacles are discarded; surviving edges carry precomputed cost vectors.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costs::{edge_cost, CostConfig, CostError, CostVector};
use crate::geometry::{angular_difference, project_onto_path, ObstacleSet, Point2, Pose2D, ReferencePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Three forward neighbors plus the two same-station lateral neighbors.
    Forward5,
    /// Forward5 plus the three backward neighbors.
    Full8,
}

/// Lattice construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    /// Maximum lateral distance from the reference path, meters.
    pub d_span: f64,
    /// Total longitudinal extent of the lattice (roll-out through roll-in), meters.
    pub d_roll: f64,
    /// Sensor range, meters. Must satisfy `d_roll > d_sensor`.
    pub d_sensor: f64,
    /// Longitudinal node spacing, meters.
    pub station_step: f64,
    /// Lateral node spacing, meters.
    pub lateral_step: f64,
    /// Distance over which samples diverge from the robot to the full span, meters.
    pub rollout_length: f64,
    /// Distance over which samples converge back onto the reference path, meters.
    pub rollin_length: f64,
    /// Robot-size obstacle inflation, meters.
    pub inflation_radius: f64,
    pub connectivity: Connectivity,
    /// Maximum heading change of a lattice edge relative to the local
    /// reference direction, radians. Default π/2 (permissive, omnidirectional).
    pub max_heading_change: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            d_span: 1.0,
            d_roll: 7.0,
            d_sensor: 5.0,
            station_step: 0.5,
            lateral_step: 0.25,
            rollout_length: 2.0,
            rollin_length: 2.0,
            inflation_radius: 0.3,
            connectivity: Connectivity::Forward5,
            max_heading_change: PI / 2.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph config: {0}")]
    InvalidConfig(String),
    #[error("robot pose ({0}, {1}) is in collision with an inflated obstacle")]
    RobotInCollision(f64, f64),
    #[error("no collision-free node at the final station")]
    GoalBlocked,
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl GraphConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        let fail = |msg: &str| Err(GraphError::InvalidConfig(msg.to_string()));
        if self.d_roll <= self.d_sensor {
            return fail("d_roll must exceed d_sensor");
        }
        if self.rollout_length + self.rollin_length > self.d_roll {
            return fail("rollout_length + rollin_length must not exceed d_roll");
        }
        if self.station_step <= 0.0
            || self.lateral_step <= 0.0
            || self.rollout_length <= 0.0
            || self.rollin_length <= 0.0
            || self.d_span <= 0.0
        {
            return fail("all lattice lengths must be positive");
        }
        if self.lateral_step > self.d_span {
            return fail("lateral_step must not exceed d_span");
        }
        if self.inflation_radius < 0.0 {
            return fail("inflation_radius must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphNode {
    /// Station index, 1-based from the robot's projection.
    pub station: i32,
    /// Signed lateral index (positive = left of travel).
    pub lateral: i32,
    pub pose: Pose2D,
    /// Arc length of the node's station along the reference path.
    pub arclength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub target: usize,
    pub cost: CostVector,
}

/// Directed lattice graph with per-edge cost vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanGraph {
    pub nodes: Vec<GraphNode>,
    /// Outgoing adjacency list per node.
    pub edges: Vec<Vec<GraphEdge>>,
    pub init_node: usize,
    pub goal_node: usize,
}

impl PlanGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Synthetic graph from raw parts, for tests and benchmarks.
    pub fn synthetic(n: usize, edge_list: &[(usize, usize, Vec<f64>)]) -> Self {
        let nodes = (0..n)
            .map(|i| GraphNode {
                station: i as i32,
                lateral: 0,
                pose: Pose2D::new(i as f64, 0.0, 0.0),
                arclength: i as f64,
            })
            .collect();
        let mut edges = vec![Vec::new(); n];
        for (from, to, cost) in edge_list {
            edges[*from].push(GraphEdge {
                target: *to,
                cost: CostVector(cost.clone()),
            });
        }
        Self {
            nodes,
            edges,
            init_node: 0,
            goal_node: n.saturating_sub(1),
        }
    }
}

/// Node with minimum Euclidean distance to `p`; ties broken by lowest id.
pub fn nearest_node(g: &PlanGraph, p: Pose2D) -> usize {
    let pos = p.position();
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, n) in g.nodes.iter().enumerate() {
        let d = n.pose.position().distance_squared(pos);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Corridor half-width at longitudinal distance `d` from the robot's
/// projection: cosine blend from `lat0` up to `d_span` over the roll-out,
/// hold, then cosine blend down to zero over the final roll-in.
fn span_at(d: f64, total: f64, lat0: f64, cfg: &GraphConfig) -> f64 {
    let out = if d >= cfg.rollout_length {
        cfg.d_span
    } else {
        let w = 0.5 * (1.0 - (PI * d / cfg.rollout_length).cos());
        lat0 + (cfg.d_span - lat0) * w
    };
    let remaining = total - d;
    let inward = if remaining >= cfg.rollin_length {
        cfg.d_span
    } else {
        cfg.d_span * 0.5 * (1.0 - (PI * remaining / cfg.rollin_length).cos())
    };
    out.min(inward)
}

/// True when the straight segment a-b, sampled at `step`, stays clear of the
/// inflated obstacles. Half the sample spacing is added to the clearance
/// threshold so the continuous segment is clear, not just the samples.
pub fn segment_clear(
    a: Point2,
    b: Point2,
    obstacles: &ObstacleSet,
    inflation_radius: f64,
    step: f64,
) -> bool {
    let len = a.distance(b);
    let n = (len / step).ceil().max(1.0) as usize;
    let margin = 0.5 * len / n as f64;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let p = Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
        if obstacles.in_collision(p, inflation_radius + margin) {
            return false;
        }
    }
    true
}

/// Generate the lattice graph ahead of `x_c` along the reference path.
pub fn generate_graph(
    reference: &ReferencePath,
    x_c: Pose2D,
    obstacles: &ObstacleSet,
    gcfg: &GraphConfig,
    ccfg: &CostConfig,
) -> Result<PlanGraph, GraphError> {
    gcfg.validate()?;
    if obstacles.in_collision(x_c.position(), gcfg.inflation_radius) {
        return Err(GraphError::RobotInCollision(x_c.x, x_c.y));
    }

    let proj = project_onto_path(x_c.position(), reference);
    let s0 = proj.arclength;
    let lat0 = proj.lateral_offset.abs().min(gcfg.d_span);
    let end_arc = (s0 + gcfg.d_roll).min(reference.total_length());
    let total = end_arc - s0;

    // Station arc lengths: regular spacing, final station exactly at the end
    // of the covered extent so roll-in converges there.
    let mut station_arcs = Vec::new();
    let mut i = 1;
    loop {
        let s = s0 + i as f64 * gcfg.station_step;
        if s >= end_arc - 1e-9 {
            break;
        }
        station_arcs.push(s);
        i += 1;
    }
    station_arcs.push(end_arc);

    let mut nodes = Vec::new();
    let mut index: HashMap<(i32, i32), usize> = HashMap::new();
    for (si, &s) in station_arcs.iter().enumerate() {
        let station = si as i32 + 1;
        let span = span_at(s - s0, total, lat0, gcfg);
        let j_max = (span / gcfg.lateral_step + 1e-9).floor() as i32;
        let on_path = reference.point_at(s);
        let heading = reference.heading_at(s);
        // left normal of the travel direction
        let (nx, ny) = (-heading.sin(), heading.cos());
        for j in -j_max..=j_max {
            let off = j as f64 * gcfg.lateral_step;
            let p = Point2::new(on_path.x + nx * off, on_path.y + ny * off);
            if obstacles.in_collision(p, gcfg.inflation_radius) {
                continue;
            }
            index.insert((station, j), nodes.len());
            nodes.push(GraphNode {
                station,
                lateral: j,
                pose: Pose2D::new(p.x, p.y, heading),
                arclength: s,
            });
        }
    }

    let last_station = station_arcs.len() as i32;
    let goal_node = match index.get(&(last_station, 0)) {
        Some(&id) => id,
        None => return Err(GraphError::GoalBlocked),
    };

    let neighbor_offsets: &[(i32, i32)] = match gcfg.connectivity {
        Connectivity::Forward5 => &[(1, -1), (1, 0), (1, 1), (0, -1), (0, 1)],
        Connectivity::Full8 => &[
            (1, -1),
            (1, 0),
            (1, 1),
            (0, -1),
            (0, 1),
            (-1, -1),
            (-1, 0),
            (-1, 1),
        ],
    };

    let mut edges: Vec<Vec<GraphEdge>> = vec![Vec::new(); nodes.len()];
    for from in 0..nodes.len() {
        let n = nodes[from];
        for (ds, dj) in neighbor_offsets {
            let Some(&to) = index.get(&(n.station + ds, n.lateral + dj)) else {
                continue;
            };
            let a = n.pose.position();
            let b = nodes[to].pose.position();
            let len = a.distance(b);
            if len <= 0.0 {
                continue;
            }
            let travel = (b.y - a.y).atan2(b.x - a.x);
            if angular_difference(travel, n.pose.heading) > gcfg.max_heading_change + 1e-9 {
                continue;
            }
            if !segment_clear(a, b, obstacles, gcfg.inflation_radius, ccfg.integration_step) {
                continue;
            }
            let cost = edge_cost(&[a, b], obstacles, reference, ccfg)?;
            edges[from].push(GraphEdge { target: to, cost });
        }
    }

    let mut graph = PlanGraph {
        nodes,
        edges,
        init_node: 0,
        goal_node,
    };
    graph.init_node = nearest_node(&graph, x_c);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight_ref(len: f64) -> ReferencePath {
        ReferencePath::new(vec![Point2::new(0.0, 0.0), Point2::new(len, 0.0)]).unwrap()
    }

    fn cfg() -> (GraphConfig, CostConfig) {
        (
            GraphConfig {
                d_span: 1.0,
                d_roll: 7.0,
                d_sensor: 5.0,
                station_step: 0.5,
                lateral_step: 0.5,
                rollout_length: 2.0,
                rollin_length: 2.0,
                inflation_radius: 0.5,
                connectivity: Connectivity::Forward5,
                max_heading_change: PI / 2.0,
            },
            CostConfig::default(),
        )
    }

    #[test]
    fn node_counts_on_clear_straight_reference() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let x_c = Pose2D::new(0.0, 0.0, 0.0);
        let g = generate_graph(&reference, x_c, &ObstacleSet::empty(), &gcfg, &ccfg).unwrap();

        // 14 stations: 13 regular at 0.5 m spacing plus the final one at 7 m
        let max_station = g.nodes.iter().map(|n| n.station).max().unwrap();
        assert_eq!(max_station, 14);

        // enumerate expected nodes per station from the construction rule
        for st in 1..=max_station {
            let d = if st == max_station { 7.0 } else { st as f64 * 0.5 };
            let span = span_at(d, 7.0, 0.0, &gcfg);
            let expected = 2 * (span / gcfg.lateral_step + 1e-9).floor() as i32 + 1;
            let got = g.nodes.iter().filter(|n| n.station == st).count() as i32;
            assert_eq!(got, expected, "station {st}");
        }

        // middle-section stations carry the full 5 offsets
        let mid = g.nodes.iter().filter(|n| n.station == 8).count();
        assert_eq!(mid, 5);

        // goal on the path at the final station
        assert_eq!(g.nodes[g.goal_node].lateral, 0);
        assert_eq!(g.nodes[g.goal_node].station, max_station);
        assert!((g.nodes[g.goal_node].pose.y).abs() < 1e-9);
    }

    #[test]
    fn obstacle_prunes_on_path_node_but_detour_exists() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let x_c = Pose2D::new(0.0, 0.0, 0.0);
        // obstacle on the reference at station 7 (arclength 3.5)
        let obs = ObstacleSet::new(vec![Point2::new(3.5, 0.0)]);
        let g = generate_graph(&reference, x_c, &obs, &gcfg, &ccfg).unwrap();
        assert!(
            !g.nodes.iter().any(|n| n.station == 7 && n.lateral == 0),
            "on-path node at the blocked station must be pruned"
        );
        // goal still reachable (checked by simple BFS)
        let mut seen = vec![false; g.node_count()];
        let mut queue = vec![g.init_node];
        seen[g.init_node] = true;
        while let Some(v) = queue.pop() {
            for e in &g.edges[v] {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push(e.target);
                }
            }
        }
        assert!(seen[g.goal_node]);
    }

    #[test]
    fn full_wall_disconnects_goal() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let x_c = Pose2D::new(0.0, 0.0, 0.0);
        // wall spanning the whole corridor width at arclength 3.5
        let wall: Vec<Point2> = (-16..=16)
            .map(|i| Point2::new(3.5, i as f64 * 0.1))
            .collect();
        let g = generate_graph(&reference, x_c, &ObstacleSet::new(wall), &gcfg, &ccfg).unwrap();
        let mut seen = vec![false; g.node_count()];
        let mut queue = vec![g.init_node];
        seen[g.init_node] = true;
        while let Some(v) = queue.pop() {
            for e in &g.edges[v] {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push(e.target);
                }
            }
        }
        assert!(!seen[g.goal_node]);
    }

    #[test]
    fn robot_in_collision_is_error() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let obs = ObstacleSet::new(vec![Point2::new(0.1, 0.0)]);
        let res = generate_graph(&reference, Pose2D::new(0.0, 0.0, 0.0), &obs, &gcfg, &ccfg);
        assert!(matches!(res, Err(GraphError::RobotInCollision(_, _))));
    }

    #[test]
    fn blocked_final_station_is_error() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let obs = ObstacleSet::new(vec![Point2::new(7.0, 0.0)]);
        let res = generate_graph(&reference, Pose2D::new(0.0, 0.0, 0.0), &obs, &gcfg, &ccfg);
        assert!(matches!(res, Err(GraphError::GoalBlocked)));
    }

    #[test]
    fn no_node_or_edge_near_obstacles() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let obs = ObstacleSet::new(vec![Point2::new(3.0, 0.3), Point2::new(5.2, -0.4)]);
        let g = generate_graph(&reference, Pose2D::new(0.0, 0.0, 0.0), &obs, &gcfg, &ccfg)
            .unwrap();
        for n in &g.nodes {
            assert!(!obs.in_collision(n.pose.position(), gcfg.inflation_radius));
        }
        for (from, out) in g.edges.iter().enumerate() {
            for e in out {
                let a = g.nodes[from].pose.position();
                let b = g.nodes[e.target].pose.position();
                // dense sampling, stricter than the construction-time check
                for i in 0..=100 {
                    let t = i as f64 / 100.0;
                    let p = Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
                    assert!(
                        !obs.in_collision(p, gcfg.inflation_radius - 1e-9),
                        "edge sample inside inflated obstacle"
                    );
                }
                assert!(e.cost.values().iter().all(|v| *v >= 0.0));
                assert!(*e.cost.values().last().unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let obs = ObstacleSet::new(vec![Point2::new(3.0, 0.2)]);
        let a = generate_graph(&reference, Pose2D::new(0.1, 0.05, 0.0), &obs, &gcfg, &ccfg)
            .unwrap();
        let b = generate_graph(&reference, Pose2D::new(0.1, 0.05, 0.0), &obs, &gcfg, &ccfg)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nearest_node_matches_linear_scan() {
        let (gcfg, ccfg) = cfg();
        let reference = straight_ref(10.0);
        let g = generate_graph(
            &reference,
            Pose2D::new(0.0, 0.0, 0.0),
            &ObstacleSet::empty(),
            &gcfg,
            &ccfg,
        )
        .unwrap();
        let p = Pose2D::new(2.3, 0.4, 0.0);
        let id = nearest_node(&g, p);
        let best = g
            .nodes
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.pose
                    .position()
                    .distance(p.position())
                    .partial_cmp(&b.pose.position().distance(p.position()))
                    .unwrap()
            })
            .unwrap()
            .0;
        assert_eq!(id, best);

        // exact node pose maps to itself
        assert_eq!(nearest_node(&g, g.nodes[7].pose), 7);
    }

    #[test]
    fn invalid_configs_rejected() {
        let (mut gcfg, _) = cfg();
        gcfg.d_roll = 4.0; // below d_sensor
        assert!(gcfg.validate().is_err());
        let (mut gcfg, _) = cfg();
        gcfg.rollout_length = 6.0;
        gcfg.rollin_length = 2.0;
        assert!(gcfg.validate().is_err());
    }
}
