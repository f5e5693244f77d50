//! Receding-horizon replanning loop: maintains the active path, checks it
//! against newly sensed obstacles, triggers lattice regeneration plus
//! lexicographic search, and emits either a path to follow or a
//! hold-position command.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costs::{risk_at, CostConfig, CostVector};
use crate::geometry::{ObstacleSet, Point2, Pose2D, ReferencePath};
use crate::graph::{generate_graph, GraphConfig, GraphError};
use crate::search::{extract_path, lex_search_heap};

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("robot pose ({0}, {1}) is in collision")]
    RobotInCollision(f64, f64),
}

/// The path currently being executed: a lattice-searched head followed by
/// the remaining tail of the reference path.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivePath {
    pub waypoints: Vec<Pose2D>,
    /// Index of the first waypoint of the reference-path tail. Zero when the
    /// whole path is the untouched reference path.
    pub split_index: usize,
    /// Cost of the lattice portion; `None` when the path is the reference
    /// path untouched.
    pub cost: Option<CostVector>,
}

impl ActivePath {
    /// The reference path itself as the active path.
    pub fn from_reference(reference: &ReferencePath) -> Self {
        let verts = reference.vertices();
        let headings = reference.segment_headings();
        let mut waypoints = Vec::with_capacity(verts.len());
        for (i, v) in verts.iter().enumerate() {
            let h = headings[i.min(headings.len() - 1)];
            waypoints.push(Pose2D::new(v.x, v.y, h));
        }
        Self {
            waypoints,
            split_index: 0,
            cost: None,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| w[0].position().distance(w[1].position()))
            .sum()
    }

    /// Arc length of the closest point of the path to `p`.
    pub fn arclength_of_closest(&self, p: Point2) -> f64 {
        let mut best_d = f64::INFINITY;
        let mut best_s = 0.0;
        let mut s = 0.0;
        for w in self.waypoints.windows(2) {
            let a = w[0].position();
            let b = w[1].position();
            let len = a.distance(b);
            if len > 0.0 {
                let t = (((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len))
                    .clamp(0.0, 1.0);
                let f = Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
                let d = p.distance(f);
                if d < best_d {
                    best_d = d;
                    best_s = s + len * t;
                }
            }
            s += len;
        }
        best_s
    }

    /// Pose at an arc length along the path, clamped to the path extent.
    pub fn pose_at(&self, arclength: f64) -> Pose2D {
        let mut s = arclength.max(0.0);
        for w in self.waypoints.windows(2) {
            let a = w[0].position();
            let b = w[1].position();
            let len = a.distance(b);
            if s <= len && len > 0.0 {
                let t = s / len;
                let heading = (b.y - a.y).atan2(b.x - a.x);
                return Pose2D::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, heading);
            }
            s -= len;
        }
        *self.waypoints.last().unwrap()
    }

    /// Sample positions between two arc lengths at the given step.
    fn sample_between(&self, from: f64, to: f64, step: f64) -> Vec<Point2> {
        let n = ((to - from) / step).ceil().max(1.0) as usize;
        (0..=n)
            .map(|i| {
                let s = from + (to - from) * i as f64 / n as f64;
                self.pose_at(s).position()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlannerOutput {
    FollowPath(ActivePath),
    HoldPosition(Pose2D),
    GoalReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Arrival tolerance around the end of the reference path, meters.
    pub goal_tolerance: f64,
    /// Enable the risk-increase replan trigger in addition to the blocked-path
    /// trigger.
    pub risk_trigger: bool,
    /// Fraction by which the remaining path's risk cost must rise over its
    /// value at emission before a replan fires.
    pub risk_increase_fraction: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            goal_tolerance: 0.3,
            risk_trigger: true,
            risk_increase_fraction: 0.2,
        }
    }
}

/// True when any point of the path within `d_sensor` arc length ahead of the
/// robot's projection passes within the inflation radius of an obstacle.
pub fn path_blocked(
    path: &ActivePath,
    obstacles: &ObstacleSet,
    gcfg: &GraphConfig,
    integration_step: f64,
    from: Pose2D,
) -> bool {
    if obstacles.is_empty() {
        return false;
    }
    let s0 = path.arclength_of_closest(from.position());
    let s1 = (s0 + gcfg.d_sensor).min(path.total_length());
    path.sample_between(s0, s1, integration_step)
        .iter()
        .any(|p| obstacles.in_collision(*p, gcfg.inflation_radius))
}

/// Risk cost integrated along the remainder of the path from `from` to its
/// end, by midpoint sampling.
pub fn remaining_risk(
    path: &ActivePath,
    obstacles: &ObstacleSet,
    ccfg: &CostConfig,
    from: Pose2D,
) -> f64 {
    if obstacles.is_empty() || !ccfg.th_risk.is_finite() {
        return 0.0;
    }
    let s0 = path.arclength_of_closest(from.position());
    let s1 = path.total_length();
    if s1 <= s0 {
        return 0.0;
    }
    let n = ((s1 - s0) / ccfg.integration_step).ceil().max(1.0) as usize;
    let h = (s1 - s0) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let s = s0 + (i as f64 + 0.5) * h;
        let p = path.pose_at(s).position();
        // points on an obstacle only occur on an already-invalid path; treat
        // them as (large) finite risk so the trigger fires rather than erroring
        acc += risk_at(p, obstacles, ccfg).unwrap_or(1e9) * h;
    }
    acc
}

/// Outcome of one planning tick, with bookkeeping the simulator records.
#[derive(Debug, Clone, PartialEq)]
pub struct StepInfo {
    pub output: PlannerOutput,
    pub replanned: bool,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub path_cost: Option<CostVector>,
    pub construction_seconds: f64,
    pub search_seconds: f64,
}

impl StepInfo {
    fn passive(output: PlannerOutput) -> Self {
        Self {
            output,
            replanned: false,
            graph_nodes: 0,
            graph_edges: 0,
            path_cost: None,
            construction_seconds: 0.0,
            search_seconds: 0.0,
        }
    }
}

/// Receding-horizon planner instance. Owns its mutable active-path state;
/// not meant to be shared without external serialization.
#[derive(Debug, Clone)]
pub struct Planner {
    pub gcfg: GraphConfig,
    pub ccfg: CostConfig,
    pub pcfg: PlannerConfig,
    reference: ReferencePath,
    active: ActivePath,
    /// Risk cost of the active path at emission time, for trigger (b).
    emission_risk: Option<f64>,
}

impl Planner {
    pub fn new(
        reference: ReferencePath,
        gcfg: GraphConfig,
        ccfg: CostConfig,
        pcfg: PlannerConfig,
    ) -> Self {
        // the active path starts out as the reference path itself
        let active = ActivePath::from_reference(&reference);
        Self {
            gcfg,
            ccfg,
            pcfg,
            reference,
            active,
            emission_risk: None,
        }
    }

    pub fn reference(&self) -> &ReferencePath {
        &self.reference
    }

    pub fn active_path(&self) -> &ActivePath {
        &self.active
    }

    /// One tick of the receding-horizon loop.
    pub fn plan_step(
        &mut self,
        x_c: Pose2D,
        obstacles: &ObstacleSet,
    ) -> Result<StepInfo, PlannerError> {
        if obstacles.in_collision(x_c.position(), self.gcfg.inflation_radius) {
            return Err(PlannerError::RobotInCollision(x_c.x, x_c.y));
        }
        if x_c.position().distance(self.reference.end()) <= self.pcfg.goal_tolerance {
            return Ok(StepInfo::passive(PlannerOutput::GoalReached));
        }

        if !self.replan_needed(x_c, obstacles) {
            return Ok(StepInfo::passive(PlannerOutput::FollowPath(
                self.active.clone(),
            )));
        }

        match self.replan(x_c, obstacles) {
            Ok(replan) => {
                let cost = replan.path.cost.clone();
                self.emission_risk =
                    Some(remaining_risk(&replan.path, obstacles, &self.ccfg, x_c));
                self.active = replan.path;
                Ok(StepInfo {
                    output: PlannerOutput::FollowPath(self.active.clone()),
                    replanned: true,
                    graph_nodes: replan.graph_nodes,
                    graph_edges: replan.graph_edges,
                    path_cost: cost,
                    construction_seconds: replan.construction_seconds,
                    search_seconds: replan.search_seconds,
                })
            }
            // no feasible path: hold position and retry next tick
            Err(_) => Ok(StepInfo::passive(PlannerOutput::HoldPosition(x_c))),
        }
    }

    pub fn replan_needed(&self, x_c: Pose2D, obstacles: &ObstacleSet) -> bool {
        if path_blocked(
            &self.active,
            obstacles,
            &self.gcfg,
            self.ccfg.integration_step,
            x_c,
        ) {
            return true;
        }
        if self.pcfg.risk_trigger {
            let current = remaining_risk(&self.active, obstacles, &self.ccfg, x_c);
            let baseline = self.emission_risk.unwrap_or(0.0);
            if current > baseline * (1.0 + self.pcfg.risk_increase_fraction) + 1e-9 {
                return true;
            }
        }
        false
    }

    fn replan(&self, x_c: Pose2D, obstacles: &ObstacleSet) -> Result<Replan, ReplanFailure> {
        let t0 = std::time::Instant::now();
        let graph = generate_graph(&self.reference, x_c, obstacles, &self.gcfg, &self.ccfg)?;
        let construction_seconds = t0.elapsed().as_secs_f64();
        let t1 = std::time::Instant::now();
        let result = lex_search_heap(&graph, graph.init_node, self.ccfg.tie_epsilon)
            .map_err(|_| ReplanFailure::Search)?;
        let node_path = extract_path(&result, graph.goal_node).ok_or(ReplanFailure::Search)?;

        let mut waypoints: Vec<Pose2D> = node_path.iter().map(|&id| graph.nodes[id].pose).collect();
        let split_index = waypoints.len();
        // reference-path tail from the goal node's station to the end; the
        // portion behind the robot's projection is dropped implicitly as the
        // lattice always extends forward
        let goal_arc = graph.nodes[graph.goal_node].arclength;
        let cum = self.reference.cumulative_arclength();
        for (i, v) in self.reference.vertices().iter().enumerate() {
            if cum[i] > goal_arc + 1e-9 {
                let h = self.reference.segment_headings()[(i - 1).min(
                    self.reference.segment_headings().len() - 1,
                )];
                waypoints.push(Pose2D::new(v.x, v.y, h));
            }
        }
        // the path always terminates at the goal at the end of the reference
        let end = self.reference.end();
        if waypoints
            .last()
            .map_or(true, |w| w.position().distance(end) > 1e-9)
        {
            let h = *self.reference.segment_headings().last().unwrap();
            waypoints.push(Pose2D::new(end.x, end.y, h));
        }

        Ok(Replan {
            path: ActivePath {
                waypoints,
                split_index,
                cost: Some(result.cost_vector(graph.goal_node)),
            },
            graph_nodes: graph.node_count(),
            graph_edges: graph.edge_count(),
            construction_seconds,
            search_seconds: t1.elapsed().as_secs_f64(),
        })
    }
}

struct Replan {
    path: ActivePath,
    graph_nodes: usize,
    graph_edges: usize,
    construction_seconds: f64,
    search_seconds: f64,
}

#[derive(Debug)]
enum ReplanFailure {
    Graph(#[allow(dead_code)] GraphError),
    Search,
}

impl From<GraphError> for ReplanFailure {
    fn from(e: GraphError) -> Self {
        ReplanFailure::Graph(e)
    }
}
