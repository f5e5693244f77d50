//! Deterministic 2D scenario simulator: scripted obstacle motion,
//! range-limited sensing with memory, and a kinematic path-following robot
//! closing the loop around the receding-horizon planner.
//!
//! Scenario files are plain JSON mirroring [`Scenario`] field for field;
//! angle fields accept degrees through a `_deg` suffix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costs::{CostConfig, CostVector, Criterion};
use crate::geometry::{GeometryError, ObstacleSet, Point2, Pose2D, ReferencePath};
use crate::graph::{Connectivity, GraphConfig};
use crate::planner::{Planner, PlannerConfig, PlannerError, PlannerOutput};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("invalid reference path: {0}")]
    Geometry(#[from] GeometryError),
    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("tick {tick}: {source}")]
    Planner {
        tick: u32,
        #[source]
        source: PlannerError,
    },
}

/// Scripted motion of an obstacle cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Motion {
    Static,
    /// The cluster origin follows timestamped waypoints with linear
    /// interpolation; it holds the last waypoint afterwards.
    Waypoints { schedule: Vec<MotionKeyframe> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionKeyframe {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// A rigid cluster of obstacle points translating along its motion script.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleCluster {
    pub points: Vec<Point2>,
    #[serde(default = "Motion::default_static")]
    pub motion: Motion,
}

impl Motion {
    fn default_static() -> Motion {
        Motion::Static
    }
}

impl ObstacleCluster {
    /// Cluster translation offset at time `t` relative to its layout at the
    /// first keyframe.
    fn offset_at(&self, t: f64) -> (f64, f64) {
        match &self.motion {
            Motion::Static => (0.0, 0.0),
            Motion::Waypoints { schedule } => {
                if schedule.is_empty() {
                    return (0.0, 0.0);
                }
                let first = &schedule[0];
                let at = |k: &MotionKeyframe| (k.x - first.x, k.y - first.y);
                if t <= first.t {
                    return (0.0, 0.0);
                }
                for w in schedule.windows(2) {
                    if t <= w[1].t {
                        let f = (t - w[0].t) / (w[1].t - w[0].t);
                        let (ax, ay) = at(&w[0]);
                        let (bx, by) = at(&w[1]);
                        return (ax + (bx - ax) * f, ay + (by - ay) * f);
                    }
                }
                at(schedule.last().unwrap())
            }
        }
    }

    pub fn points_at(&self, t: f64) -> impl Iterator<Item = Point2> + '_ {
        let (dx, dy) = self.offset_at(t);
        self.points
            .iter()
            .map(move |p| Point2::new(p.x + dx, p.y + dy))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub tick_dt: f64,
    pub robot_speed: f64,
    pub max_ticks: u32,
    pub seed: u64,
}

/// A complete simulation setup, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub name: String,
    pub reference_path: Vec<Point2>,
    pub robot_start: PoseSpec,
    #[serde(default)]
    pub obstacles: Vec<ObstacleCluster>,
    #[serde(default)]
    pub graph: GraphSpec,
    #[serde(default)]
    pub costs: CostSpec,
    #[serde(default)]
    pub planner: PlannerConfig,
    pub sim: SimConfig,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Pose with the heading accepted in radians or degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading_deg: Option<f64>,
}

impl PoseSpec {
    pub fn from_pose(p: Pose2D) -> Self {
        Self {
            x: p.x,
            y: p.y,
            heading: Some(p.heading),
            heading_deg: None,
        }
    }

    pub fn pose(&self) -> Result<Pose2D, ScenarioError> {
        let h = match (self.heading, self.heading_deg) {
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Invalid(
                    "robot_start: give heading or heading_deg, not both".into(),
                ))
            }
            (Some(h), None) => h,
            (None, Some(d)) => d.to_radians(),
            (None, None) => 0.0,
        };
        Ok(Pose2D::new(self.x, self.y, h))
    }
}

/// [`GraphConfig`] with the heading-change cap accepted in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphSpec {
    pub d_span: f64,
    pub d_roll: f64,
    pub d_sensor: f64,
    pub station_step: f64,
    pub lateral_step: f64,
    pub rollout_length: f64,
    pub rollin_length: f64,
    pub inflation_radius: f64,
    pub connectivity: Connectivity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_heading_change: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_heading_change_deg: Option<f64>,
}

impl Default for GraphSpec {
    fn default() -> Self {
        let g = GraphConfig::default();
        Self {
            d_span: g.d_span,
            d_roll: g.d_roll,
            d_sensor: g.d_sensor,
            station_step: g.station_step,
            lateral_step: g.lateral_step,
            rollout_length: g.rollout_length,
            rollin_length: g.rollin_length,
            inflation_radius: g.inflation_radius,
            connectivity: g.connectivity,
            max_heading_change: None,
            max_heading_change_deg: None,
        }
    }
}

impl GraphSpec {
    pub fn config(&self) -> Result<GraphConfig, ScenarioError> {
        let max_heading_change = match (self.max_heading_change, self.max_heading_change_deg) {
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Invalid(
                    "graph: give max_heading_change or max_heading_change_deg, not both".into(),
                ))
            }
            (Some(r), None) => r,
            (None, Some(d)) => d.to_radians(),
            (None, None) => GraphConfig::default().max_heading_change,
        };
        Ok(GraphConfig {
            d_span: self.d_span,
            d_roll: self.d_roll,
            d_sensor: self.d_sensor,
            station_step: self.station_step,
            lateral_step: self.lateral_step,
            rollout_length: self.rollout_length,
            rollin_length: self.rollin_length,
            inflation_radius: self.inflation_radius,
            connectivity: self.connectivity,
            max_heading_change,
        })
    }
}

/// [`CostConfig`] with the heading threshold accepted in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostSpec {
    pub criteria: Vec<Criterion>,
    pub th_risk: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub th_head: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub th_head_deg: Option<f64>,
    pub integration_step: f64,
    pub tie_epsilon: f64,
}

impl Default for CostSpec {
    fn default() -> Self {
        let c = CostConfig::default();
        Self {
            criteria: c.criteria,
            th_risk: c.th_risk,
            th_head: None,
            th_head_deg: Some(5.0),
            integration_step: c.integration_step,
            tie_epsilon: c.tie_epsilon,
        }
    }
}

impl CostSpec {
    pub fn config(&self) -> Result<CostConfig, ScenarioError> {
        let th_head = match (self.th_head, self.th_head_deg) {
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Invalid(
                    "costs: give th_head or th_head_deg, not both".into(),
                ))
            }
            (Some(r), None) => r,
            (None, Some(d)) => d.to_radians(),
            (None, None) => CostConfig::default().th_head,
        };
        Ok(CostConfig {
            criteria: self.criteria.clone(),
            th_risk: self.th_risk,
            th_head,
            integration_step: self.integration_step,
            tie_epsilon: self.tie_epsilon,
        })
    }
}

impl Scenario {
    pub fn from_json(json: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(json)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::Invalid(format!(
                "schema_version {} unsupported (expected {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        if self.sim.max_ticks == 0 {
            return Err(ScenarioError::Invalid("sim.max_ticks must be > 0".into()));
        }
        if self.sim.tick_dt <= 0.0 {
            return Err(ScenarioError::Invalid("sim.tick_dt must be > 0".into()));
        }
        if self.sim.robot_speed <= 0.0 {
            return Err(ScenarioError::Invalid("sim.robot_speed must be > 0".into()));
        }
        let reference = self.reference()?;
        let gcfg = self.graph.config()?;
        gcfg.validate()
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        self.costs.config()?;
        let start = self.robot_start.pose()?;
        let world = self.world_points_at(0.0);
        if world.in_collision(start.position(), gcfg.inflation_radius) {
            return Err(ScenarioError::Invalid(
                "robot_start is in collision with an inflated obstacle".into(),
            ));
        }
        let _ = reference;
        Ok(())
    }

    pub fn reference(&self) -> Result<ReferencePath, ScenarioError> {
        Ok(ReferencePath::new(self.reference_path.clone())?)
    }

    /// All world obstacle points at simulation time `t`.
    pub fn world_points_at(&self, t: f64) -> ObstacleSet {
        let mut pts = Vec::new();
        for c in &self.obstacles {
            pts.extend(c.points_at(t));
        }
        ObstacleSet::new(pts)
    }
}

/// What the planner emitted at one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Follow,
    Hold,
    GoalReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub tick: u32,
    pub pose: Pose2D,
    pub kind: OutputKind,
}

/// Per-replan bookkeeping. The wall-clock timing fields are kept out of the
/// serialized metrics so emitted files stay bit-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplanRecord {
    pub tick: u32,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub path_cost: Option<CostVector>,
    #[serde(skip)]
    pub construction_seconds: f64,
    #[serde(skip)]
    pub search_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub schema_version: u32,
    pub scenario: String,
    pub replan_count: u32,
    pub goal_reached: bool,
    pub ticks_elapsed: u32,
    pub hold_ticks: u32,
    pub accumulated_costs: CostVector,
    pub executed_path: Vec<TraceSample>,
    pub replans: Vec<ReplanRecord>,
    /// Replanned path waypoints, one polyline per replan (for rendering).
    pub replanned_paths: Vec<Vec<Pose2D>>,
}

/// Live simulation state. One world per run, stepped single-threaded.
pub struct World {
    scenario: Scenario,
    reference: ReferencePath,
    planner: Planner,
    pub robot: Pose2D,
    time: f64,
    tick: u32,
    memory: Vec<Point2>,
    /// Obstacle set passed to the planner at the current tick.
    pub sensed: ObstacleSet,
    metrics: RunMetrics,
    done: bool,
}

/// Range-limited sensing with memory: points currently within `d_sensor`
/// are observed; remembered points outside the sensor disk persist;
/// remembered points inside the disk that are no longer observed are
/// forgotten.
pub fn sense(
    world_points: &ObstacleSet,
    memory: &[Point2],
    robot: Pose2D,
    d_sensor: f64,
) -> Vec<Point2> {
    let pos = robot.position();
    let mut out: Vec<Point2> = world_points
        .points()
        .iter()
        .copied()
        .filter(|p| p.distance(pos) <= d_sensor)
        .collect();
    out.extend(
        memory
            .iter()
            .copied()
            .filter(|p| p.distance(pos) > d_sensor),
    );
    out
}

impl World {
    pub fn new(scenario: Scenario) -> Result<Self, SimError> {
        scenario.validate()?;
        let reference = scenario.reference()?;
        let planner = Planner::new(
            reference.clone(),
            scenario.graph.config()?,
            scenario.costs.config()?,
            scenario.planner.clone(),
        );
        let robot = scenario.robot_start.pose()?;
        let k = scenario.costs.criteria.len();
        let metrics = RunMetrics {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.name.clone(),
            replan_count: 0,
            goal_reached: false,
            ticks_elapsed: 0,
            hold_ticks: 0,
            accumulated_costs: CostVector::zeros(k),
            executed_path: vec![TraceSample {
                tick: 0,
                pose: robot,
                kind: OutputKind::Follow,
            }],
            replans: Vec::new(),
            replanned_paths: Vec::new(),
        };
        Ok(Self {
            scenario,
            reference,
            planner,
            robot,
            time: 0.0,
            tick: 0,
            memory: Vec::new(),
            sensed: ObstacleSet::empty(),
            metrics,
            done: false,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn reference(&self) -> &ReferencePath {
        &self.reference
    }

    pub fn metrics(&self) -> &RunMetrics {
        &self.metrics
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Advance the world by one tick. Returns the planner's output.
    pub fn step(&mut self) -> Result<PlannerOutput, SimError> {
        let dt = self.scenario.sim.tick_dt;
        self.time += dt;
        self.tick += 1;

        let world_points = self.scenario.world_points_at(self.time);
        self.memory = sense(&world_points, &self.memory, self.robot, self.planner.gcfg.d_sensor);
        self.sensed = ObstacleSet::new(self.memory.clone());

        let info = self
            .planner
            .plan_step(self.robot, &self.sensed)
            .map_err(|source| SimError::Planner {
                tick: self.tick,
                source,
            })?;

        if info.replanned {
            self.metrics.replan_count += 1;
            self.metrics.replans.push(ReplanRecord {
                tick: self.tick,
                graph_nodes: info.graph_nodes,
                graph_edges: info.graph_edges,
                path_cost: info.path_cost.clone(),
                construction_seconds: info.construction_seconds,
                search_seconds: info.search_seconds,
            });
            self.metrics
                .replanned_paths
                .push(self.planner.active_path().waypoints.clone());
        }

        let kind = match &info.output {
            PlannerOutput::FollowPath(path) => {
                let prev = self.robot;
                let s0 = path.arclength_of_closest(prev.position());
                let s1 = (s0 + self.scenario.sim.robot_speed * dt).min(path.total_length());
                self.robot = path.pose_at(s1);
                self.accumulate_costs(prev, self.robot);
                OutputKind::Follow
            }
            PlannerOutput::HoldPosition(_) => {
                self.metrics.hold_ticks += 1;
                OutputKind::Hold
            }
            PlannerOutput::GoalReached => {
                self.metrics.goal_reached = true;
                self.done = true;
                OutputKind::GoalReached
            }
        };
        self.metrics.ticks_elapsed = self.tick;
        self.metrics.executed_path.push(TraceSample {
            tick: self.tick,
            pose: self.robot,
            kind,
        });
        if self.tick >= self.scenario.sim.max_ticks {
            self.done = true;
        }
        Ok(info.output)
    }

    /// Accumulate the configured cost integrands over one tick of motion.
    fn accumulate_costs(&mut self, from: Pose2D, to: Pose2D) {
        let len = from.position().distance(to.position());
        if len <= 1e-12 {
            return;
        }
        if let Ok(c) = crate::costs::edge_cost(
            &[from.position(), to.position()],
            &self.sensed,
            &self.reference,
            &self.planner.ccfg,
        ) {
            self.metrics.accumulated_costs.add_assign(&c);
        }
    }
}

/// Run a scenario to completion (goal reached or tick budget exhausted).
/// Deterministic: identical scenarios yield bit-identical metrics.
pub fn run_scenario(scenario: &Scenario) -> Result<RunMetrics, SimError> {
    let mut world = World::new(scenario.clone())?;
    while !world.is_done() {
        world.step()?;
    }
    Ok(world.metrics().clone())
}

pub mod scenarios;
