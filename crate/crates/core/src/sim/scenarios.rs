//! Bundled scenarios and the seeded random-scenario generator.
//!
//! Bundled layouts reconstruct the qualitative setups of the experiments:
//! a straight path with an obstacle forcing a detour, a U-shaped course with
//! static clutter, a bounded pool with moving containers that transiently
//! block the course, a permanently blocked corridor, and an empty baseline.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point2;
use crate::planner::PlannerConfig;
use crate::sim::{
    CostSpec, GraphSpec, Motion, MotionKeyframe, ObstacleCluster, PoseSpec, Scenario, SimConfig,
    SCHEMA_VERSION,
};

pub const BUNDLED: &[&str] = &[
    "empty_straight",
    "fig3_straight_blocked",
    "fig4_ushape_static",
    "fig8_pool_dynamic",
    "blocked_corridor",
];

/// Look up a bundled scenario by name.
pub fn bundled(name: &str) -> Option<Scenario> {
    match name {
        "empty_straight" => Some(empty_straight()),
        "fig3_straight_blocked" => Some(fig3_straight_blocked()),
        "fig4_ushape_static" => Some(fig4_ushape_static()),
        "fig8_pool_dynamic" => Some(fig8_pool_dynamic()),
        "blocked_corridor" => Some(blocked_corridor()),
        _ => None,
    }
}

fn base(name: &str, reference: Vec<Point2>, start: Point2, heading_deg: f64) -> Scenario {
    Scenario {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        reference_path: reference,
        robot_start: PoseSpec {
            x: start.x,
            y: start.y,
            heading: None,
            heading_deg: Some(heading_deg),
        },
        obstacles: Vec::new(),
        graph: GraphSpec::default(),
        costs: CostSpec::default(),
        planner: PlannerConfig::default(),
        sim: SimConfig {
            tick_dt: 0.1,
            robot_speed: 0.5,
            max_ticks: 800,
            seed: 0,
        },
    }
}

/// Square blob of obstacle points, `half` meters half-width, 0.25 m pitch.
fn blob(cx: f64, cy: f64, half: f64) -> Vec<Point2> {
    let n = (half / 0.25).round() as i32;
    let mut pts = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            pts.push(Point2::new(cx + i as f64 * 0.25, cy + j as f64 * 0.25));
        }
    }
    pts
}

fn static_cluster(points: Vec<Point2>) -> ObstacleCluster {
    ObstacleCluster {
        points,
        motion: Motion::Static,
    }
}

/// Straight reference, no obstacles. Completes with zero replans.
pub fn empty_straight() -> Scenario {
    let mut s = base(
        "empty_straight",
        vec![Point2::new(0.0, 0.0), Point2::new(15.0, 0.0)],
        Point2::new(0.0, 0.0),
        0.0,
    );
    s.sim.max_ticks = 400;
    s
}

/// Straight reference with obstacle clusters on it, forcing a detour that
/// rejoins the path.
pub fn fig3_straight_blocked() -> Scenario {
    let mut s = base(
        "fig3_straight_blocked",
        vec![Point2::new(0.0, 0.0), Point2::new(18.0, 0.0)],
        Point2::new(0.0, 0.0),
        0.0,
    );
    s.obstacles = vec![
        static_cluster(blob(6.0, 0.0, 0.25)),
        static_cluster(blob(9.5, 0.4, 0.25)),
        static_cluster(blob(12.5, -0.35, 0.25)),
    ];
    s.sim.max_ticks = 600;
    s
}

/// U-shaped reference with static clutter near the path; the layout used by
/// the criteria-combination study.
pub fn fig4_ushape_static() -> Scenario {
    let mut s = base(
        "fig4_ushape_static",
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 7.0),
            Point2::new(9.0, 7.0),
            Point2::new(9.0, 0.0),
        ],
        Point2::new(0.0, 0.0),
        90.0,
    );
    s.obstacles = vec![
        // on the first leg: forces the first detour
        static_cluster(blob(0.0, 5.5, 0.25)),
        // clutter along the top leg, straddling the path
        static_cluster(blob(3.0, 7.6, 0.25)),
        static_cluster(blob(5.5, 6.3, 0.25)),
        static_cluster(blob(5.9, 7.6, 0.0)),
        // on the final leg
        static_cluster(blob(9.6, 3.0, 0.25)),
    ];
    s.sim.max_ticks = 800;
    s
}

/// Bounded pool with a U-shaped course and three moving containers. Two of
/// them transiently wall off the top leg; one later moves away and the
/// course clears.
pub fn fig8_pool_dynamic() -> Scenario {
    let mut s = base(
        "fig8_pool_dynamic",
        vec![
            Point2::new(11.5, 1.2),
            Point2::new(11.5, 5.2),
            Point2::new(1.2, 5.2),
            Point2::new(1.2, 1.2),
        ],
        Point2::new(11.5, 1.2),
        90.0,
    );
    // pool walls, sampled at 0.25 m
    let mut wall = Vec::new();
    let (w, h) = (12.5, 6.5);
    let steps_x = (w / 0.25) as i32;
    let steps_y = (h / 0.25) as i32;
    for i in 0..=steps_x {
        let x = i as f64 * 0.25;
        wall.push(Point2::new(x, 0.0));
        wall.push(Point2::new(x, h));
    }
    for j in 1..steps_y {
        let y = j as f64 * 0.25;
        wall.push(Point2::new(0.0, y));
        wall.push(Point2::new(w, y));
    }
    s.obstacles.push(static_cluster(wall));

    // container on the first leg: early detour
    s.obstacles.push(static_cluster(blob(11.5, 3.2, 0.25)));

    // two containers drift in and wall off the top leg around x = 6,
    // then the upper one moves away
    s.obstacles.push(ObstacleCluster {
        points: blob(6.0, 1.5, 0.25),
        motion: Motion::Waypoints {
            schedule: vec![
                MotionKeyframe { t: 0.0, x: 6.0, y: 1.5 },
                MotionKeyframe { t: 8.0, x: 6.0, y: 1.5 },
                MotionKeyframe { t: 12.0, x: 6.0, y: 4.6 },
            ],
        },
    });
    s.obstacles.push(ObstacleCluster {
        points: blob(3.5, 1.5, 0.25),
        motion: Motion::Waypoints {
            schedule: vec![
                MotionKeyframe { t: 0.0, x: 3.5, y: 1.5 },
                MotionKeyframe { t: 8.0, x: 3.5, y: 1.5 },
                MotionKeyframe { t: 12.0, x: 6.0, y: 5.9 },
                MotionKeyframe { t: 30.0, x: 6.0, y: 5.9 },
                MotionKeyframe { t: 36.0, x: 3.0, y: 1.8 },
            ],
        },
    });
    s.sim.max_ticks = 900;
    s
}

/// Straight corridor with a permanent full-width wall: no feasible path,
/// the robot holds position until the tick budget runs out.
pub fn blocked_corridor() -> Scenario {
    let mut s = base(
        "blocked_corridor",
        vec![Point2::new(0.0, 0.0), Point2::new(12.0, 0.0)],
        Point2::new(0.0, 0.0),
        0.0,
    );
    let mut wall = Vec::new();
    for j in -10..=10 {
        wall.push(Point2::new(6.0, j as f64 * 0.2));
    }
    s.obstacles = vec![static_cluster(wall)];
    s.sim.max_ticks = 300;
    s
}

/// Seeded random scenario: straight reference with scattered static blobs.
/// Identical seeds produce identical scenarios.
pub fn random_scenario(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = base(
        &format!("random_{seed}"),
        vec![Point2::new(0.0, 0.0), Point2::new(14.0, 0.0)],
        Point2::new(0.0, 0.0),
        0.0,
    );
    s.sim.seed = seed;
    s.sim.max_ticks = 500;
    let clusters = rng.gen_range(2..=5);
    for _ in 0..clusters {
        let cx = rng.gen_range(3.0..11.0);
        let cy = rng.gen_range(-0.8..0.8);
        let half = if rng.gen_bool(0.5) { 0.25 } else { 0.0 };
        s.obstacles.push(static_cluster(blob(cx, cy, half)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_scenarios_validate() {
        for name in BUNDLED {
            let s = bundled(name).unwrap();
            s.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name, *name);
        }
        assert!(bundled("nope").is_none());
    }

    #[test]
    fn random_scenarios_validate_and_are_deterministic() {
        for seed in 0..20 {
            let a = random_scenario(seed);
            a.validate().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(a, random_scenario(seed));
        }
    }
}
