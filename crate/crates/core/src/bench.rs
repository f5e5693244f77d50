//! Runtime-scaling measurement harness: times lattice construction and both
//! search variants over graphs of increasing node count and varying numbers
//! of cost criteria.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::costs::{CostConfig, Criterion};
use crate::geometry::{ObstacleSet, Point2, Pose2D, ReferencePath};
use crate::graph::{generate_graph, GraphConfig, PlanGraph};
use crate::search::{lex_search_heap, lex_search_naive};

/// One timed configuration; times are medians over `repetitions` runs after
/// a discarded warmup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub node_count: usize,
    pub edge_count: usize,
    pub k: usize,
    pub construction_seconds: f64,
    pub search_naive_seconds: f64,
    pub search_heap_seconds: f64,
    pub repetitions: usize,
}

/// Criteria hierarchy with K levels (1 = distance, 2 = heading+distance,
/// 3 = risk+heading+distance).
pub fn hierarchy(k: usize) -> Vec<Criterion> {
    match k {
        1 => vec![Criterion::Distance],
        2 => vec![Criterion::Heading, Criterion::Distance],
        _ => vec![Criterion::Risk, Criterion::Heading, Criterion::Distance],
    }
}

/// Lattice setup used by the sweep: a long straight reference with sparse
/// random obstacle clutter, densified via the lattice steps.
pub struct BenchSetup {
    pub reference: ReferencePath,
    pub obstacles: ObstacleSet,
    pub gcfg: GraphConfig,
}

/// Build the sweep setup for a given lattice density. `density` is the
/// lateral step in meters; the station step is twice that.
pub fn setup_for_density(density: f64, seed: u64) -> BenchSetup {
    let length = 52.0;
    let reference =
        ReferencePath::new(vec![Point2::new(0.0, 0.0), Point2::new(length, 0.0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for _ in 0..30 {
        let cx: f64 = rng.gen_range(6.0..length - 6.0);
        let cy: f64 = rng.gen_range(-2.4..2.4);
        for i in -1..=1 {
            for j in -1..=1 {
                pts.push(Point2::new(cx + i as f64 * 0.2, cy + j as f64 * 0.2));
            }
        }
    }
    let gcfg = GraphConfig {
        d_span: 3.0,
        d_roll: 50.0,
        d_sensor: 5.0,
        station_step: density * 2.0,
        lateral_step: density,
        rollout_length: 3.0,
        rollin_length: 3.0,
        inflation_radius: 0.3,
        ..GraphConfig::default()
    };
    BenchSetup {
        reference,
        obstacles: ObstacleSet::new(pts),
        gcfg,
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

/// Time graph construction and both searches for one density and K.
pub fn run_benchmark(density: f64, k: usize, repetitions: usize, seed: u64) -> BenchmarkRecord {
    let setup = setup_for_density(density, seed);
    let ccfg = CostConfig {
        criteria: hierarchy(k),
        ..CostConfig::default()
    };
    let x_c = Pose2D::new(0.0, 0.0, 0.0);

    let build = || -> PlanGraph {
        generate_graph(&setup.reference, x_c, &setup.obstacles, &setup.gcfg, &ccfg)
            .expect("benchmark lattice must generate")
    };

    // warmup, discarded
    let graph = build();

    let mut construction = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let t = Instant::now();
        let g = build();
        construction.push(t.elapsed().as_secs_f64());
        assert_eq!(g.node_count(), graph.node_count());
    }

    let _ = lex_search_naive(&graph, graph.init_node, ccfg.tie_epsilon).unwrap();
    let mut naive = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let t = Instant::now();
        let r = lex_search_naive(&graph, graph.init_node, ccfg.tie_epsilon).unwrap();
        naive.push(t.elapsed().as_secs_f64());
        assert!(r.reachable(graph.goal_node));
    }

    let _ = lex_search_heap(&graph, graph.init_node, ccfg.tie_epsilon).unwrap();
    let mut heap = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let t = Instant::now();
        let r = lex_search_heap(&graph, graph.init_node, ccfg.tie_epsilon).unwrap();
        heap.push(t.elapsed().as_secs_f64());
        assert!(r.reachable(graph.goal_node));
    }

    BenchmarkRecord {
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        k,
        construction_seconds: median(construction),
        search_naive_seconds: median(naive),
        search_heap_seconds: median(heap),
        repetitions,
    }
}

/// Least-squares line fit; returns (slope, intercept, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let (slope, intercept, r2) = linear_fit(&xs, &ys);
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept - 1.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn benchmark_record_shape() {
        let rec = run_benchmark(0.75, 3, 1, 7);
        assert!(rec.node_count > 100);
        assert!(rec.edge_count > rec.node_count);
        assert_eq!(rec.k, 3);
        assert!(rec.construction_seconds > 0.0);
    }
}
