//! Command-line front end: run scenarios, sweep criteria combinations,
//! benchmark the search implementations, and validate scenario files.

mod overrides;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use lexiplan::bench::{hierarchy, run_benchmark, BenchmarkRecord};
use lexiplan::costs::{edge_cost, CostConfig};
use lexiplan::geometry::{ObstacleSet, Point2, Pose2D};
use lexiplan::graph::generate_graph;
use lexiplan::search::{extract_path, lex_search_heap};
use lexiplan::sim::{run_scenario, scenarios, sense, OutputKind, RunMetrics, Scenario, World};

#[derive(Parser)]
#[command(name = "lexiplan", version, about = "Multi-objective path planning over state lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and emit metrics.json, trace.csv and run.svg.
    Run {
        /// Scenario file path, or the name of a bundled scenario
        #[arg(long)]
        scenario: String,
        /// Output directory (created if missing)
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the scenario's simulation seed
        #[arg(long)]
        seed: Option<u64>,
        /// Dotted-path overrides, e.g. --set graph.d_roll=5
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Plan once under [distance], [heading,distance] and
    /// [risk,heading,distance] and report all three costs for each.
    CriteriaStudy {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Time lattice construction and both searches over a density sweep.
    Benchmark {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Lattice densities (lateral step, m); smaller is denser
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.35,0.25,0.17,0.12,0.08")]
        density: Vec<f64>,
        /// Numbers of cost levels to sweep
        #[arg(long = "k-levels", value_delimiter = ',', default_value = "1,2,3")]
        k_levels: Vec<usize>,
        /// Timed repetitions per configuration (after one discarded warmup)
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse and validate a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, out, seed, set } => cmd_run(&scenario, &out, seed, &set),
        Command::CriteriaStudy { scenario, seed, set } => cmd_criteria_study(&scenario, seed, &set),
        Command::Benchmark { out, density, k_levels, reps, seed } => {
            cmd_benchmark(&out, &density, &k_levels, reps, seed)
        }
        Command::Validate { scenario } => cmd_validate(&scenario),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Load a scenario from a file path or by bundled name, then apply the seed
/// and `--set` overrides through its JSON form.
fn load_scenario(spec: &str, seed: Option<u64>, set: &[String]) -> Result<Scenario, String> {
    let json = if Path::new(spec).is_file() {
        fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?
    } else if let Some(s) = scenarios::bundled(spec) {
        s.to_json()
    } else {
        return Err(format!(
            "`{spec}` is neither a scenario file nor a bundled scenario (available: {})",
            scenarios::BUNDLED.join(", ")
        ));
    };
    let mut value: Value = serde_json::from_str(&json).map_err(|e| format!("{spec}: {e}"))?;
    for s in set {
        overrides::apply(&mut value, s)?;
    }
    if let Some(seed) = seed {
        overrides::apply(&mut value, &format!("sim.seed={seed}"))?;
    }
    let scenario: Scenario =
        serde_json::from_value(value).map_err(|e| format!("{spec}: {e}"))?;
    scenario.validate().map_err(|e| format!("{spec}: {e}"))?;
    Ok(scenario)
}

fn cmd_run(spec: &str, out: &Path, seed: Option<u64>, set: &[String]) -> Result<u8, String> {
    let scenario = load_scenario(spec, seed, set)?;
    let metrics = run_scenario(&scenario).map_err(|e| e.to_string())?;
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;

    let json = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
    fs::write(out.join("metrics.json"), json + "\n").map_err(|e| e.to_string())?;
    fs::write(out.join("trace.csv"), trace_csv(&metrics)).map_err(|e| e.to_string())?;
    fs::write(out.join("run.svg"), run_svg(&scenario, &metrics)).map_err(|e| e.to_string())?;

    println!(
        "{}: {} in {} ticks, {} replans, {} hold ticks",
        metrics.scenario,
        if metrics.goal_reached { "goal reached" } else { "timed out" },
        metrics.ticks_elapsed,
        metrics.replan_count,
        metrics.hold_ticks,
    );
    Ok(if metrics.goal_reached { 0 } else { 2 })
}

fn kind_str(k: OutputKind) -> &'static str {
    match k {
        OutputKind::Follow => "follow",
        OutputKind::Hold => "hold",
        OutputKind::GoalReached => "goal_reached",
    }
}

fn trace_csv(metrics: &RunMetrics) -> String {
    let mut out = format!("# schema_version={}\n", metrics.schema_version);
    out.push_str("tick,x,y,heading,kind\n");
    for s in &metrics.executed_path {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.tick, s.pose.x, s.pose.y, s.pose.heading, kind_str(s.kind)
        ));
    }
    out
}

fn run_svg(scenario: &Scenario, metrics: &RunMetrics) -> String {
    let reference: Vec<(f64, f64)> =
        scenario.reference_path.iter().map(|p| (p.x, p.y)).collect();
    let trace: Vec<(f64, f64)> =
        metrics.executed_path.iter().map(|s| (s.pose.x, s.pose.y)).collect();
    let obstacles_t0: Vec<Point2> = scenario.world_points_at(0.0).points().to_vec();

    let all = reference
        .iter()
        .chain(trace.iter())
        .copied()
        .chain(obstacles_t0.iter().map(|p| (p.x, p.y)));
    let bounds = svg::Canvas::bounds_of(all, 1.0);
    let mut c = svg::Canvas::new(760.0, 560.0, bounds);

    // obstacle positions sampled over the run; static clusters overdraw
    let dt = scenario.sim.tick_dt;
    let last = metrics.ticks_elapsed;
    let stride = (last / 8).max(1);
    let mut t = 0;
    while t <= last {
        let age = t as f64 / last.max(1) as f64;
        for p in scenario.world_points_at(t as f64 * dt).points() {
            c.circle(p.x, p.y, 2.5, "#444444", 0.25 + 0.5 * age);
        }
        t += stride;
    }

    c.polyline(&reference, "#999999", 1.5, 1.0);
    for path in &metrics.replanned_paths {
        let pts: Vec<(f64, f64)> = path.iter().map(|p| (p.x, p.y)).collect();
        c.polyline(&pts, "#4477cc", 1.0, 0.6);
    }
    let trace_color = if metrics.goal_reached { "#22aa44" } else { "#cc3333" };
    c.polyline(&trace, trace_color, 2.5, 1.0);
    if let Some(s) = metrics.executed_path.first() {
        c.circle(s.pose.x, s.pose.y, 4.0, trace_color, 1.0);
    }
    c.label(24.0, 16.0, &metrics.scenario, "#333333");
    c.finish()
}

fn cmd_criteria_study(spec: &str, seed: Option<u64>, set: &[String]) -> Result<u8, String> {
    let scenario = load_scenario(spec, seed, set)?;
    let gcfg = scenario.graph.config().map_err(|e| e.to_string())?;
    let full_ccfg = scenario.costs.config().map_err(|e| e.to_string())?;
    let reference = scenario.reference().map_err(|e| e.to_string())?;

    // capture the state at the first replan event; if the run never
    // replans, study the start state instead
    let mut world = World::new(scenario.clone()).map_err(|e| e.to_string())?;
    let mut state: Option<(Pose2D, ObstacleSet)> = None;
    while !world.is_done() {
        let before = world.metrics().replan_count;
        let pose = world.robot;
        world.step().map_err(|e| e.to_string())?;
        if world.metrics().replan_count > before {
            state = Some((pose, world.sensed.clone()));
            break;
        }
    }
    let (pose, obstacles) = match state {
        Some(s) => s,
        None => {
            let start = scenario.robot_start.pose().map_err(|e| e.to_string())?;
            let visible = sense(&scenario.world_points_at(0.0), &[], start, gcfg.d_sensor);
            (start, ObstacleSet::new(visible))
        }
    };

    println!("planning state: ({:.2}, {:.2}), {} obstacle points sensed", pose.x, pose.y, obstacles.points().len());
    println!("{:<24} {:>12} {:>12} {:>12}", "hierarchy", "risk", "heading", "distance");
    for k in 1..=3usize {
        let ccfg = CostConfig { criteria: hierarchy(k), ..full_ccfg.clone() };
        let g = generate_graph(&reference, pose, &obstacles, &gcfg, &ccfg)
            .map_err(|e| format!("K={k}: {e}"))?;
        let r = lex_search_heap(&g, g.init_node, ccfg.tie_epsilon).map_err(|e| format!("K={k}: {e}"))?;
        let path = extract_path(&r, g.goal_node)
            .ok_or_else(|| format!("K={k}: goal unreachable from the planning state"))?;

        // measure all three costs over the planned lattice path, whether or
        // not they took part in the optimization
        let pts: Vec<Point2> = path.iter().map(|&id| g.nodes[id].pose.position()).collect();
        let measured = edge_cost(&pts, &obstacles, &reference, &full_ccfg)
            .map_err(|e| format!("K={k}: {e}"))?;
        let v = measured.values();

        let name = match k {
            1 => "distance",
            2 => "heading+distance",
            _ => "risk+heading+distance",
        };
        // parenthesized costs were measured but not optimized
        let cell = |level: usize| {
            let active = level >= 3 - k;
            if active {
                format!("{:.3}", v[level])
            } else {
                format!("({:.3})", v[level])
            }
        };
        println!("{name:<24} {:>12} {:>12} {:>12}", cell(0), cell(1), cell(2));
    }
    Ok(0)
}

fn cmd_benchmark(
    out: &Path,
    densities: &[f64],
    k_levels: &[usize],
    reps: usize,
    seed: u64,
) -> Result<u8, String> {
    if densities.is_empty() || k_levels.is_empty() {
        return Err("benchmark needs at least one density and one K".into());
    }
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;

    // timing runs stay sequential: parallel timing would contend for cores
    // and corrupt the medians
    let mut records: Vec<(f64, BenchmarkRecord)> = Vec::new();
    for &density in densities {
        for &k in k_levels {
            let rec = run_benchmark(density, k, reps, seed);
            eprintln!(
                "density {density}: |V|={} |E|={} K={k} construct {:.4}s naive {:.4}s heap {:.4}s",
                rec.node_count, rec.edge_count, rec.construction_seconds, rec.search_naive_seconds, rec.search_heap_seconds
            );
            records.push((density, rec));
        }
    }

    let mut csv = String::from("# schema_version=1\n");
    csv.push_str("density,node_count,edge_count,k,construction_seconds,search_naive_seconds,search_heap_seconds,repetitions\n");
    for (d, r) in &records {
        csv.push_str(&format!(
            "{d},{},{},{},{},{},{},{}\n",
            r.node_count,
            r.edge_count,
            r.k,
            r.construction_seconds,
            r.search_naive_seconds,
            r.search_heap_seconds,
            r.repetitions
        ));
    }
    fs::write(out.join("bench.csv"), csv).map_err(|e| e.to_string())?;
    fs::write(out.join("bench.svg"), bench_svg(&records)).map_err(|e| e.to_string())?;
    println!("wrote {} records to {}", records.len(), out.display());
    Ok(0)
}

fn bench_svg(records: &[(f64, BenchmarkRecord)]) -> String {
    let xmax = records.iter().map(|(_, r)| r.node_count as f64).fold(1.0, f64::max);
    let ymax = records
        .iter()
        .flat_map(|(_, r)| [r.construction_seconds, r.search_naive_seconds, r.search_heap_seconds])
        .fold(1e-6, f64::max);
    let mut c = svg::Canvas::new(760.0, 560.0, (0.0, xmax * 1.05, 0.0, ymax * 1.1));

    c.polyline(&[(0.0, 0.0), (xmax * 1.05, 0.0)], "#333333", 1.0, 1.0);
    c.polyline(&[(0.0, 0.0), (0.0, ymax * 1.1)], "#333333", 1.0, 1.0);

    let ks: Vec<usize> = {
        let mut ks: Vec<usize> = records.iter().map(|(_, r)| r.k).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    };
    let naive_colors = ["#ffaaaa", "#ee6666", "#cc2222"];
    let heap_colors = ["#aaccff", "#6699ee", "#2255cc"];
    let mut legend_y = 16.0;
    for (i, &k) in ks.iter().enumerate() {
        let mut pts: Vec<(f64, f64, f64)> = records
            .iter()
            .filter(|(_, r)| r.k == k)
            .map(|(_, r)| (r.node_count as f64, r.search_naive_seconds, r.search_heap_seconds))
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let naive: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.1)).collect();
        let heap: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.2)).collect();
        c.polyline(&naive, naive_colors[i % 3], 1.5, 1.0);
        c.polyline(&heap, heap_colors[i % 3], 1.5, 1.0);
        c.label(24.0, legend_y, &format!("naive K={k}"), naive_colors[i % 3]);
        c.label(110.0, legend_y, &format!("heap K={k}"), heap_colors[i % 3]);
        legend_y += 14.0;
    }

    let mut construction: Vec<(f64, f64)> = records
        .iter()
        .filter(|(_, r)| r.k == *ks.last().unwrap())
        .map(|(_, r)| (r.node_count as f64, r.construction_seconds))
        .collect();
    construction.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    c.polyline(&construction, "#333333", 1.5, 1.0);
    c.label(196.0, 16.0, "construction", "#333333");
    c.label(620.0, 546.0, "nodes \u{2192}", "#333333");
    c.finish()
}

fn cmd_validate(spec: &str) -> Result<u8, String> {
    let scenario = load_scenario(spec, None, &[])?;
    println!(
        "ok: {} ({} reference vertices, {} obstacle clusters, {} max ticks)",
        scenario.name,
        scenario.reference_path.len(),
        scenario.obstacles.len(),
        scenario.sim.max_ticks
    );
    Ok(0)
}
