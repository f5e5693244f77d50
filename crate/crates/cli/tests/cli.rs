//! Black-box tests of the command-line interface: exit codes, emitted
//! files, and error diagnostics.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lexiplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexiplan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn data_rows(path: &Path) -> usize {
    let text = fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.starts_with('#')).count() - 1 // minus header
}

#[test]
fn run_empty_straight_exits_zero_with_one_trace_row_per_tick() {
    let dir = tempfile::tempdir().unwrap();
    let out = lexiplan(&["run", "--scenario", "empty_straight", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{out:?}");

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("metrics.json")).unwrap()).unwrap();
    let ticks = metrics["ticks_elapsed"].as_u64().unwrap() as usize;
    assert_eq!(data_rows(&dir.path().join("trace.csv")), ticks + 1);

    let svg = fs::read_to_string(dir.path().join("run.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn run_blocked_corridor_exits_two_on_timeout() {
    let dir = tempfile::tempdir().unwrap();
    let out = lexiplan(&["run", "--scenario", "blocked_corridor", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2, "{out:?}");
}

#[test]
fn malformed_scenario_exits_one_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"schema_version": 1, "name": "x"}"#).unwrap();
    let out = lexiplan(&["run", "--scenario", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("reference_path"), "diagnostic names the missing field: {stderr}");
}

#[test]
fn validate_accepts_bundled_and_rejects_unknown_names() {
    for name in ["empty_straight", "fig4_ushape_static", "fig8_pool_dynamic"] {
        let out = lexiplan(&["validate", "--scenario", name]);
        assert_eq!(exit_code(&out), 0, "{name}: {out:?}");
    }
    let out = lexiplan(&["validate", "--scenario", "no_such_scenario"]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bundled"), "error lists the bundled names: {stderr}");
}

#[test]
fn set_overrides_reach_the_scenario() {
    // cutting max_ticks turns the easy run into a timeout
    let dir = tempfile::tempdir().unwrap();
    let out = lexiplan(&[
        "run",
        "--scenario",
        "empty_straight",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "sim.max_ticks=10",
    ]);
    assert_eq!(exit_code(&out), 2, "{out:?}");

    let out = lexiplan(&["run", "--scenario", "empty_straight", "--out", dir.path().to_str().unwrap(), "--set", "bogus.path=1"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn criteria_study_on_obstacle_free_scenario_gives_identical_rows() {
    let out = lexiplan(&["criteria-study", "--scenario", "empty_straight"]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<[f64; 3]> = stdout
        .lines()
        .filter(|l| {
            l.starts_with("distance")
                || l.starts_with("heading+distance")
                || l.starts_with("risk+heading+distance")
        })
        .map(parse_costs)
        .collect();
    assert_eq!(rows.len(), 3, "three hierarchy rows: {stdout}");
    for row in &rows {
        assert_eq!(row[0], 0.0, "risk is zero without obstacles");
        assert_eq!(row[1], 0.0, "heading penalty is zero on the straight path");
        assert_eq!(row[2], rows[0][2], "all hierarchies pick the same path");
    }
}

/// Pull the three trailing cost cells out of a criteria-study table row;
/// parenthesized cells are passively measured values.
fn parse_costs(line: &str) -> [f64; 3] {
    let cells: Vec<f64> = line
        .split_whitespace()
        .rev()
        .take(3)
        .map(|c| c.trim_matches(['(', ')']).parse().unwrap())
        .collect();
    [cells[2], cells[1], cells[0]]
}
