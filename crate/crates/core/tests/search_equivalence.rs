//! The two lexicographic search implementations against each other, against
//! exhaustive path enumeration, and against textbook single-objective
//! Dijkstra on small random graphs.
//!
//! Edge costs are dyadic rationals (multiples of 1/4) so every sum is exact
//! in binary floating point and all comparisons can demand bit equality.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use lexiplan::graph::PlanGraph;
use lexiplan::search::{brute_force_lex, extract_path, lex_search_heap, lex_search_naive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random directed graph with up to 15 nodes and k-level dyadic costs.
/// Every level is non-negative; the bottom level is strictly positive.
fn random_graph(rng: &mut ChaCha8Rng, k: usize) -> PlanGraph {
    let n = rng.gen_range(2..=15);
    let mut edges = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from == to || !rng.gen_bool(0.3) {
                continue;
            }
            let mut cost = Vec::with_capacity(k);
            for level in 0..k {
                let quarters = if level + 1 == k {
                    rng.gen_range(1..=16) // strictly positive bottom level
                } else {
                    rng.gen_range(0..=16)
                };
                cost.push(quarters as f64 * 0.25);
            }
            edges.push((from, to, cost));
        }
    }
    PlanGraph::synthetic(n, &edges)
}

/// Textbook binary-heap Dijkstra over a single scalar level of the edge
/// costs. Returns the distance array.
fn scalar_dijkstra(g: &PlanGraph, init: usize, level: usize) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.partial_cmp(&self.0).unwrap()
        }
    }

    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[init] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry(0.0, init));
    while let Some(Entry(d, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for e in &g.edges[v] {
            let cand = d + e.cost.values()[level];
            if cand < dist[e.target] {
                dist[e.target] = cand;
                heap.push(Entry(cand, e.target));
            }
        }
    }
    dist
}

/// Sum a node path's edge costs; panics if an edge is missing.
fn path_cost(g: &PlanGraph, path: &[usize], k: usize) -> Vec<f64> {
    let mut acc = vec![0.0; k];
    for w in path.windows(2) {
        let e = g.edges[w[0]]
            .iter()
            .find(|e| e.target == w[1])
            .expect("path uses a missing edge");
        for (a, b) in acc.iter_mut().zip(e.cost.values()) {
            *a += *b;
        }
    }
    acc
}

#[test]
fn naive_and_heap_match_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..1000 {
        let k = case % 3 + 1;
        let g = random_graph(&mut rng, k);
        let goal = rng.gen_range(1..g.node_count());

        let naive = lex_search_naive(&g, 0, 0.0).unwrap();
        let heap = lex_search_heap(&g, 0, 0.0).unwrap();
        let oracle = brute_force_lex(&g, 0, goal).unwrap();

        match oracle {
            None => {
                assert!(!naive.reachable(goal), "case {case}: naive reached an unreachable goal");
                assert!(!heap.reachable(goal), "case {case}: heap reached an unreachable goal");
            }
            Some((best, _)) => {
                assert_eq!(naive.cost_of(goal), best.values(), "case {case}: naive cost");
                assert_eq!(heap.cost_of(goal), best.values(), "case {case}: heap cost");
                // the reported parent trees must realize the reported costs
                for r in [&naive, &heap] {
                    let path = extract_path(r, goal).unwrap();
                    assert_eq!(path_cost(&g, &path, k), best.values(), "case {case}: path cost");
                }
            }
        }
    }
}

#[test]
fn lex_solution_is_optimal_in_the_primary_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for case in 0..1000 {
        let k = case % 3 + 1;
        let g = random_graph(&mut rng, k);
        let _goal = rng.gen_range(1..g.node_count()); // keep the corpus aligned

        let dist = scalar_dijkstra(&g, 0, 0);
        for r in [lex_search_naive(&g, 0, 0.0).unwrap(), lex_search_heap(&g, 0, 0.0).unwrap()] {
            for v in 0..g.node_count() {
                assert_eq!(
                    r.cost_of(v)[0],
                    dist[v],
                    "case {case}: level-0 cost at node {v} is not Dijkstra-optimal"
                );
            }
        }
    }
}

#[test]
fn single_level_search_reduces_to_dijkstra() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..100 {
        let g = random_graph(&mut rng, 1);
        let dist = scalar_dijkstra(&g, 0, 0);
        let naive = lex_search_naive(&g, 0, 0.0).unwrap();
        let heap = lex_search_heap(&g, 0, 0.0).unwrap();
        for v in 0..g.node_count() {
            assert_eq!(naive.cost_of(v)[0], dist[v], "case {case}: naive at node {v}");
            assert_eq!(heap.cost_of(v)[0], dist[v], "case {case}: heap at node {v}");
        }
    }
}
