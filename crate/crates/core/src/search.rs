//! Lexicographic single-source shortest-path search in two interchangeable
//! implementations: a flat-queue variant with O(K|V|^2) worst case and a
//! binary-heap variant targeting O(K|V|log|V| + K|E|), plus a brute-force
//! path-enumeration oracle for verification.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::costs::{costs_tied, lex_compare, CostVector};
use crate::graph::PlanGraph;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("init node {0} not in graph of {1} nodes")]
    InitNotInGraph(usize, usize),
    #[error("graph too large for exhaustive enumeration ({0} nodes)")]
    OracleGuard(usize),
}

/// Full single-source result of a lexicographic search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    k: usize,
    /// Flat row-major `[node][level]` cost-to-come; infinite for unreachable nodes.
    costs: Vec<f64>,
    parents: Vec<Option<usize>>,
    settled: Vec<usize>,
}

impl SearchResult {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cost_of(&self, node: usize) -> &[f64] {
        &self.costs[node * self.k..(node + 1) * self.k]
    }

    pub fn cost_vector(&self, node: usize) -> CostVector {
        CostVector(self.cost_of(node).to_vec())
    }

    pub fn parent_of(&self, node: usize) -> Option<usize> {
        self.parents[node]
    }

    pub fn settled_order(&self) -> &[usize] {
        &self.settled
    }

    pub fn reachable(&self, node: usize) -> bool {
        self.cost_of(node).iter().all(|c| c.is_finite())
    }
}

/// Follow parent pointers from `goal` back to the source; `None` when the
/// goal is unreachable.
pub fn extract_path(r: &SearchResult, goal: usize) -> Option<Vec<usize>> {
    if !r.reachable(goal) {
        return None;
    }
    let mut path = vec![goal];
    let mut cur = goal;
    while let Some(p) = r.parent_of(cur) {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Some(path)
}

/// Relaxation cascade shared by both implementations: strict improvement at
/// level k updates levels k..K and the parent; a tie (within `tie_epsilon`)
/// continues to the next level; a worsening stops.
fn relax(
    cand: &[f64],
    current: &mut [f64],
    parent: &mut Option<usize>,
    via: usize,
    tie_epsilon: f64,
) -> bool {
    for k in 0..cand.len() {
        if costs_tied(cand[k], current[k], tie_epsilon) {
            continue;
        }
        if cand[k] < current[k] {
            current[k..].copy_from_slice(&cand[k..]);
            *parent = Some(via);
            return true;
        }
        return false;
    }
    false
}

/// The number of cost levels carried by the graph's edges (1 for an edgeless
/// graph, where the choice does not matter).
fn edge_dim(g: &PlanGraph) -> usize {
    g.edges
        .iter()
        .flat_map(|out| out.iter())
        .map(|e| e.cost.len())
        .next()
        .unwrap_or(1)
}

/// Literal flat-queue lexicographic search: each iteration filters the
/// unsettled set by minimum cost level by level until one node remains
/// (remaining ties break by lowest node id), settles it, and relaxes its
/// outgoing edges. Worst case O(K|V|^2).
pub fn lex_search_naive(
    g: &PlanGraph,
    init: usize,
    tie_epsilon: f64,
) -> Result<SearchResult, SearchError> {
    let n = g.node_count();
    if init >= n {
        return Err(SearchError::InitNotInGraph(init, n));
    }
    let k = edge_dim(g);
    let mut res = SearchResult {
        k,
        costs: vec![f64::INFINITY; n * k],
        parents: vec![None; n],
        settled: Vec::with_capacity(n),
    };
    res.costs[init * k..(init + 1) * k].fill(0.0);

    let mut done = vec![false; n];
    let mut unsettled: Vec<usize> = (0..n).collect();
    let mut cand = vec![0.0; k];
    let mut min_set = Vec::with_capacity(n);
    while !unsettled.is_empty() {
        min_set.clear();
        min_set.extend_from_slice(&unsettled);
        for level in 0..k {
            let min_val = min_set
                .iter()
                .map(|&v| res.costs[v * k + level])
                .fold(f64::INFINITY, f64::min);
            min_set.retain(|&v| costs_tied(res.costs[v * k + level], min_val, tie_epsilon));
            if min_set.len() == 1 {
                break;
            }
        }
        let x_i = min_set.iter().copied().min().unwrap();
        unsettled.retain(|&v| v != x_i);
        done[x_i] = true;
        res.settled.push(x_i);
        if !res.reachable(x_i) {
            continue;
        }
        for e in &g.edges[x_i] {
            let j = e.target;
            if done[j] {
                // settled nodes cannot improve under non-negative weights;
                // this realizes the exclusion of nodes already on the path
                continue;
            }
            for level in 0..k {
                cand[level] = res.costs[x_i * k + level] + e.cost.values()[level];
            }
            let row = &mut res.costs[j * k..(j + 1) * k];
            relax(&cand, row, &mut res.parents[j], x_i, tie_epsilon);
        }
    }
    Ok(res)
}

/// Heap entry for a min-heap over `BinaryHeap`'s max-heap semantics:
/// lexicographically smaller cost (exact float ordering) pops first, cost
/// ties break by lowest node id.
struct HeapEntry {
    cost: Vec<f64>,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.cost.iter().zip(&other.cost) {
            match a.partial_cmp(b).expect("costs must not be NaN") {
                Ordering::Equal => continue,
                ord => return ord.reverse(),
            }
        }
        other.node.cmp(&self.node)
    }
}

/// Binary-heap lexicographic search with lazy deletion. Identical contract
/// to [`lex_search_naive`]; parent trees may differ only among exact
/// lexicographic ties.
pub fn lex_search_heap(
    g: &PlanGraph,
    init: usize,
    tie_epsilon: f64,
) -> Result<SearchResult, SearchError> {
    let n = g.node_count();
    if init >= n {
        return Err(SearchError::InitNotInGraph(init, n));
    }
    let k = edge_dim(g);
    let mut res = SearchResult {
        k,
        costs: vec![f64::INFINITY; n * k],
        parents: vec![None; n],
        settled: Vec::with_capacity(n),
    };
    res.costs[init * k..(init + 1) * k].fill(0.0);

    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        cost: vec![0.0; k],
        node: init,
    });
    let mut cand = vec![0.0; k];
    while let Some(entry) = heap.pop() {
        let x_i = entry.node;
        if done[x_i] {
            continue; // stale entry left behind by lazy deletion
        }
        done[x_i] = true;
        res.settled.push(x_i);
        for e in &g.edges[x_i] {
            let j = e.target;
            if done[j] {
                continue;
            }
            for level in 0..k {
                cand[level] = res.costs[x_i * k + level] + e.cost.values()[level];
            }
            let row = &mut res.costs[j * k..(j + 1) * k];
            if relax(&cand, row, &mut res.parents[j], x_i, tie_epsilon) {
                heap.push(HeapEntry {
                    cost: row.to_vec(),
                    node: j,
                });
            }
        }
    }
    // unreachable nodes never enter the heap; append them in id order so the
    // settled list covers the graph like the naive variant's does
    for v in 0..n {
        if !done[v] {
            res.settled.push(v);
        }
    }
    Ok(res)
}

/// Exhaustive enumeration of simple init-goal paths; exact lexicographic
/// minimum (no tie tolerance). Guarded to small graphs.
pub fn brute_force_lex(
    g: &PlanGraph,
    init: usize,
    goal: usize,
) -> Result<Option<(CostVector, Vec<usize>)>, SearchError> {
    const MAX_NODES: usize = 15;
    const MAX_PATHS: usize = 1_000_000;
    let n = g.node_count();
    if n > MAX_NODES {
        return Err(SearchError::OracleGuard(n));
    }
    if init >= n {
        return Err(SearchError::InitNotInGraph(init, n));
    }
    let k = edge_dim(g);

    struct Dfs<'a> {
        g: &'a PlanGraph,
        goal: usize,
        visited: Vec<bool>,
        path: Vec<usize>,
        acc: CostVector,
        best: Option<(CostVector, Vec<usize>)>,
        explored: usize,
    }
    impl Dfs<'_> {
        fn go(&mut self, v: usize) -> Result<(), SearchError> {
            if v == self.goal {
                self.explored += 1;
                if self.explored > MAX_PATHS {
                    return Err(SearchError::OracleGuard(self.g.node_count()));
                }
                let better = self
                    .best
                    .as_ref()
                    .map_or(true, |(c, _)| lex_compare(&self.acc, c, 0.0) == Ordering::Less);
                if better {
                    self.best = Some((self.acc.clone(), self.path.clone()));
                }
                return Ok(());
            }
            for ei in 0..self.g.edges[v].len() {
                let to = self.g.edges[v][ei].target;
                if self.visited[to] {
                    continue;
                }
                let cost = self.g.edges[v][ei].cost.clone();
                self.visited[to] = true;
                self.path.push(to);
                self.acc.add_assign(&cost);
                self.go(to)?;
                for (a, b) in self.acc.0.iter_mut().zip(cost.values()) {
                    *a -= *b;
                }
                self.path.pop();
                self.visited[to] = false;
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        g,
        goal,
        visited: vec![false; n],
        path: vec![init],
        acc: CostVector::zeros(k),
        best: None,
        explored: 0,
    };
    dfs.visited[init] = true;
    dfs.go(init)?;
    Ok(dfs.best)
}
