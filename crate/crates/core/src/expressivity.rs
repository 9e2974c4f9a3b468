//! Constructive filtrations that expose cycle lengths and component sizes,
//! and Monte-Carlo statistics of the bar spanning the global extremes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barcode::BarKind;
use crate::datasets::{distinct_uniform_values, stream_rng};
use crate::error::Error as CoreError;
use crate::graph::{Graph, TieBreakPolicy};
use crate::persistence::compute_extended_persistence;

#[derive(Debug, Error)]
pub enum ExpressivityError {
    #[error("vertex sequence is not a cycle of the graph: {0}")]
    NotACycle(String),
    #[error("cycle has a chord between vertices {0} and {1}")]
    NotChordless(usize, usize),
    #[error("edge {0} is a bridge and lies on no cycle")]
    HasBridge(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Vertex values under which the target cycle yields the bar
/// `[expected_birth, expected_death]` on unperturbed values.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLengthFiltration {
    pub vertex_values: Vec<f64>,
    pub expected_birth: f64,
    pub expected_death: f64,
}

impl CycleLengthFiltration {
    pub fn expected_persistence(&self) -> f64 {
        self.expected_birth - self.expected_death
    }
}

/// Numbers the cycle `n-1, n-2, ..., n-k` in traversal order and the other
/// vertices `0, 1, ...` in index order.
pub fn build_cycle_length_filtration(g: &Graph, target_cycle: &[usize]) -> Result<CycleLengthFiltration, ExpressivityError> {
    let n = g.num_vertices;
    let k = target_cycle.len();
    if k < 3 {
        return Err(ExpressivityError::NotACycle(format!("{k} vertices")));
    }
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in target_cycle.iter().enumerate() {
        if v >= n {
            return Err(ExpressivityError::NotACycle(format!("vertex {v} out of range")));
        }
        if slot[v] != usize::MAX {
            return Err(ExpressivityError::NotACycle(format!("vertex {v} repeats")));
        }
        slot[v] = i;
    }
    let mut consecutive = vec![false; k];
    for &(u, v) in &g.edges {
        let (a, b) = (slot[u], slot[v]);
        if a == usize::MAX || b == usize::MAX {
            continue;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if hi == lo + 1 {
            consecutive[lo] = true;
        } else if lo == 0 && hi == k - 1 {
            consecutive[k - 1] = true;
        } else {
            return Err(ExpressivityError::NotChordless(u, v));
        }
    }
    if let Some(i) = consecutive.iter().position(|&c| !c) {
        let (a, b) = (target_cycle[i], target_cycle[(i + 1) % k]);
        return Err(ExpressivityError::NotACycle(format!("vertices {a} and {b} are not adjacent")));
    }

    let mut values = vec![0.0; n];
    let mut next = 0.0;
    for v in 0..n {
        if slot[v] == usize::MAX {
            values[v] = next;
            next += 1.0;
        } else {
            values[v] = (n - 1 - slot[v]) as f64;
        }
    }
    Ok(CycleLengthFiltration {
        vertex_values: values,
        expected_birth: (n - 1) as f64,
        expected_death: (n - k) as f64,
    })
}

/// Consecutive integers within each component, components in order of
/// their smallest vertex.
pub fn build_cc_size_filtration(g: &Graph) -> Vec<f64> {
    let (labels, count) = g.component_labels();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        members[c].push(v);
    }
    let mut values = vec![0.0; g.num_vertices];
    let mut next = 0.0;
    for comp in members {
        for v in comp {
            values[v] = next;
            next += 1.0;
        }
    }
    values
}

/// Edges whose removal disconnects their component (low-link traversal).
pub fn find_bridges(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut bridges = Vec::new();
    // (vertex, edge used to enter it, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        stack.push((s, usize::MAX, 0));
        while let Some(top) = stack.last_mut() {
            let (x, via, next) = *top;
            top.2 += 1;
            if let Some(&(y, e)) = adj[x].get(next) {
                if e == via {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    stack.push((y, e, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        bridges.push(via);
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub trials: usize,
    /// Trials whose `B1Ext` contains the bar `[max, min]`.
    pub hit_count: usize,
    pub empirical_probability: f64,
    /// Mean of `max - min` over hit trials; `NaN` without hits.
    pub empirical_mean_persistence: f64,
    /// `2m / (n (n - 1))`, the chance that the extremes are adjacent.
    pub theoretical_probability: f64,
    /// `(n - 1) / (n + 1)`, the expected range of `n` uniform draws.
    pub theoretical_mean: f64,
    /// Trials in which the maximum and minimum vertex are adjacent.
    pub adjacent_count: usize,
    /// Adjacent trials whose barcode contains the bar.
    pub adjacent_hit_count: usize,
}

impl MonteCarloReport {
    /// Binomial standard deviation of the empirical rate around `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn adjacency_rate(&self) -> f64 {
        self.adjacent_count as f64 / self.trials as f64
    }
}

struct Trial {
    hit: bool,
    adjacent: bool,
    range: f64,
}

/// Draws `x_i ~ U(0, 1)` per trial and checks for the `[max, min]` bar.
/// Trial `t` uses its own RNG stream, so the report does not depend on
/// `workers`.
pub fn estimate_max_bar_statistics(
    g: &Graph,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<MonteCarloReport, ExpressivityError> {
    if trials == 0 || workers == 0 {
        return Err(ExpressivityError::InvalidParams("trials and workers must be at least 1".into()));
    }
    let n = g.num_vertices;
    if n < 2 {
        return Err(ExpressivityError::InvalidParams("at least two vertices are required".into()));
    }
    if let Some(r) = g.validate().violations.first() {
        return Err(CoreError::InvalidGraph(r.to_string()).into());
    }
    if let Some(&b) = find_bridges(g).first() {
        return Err(ExpressivityError::HasBridge(b));
    }
    let adjacent: std::collections::HashSet<(usize, usize)> =
        g.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let policy = TieBreakPolicy::default();

    let run = |t: usize| -> Result<Trial, CoreError> {
        let mut rng = stream_rng(seed, t as u64);
        let values = distinct_uniform_values(n, &mut rng);
        let h = g.with_values(values);
        let argmax = (0..n).max_by(|&a, &b| h.vertex_values[a].total_cmp(&h.vertex_values[b])).unwrap();
        let argmin = (0..n).min_by(|&a, &b| h.vertex_values[a].total_cmp(&h.vertex_values[b])).unwrap();
        let (hi, lo) = (h.vertex_values[argmax], h.vertex_values[argmin]);
        let bc = compute_extended_persistence(&h, &policy, false)?;
        let hit = bc.bars(BarKind::B1Ext).iter().any(|b| b.unperturbed(&h) == (hi, lo));
        Ok(Trial {
            hit,
            adjacent: adjacent.contains(&(argmax.min(argmin), argmax.max(argmin))),
            range: hi - lo,
        })
    };
    let results: Vec<Trial> = if workers == 1 {
        (0..trials).map(run).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| ExpressivityError::InvalidParams(e.to_string()))?;
        pool.install(|| (0..trials).into_par_iter().map(run).collect::<Result<_, _>>())?
    };

    let hit_count = results.iter().filter(|t| t.hit).count();
    let range_sum: f64 = results.iter().filter(|t| t.hit).map(|t| t.range).sum();
    let m = g.num_edges();
    Ok(MonteCarloReport {
        num_vertices: n,
        num_edges: m,
        trials,
        hit_count,
        empirical_probability: hit_count as f64 / trials as f64,
        empirical_mean_persistence: if hit_count > 0 { range_sum / hit_count as f64 } else { f64::NAN },
        theoretical_probability: 2.0 * m as f64 / (n * (n - 1)) as f64,
        theoretical_mean: (n - 1) as f64 / (n + 1) as f64,
        adjacent_count: results.iter().filter(|t| t.adjacent).count(),
        adjacent_hit_count: results.iter().filter(|t| t.adjacent && t.hit).count(),
    })
}

/// Complete graph on `n` vertices with values `0..n`.
pub fn clique(n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges, (0..n).map(|v| v as f64).collect())
}

/// Cycle `0 - 1 - ... - (n-1) - 0` with values `0..n`.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect(), (0..n).map(|v| v as f64).collect())
}

/// Parses names like `K4` (clique) and `C5` (cycle).
pub fn named_graph(name: &str) -> Option<Graph> {
    let (kind, size) = name.split_at(1.min(name.len()));
    let n: usize = size.parse().ok()?;
    match kind {
        "K" | "k" if n >= 2 => Some(clique(n)),
        "C" | "c" if n >= 3 => Some(cycle(n)),
        _ => None,
    }
}
