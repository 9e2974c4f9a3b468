//! Invariant checks on barcodes and the default property battery.

use serde::Serialize;

use crate::barcode::{BarKind, ExtendedBarcode};
use crate::datasets::{erdos_renyi_with, stream_rng};
use crate::error::Result;
use crate::expressivity::{
    build_cc_size_filtration, build_cycle_length_filtration, cycle, estimate_max_bar_statistics, named_graph,
    MonteCarloReport,
};
use crate::graph::{Graph, Simplex, TieBreakPolicy};
use crate::oracle::oracle_barcode;
use crate::persistence::compute_extended_persistence;

/// Largest graph for which [`check_barcode`] also runs the oracle.
pub const ORACLE_CHECK_LIMIT: usize = 60;

/// Rank over GF(2) of bit-packed vectors.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for w in 0..words {
        for bit in 0..64 {
            let mask = 1u64 << bit;
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & mask != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// GF(2) rank of the edge-incidence vectors of the cycle representatives.
pub fn cycle_basis_rank(g: &Graph, bc: &ExtendedBarcode) -> std::result::Result<usize, String> {
    let words = g.num_edges().div_ceil(64);
    let mut rows = Vec::with_capacity(bc.cycles.len());
    for c in &bc.cycles {
        let mut row = vec![0u64; words];
        for e in c.edge_indices(g)? {
            row[e / 64] ^= 1 << (e % 64);
        }
        rows.push(row);
    }
    Ok(gf2_rank(rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub invariant: &'static str,
    pub detail: String,
}

/// Checks an arbitrary barcode against `g`; an empty result means every
/// invariant holds.
pub fn check_barcode(g: &Graph, bc: &ExtendedBarcode) -> Vec<Failure> {
    let mut out = Vec::new();
    let mut fail = |invariant, detail: String| out.push(Failure { invariant, detail });
    if let Err(e) = g.check() {
        fail("valid_graph", e.to_string());
        return out;
    }
    let (n, m, c) = (g.num_vertices, g.num_edges(), g.num_components());
    let want = [n - c, n - c, c, m + c - n];
    if bc.counts() != want {
        fail("count_identities", format!("counts {:?}, expected {:?}", bc.counts(), want));
    }
    for b in bc.all_bars() {
        let in_range = |s: Simplex| match s {
            Simplex::Vertex(v) => v < n,
            Simplex::Edge(e) => e < m,
        };
        if !in_range(b.birth_simplex) || !in_range(b.death_simplex) {
            fail("bar_shape", format!("{} bar references a missing simplex", b.kind));
            continue;
        }
        if let Err(e) = b.check_shape(g) {
            fail("bar_shape", e);
        }
        // vertex endpoints carry exact values; edge values may hold a
        // caller-chosen perturbation, so only vertices are compared
        for (s, x) in [(b.birth_simplex, b.birth), (b.death_simplex, b.death)] {
            if let Simplex::Vertex(v) = s {
                if x != g.vertex_values[v] {
                    fail("bar_values", format!("{} bar stores {x} for vertex {v} of value {}", b.kind, g.vertex_values[v]));
                }
            }
        }
    }

    // each simplex is paired exactly once in each half
    let mut lower = vec![0usize; n + m];
    let mut upper = vec![0usize; n + m];
    for b in bc.all_bars() {
        let (bs, ds) = (b.birth_simplex.flat_index(n), b.death_simplex.flat_index(n));
        if bs >= n + m || ds >= n + m {
            continue;
        }
        match b.kind {
            BarKind::B0Low => {
                lower[bs] += 1;
                lower[ds] += 1;
            }
            BarKind::B0Up => {
                upper[bs] += 1;
                upper[ds] += 1;
            }
            BarKind::B0Ext | BarKind::B1Ext => {
                lower[bs] += 1;
                upper[ds] += 1;
            }
        }
    }
    if lower.iter().chain(&upper).any(|&k| k != 1) {
        fail("pair_partition", "some simplex is unpaired or paired twice".into());
    }

    if !bc.cycles.is_empty() {
        if bc.cycles.len() != bc.b1_ext.len() {
            fail("cycle_alignment", format!("{} cycles for {} b1_ext bars", bc.cycles.len(), bc.b1_ext.len()));
        }
        for (i, rep) in bc.cycles.iter().enumerate() {
            if let Err(e) = rep.check(g) {
                fail("cycle_representative", format!("cycle {i}: {e}"));
            }
        }
        match cycle_basis_rank(g, bc) {
            Ok(r) if r == m + c - n => {}
            Ok(r) => fail("cycle_basis_rank", format!("rank {r}, expected {}", m + c - n)),
            Err(e) => fail("cycle_basis_rank", e),
        }
    }

    if n <= ORACLE_CHECK_LIMIT {
        match oracle_barcode(g, &TieBreakPolicy::default()) {
            Ok(o) if o.signature() == bc.signature() => {}
            Ok(_) => fail("oracle_equivalence", "bar multiset differs from matrix reduction".into()),
            Err(e) => fail("oracle_equivalence", e.to_string()),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedReport {
    pub graph: String,
    pub report: MonteCarloReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub monte_carlo: Vec<NamedReport>,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub random_graphs: usize,
    pub trials: usize,
    pub seed: u64,
    pub graphs: Vec<String>,
    pub workers: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            random_graphs: 100,
            trials: 2000,
            seed: 0,
            graphs: vec!["K4".into(), "C5".into(), "K5".into(), "C8".into()],
            workers: 1,
        }
    }
}

/// Standard deviation of the range of `n` independent U(0, 1) draws.
pub fn uniform_range_sd(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * (n - 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0))).sqrt()
}

/// Runs the built-in property battery.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut record = |name: String, failures: Vec<String>| {
        checks.push(CheckResult {
            name,
            passed: failures.is_empty(),
            detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
        })
    };

    let pol = TieBreakPolicy::default();
    let mut rng = stream_rng(cfg.seed, 0);
    let mut failures = Vec::new();
    for i in 0..cfg.random_graphs {
        use rand::Rng;
        let n = rng.random_range(1..=12);
        let p = rng.random_range(0.0..=1.0);
        let g = erdos_renyi_with(n, p, &mut rng)?;
        let bc = compute_extended_persistence(&g, &pol, true)?;
        for f in check_barcode(&g, &bc) {
            failures.push(format!("graph {i}: {}: {}", f.invariant, f.detail));
        }
    }
    record("random_graph_invariants".into(), failures);

    let mut failures = Vec::new();
    for k in 3..=20 {
        let g = cycle(k);
        let order: Vec<usize> = (0..k).collect();
        let f = build_cycle_length_filtration(&g, &order).map_err(|e| crate::Error::InvalidParams(e.to_string()))?;
        let h = g.with_values(f.vertex_values.clone());
        let bc = compute_extended_persistence(&h, &pol, false)?;
        let found = bc.b1_ext.iter().any(|b| {
            let (birth, death) = b.unperturbed(&h);
            birth - death == (k - 1) as f64
        });
        if !found {
            failures.push(format!("no bar of persistence {} on C{k}", k - 1));
        }
    }
    record("cycle_length_filtration".into(), failures);

    let mut failures = Vec::new();
    let sizes = [1usize, 3, 5, 8];
    let mut edges = Vec::new();
    let mut start = 0;
    for &s in &sizes {
        for v in start + 1..start + s {
            edges.push((v - 1, v));
        }
        start += s;
    }
    let g = Graph::new(start, edges, vec![0.0; start]);
    let h = g.with_values(build_cc_size_filtration(&g));
    let bc = compute_extended_persistence(&h, &pol, false)?;
    let mut got: Vec<f64> = bc.b0_ext.iter().map(|b| b.death - b.birth).collect();
    got.sort_by(f64::total_cmp);
    let want: Vec<f64> = sizes.iter().map(|&s| (s - 1) as f64).collect();
    if got != want {
        failures.push(format!("persistences {got:?}, expected {want:?}"));
    }
    record("component_size_filtration".into(), failures);

    let mut monte_carlo = Vec::new();
    for name in &cfg.graphs {
        let Some(g) = named_graph(name) else {
            return Err(crate::Error::InvalidParams(format!("unknown graph name {name}")));
        };
        let r = estimate_max_bar_statistics(&g, cfg.trials, cfg.seed, cfg.workers)
            .map_err(|e| crate::Error::InvalidParams(e.to_string()))?;
        let mut failures = Vec::new();
        let p = r.theoretical_probability;
        let sigma = r.sigma(p);
        if (r.adjacency_rate() - p).abs() > 3.0 * sigma + f64::EPSILON {
            failures.push(format!("extremes adjacent in {:.4} of trials, expected {p:.4}", r.adjacency_rate()));
        }
        if r.adjacent_hit_count != r.adjacent_count {
            failures.push("adjacent extremes without a [max, min] bar".into());
        }
        if r.hit_count > 0 {
            let se = uniform_range_sd(g.num_vertices) / (r.hit_count as f64).sqrt();
            if p == 1.0 && (r.empirical_mean_persistence - r.theoretical_mean).abs() > 4.0 * se {
                failures.push(format!(
                    "mean persistence {:.4}, expected {:.4}",
                    r.empirical_mean_persistence, r.theoretical_mean
                ));
            }
        }
        record(format!("max_bar_statistics_{name}"), failures);
        monte_carlo.push(NamedReport { graph: name.clone(), report: r });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { passed, checks, monte_carlo })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(gf2_rank(vec![vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(gf2_rank(vec![vec![0b1], vec![0b10]]), 2);
        assert_eq!(gf2_rank(vec![]), 0);
    }

    #[test]
    fn computed_barcodes_pass() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], vec![0.3, 0.9, 0.1, 0.5]);
        let bc = compute_extended_persistence(&g, &TieBreakPolicy::default(), true).unwrap();
        assert_eq!(check_barcode(&g, &bc), vec![]);
        assert_eq!(cycle_basis_rank(&g, &bc).unwrap(), 2);
    }

    #[test]
    fn flipped_bar_is_caught() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        let mut bc = compute_extended_persistence(&g, &TieBreakPolicy::default(), true).unwrap();
        let b = &mut bc.b0_ext[0];
        std::mem::swap(&mut b.birth, &mut b.death);
        std::mem::swap(&mut b.birth_simplex, &mut b.death_simplex);
        let names: Vec<_> = check_barcode(&g, &bc).into_iter().map(|f| f.invariant).collect();
        assert!(names.contains(&"bar_shape"));
        assert!(names.contains(&"oracle_equivalence"));
    }

    #[test]
    fn swapped_values_are_caught() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        let mut bc = compute_extended_persistence(&g, &TieBreakPolicy::default(), true).unwrap();
        let b = &mut bc.b0_ext[0];
        std::mem::swap(&mut b.birth, &mut b.death);
        let names: Vec<_> = check_barcode(&g, &bc).into_iter().map(|f| f.invariant).collect();
        assert!(names.contains(&"bar_values"));
    }

    #[test]
    fn dropped_bar_is_caught() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        let mut bc = compute_extended_persistence(&g, &TieBreakPolicy::default(), true).unwrap();
        bc.b0_low.pop();
        let names: Vec<_> = check_barcode(&g, &bc).into_iter().map(|f| f.invariant).collect();
        assert!(names.contains(&"count_identities"));
        assert!(names.contains(&"pair_partition"));
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { random_graphs: 20, trials: 300, ..Default::default() };
        let r = run_suite(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.checks);
        assert_eq!(r.monte_carlo.len(), 4);
    }
}
