//! Seeded synthetic graph families.
//!
//! Instance `i` of a dataset draws from its own ChaCha stream, so any
//! instance can be regenerated alone and generation order never matters.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::barcode::ExtendedBarcode;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub label: usize,
    /// Lengths of the cycles built into the instance.
    pub core_cycles: Vec<usize>,
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` pairwise distinct draws from U(0, 1).
pub fn distinct_uniform_values<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = rng.random();
        if seen.insert(x.to_bits()) {
            out.push(x);
        }
    }
    out
}

fn check_range(name: &str, (lo, hi): (usize, usize)) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidParams(format!("{name} range ({lo}, {hi}) is empty")));
    }
    Ok(())
}

pub const DEFAULT_PINWHEEL_SIZES: (usize, usize) = (1, 20);

/// Class 0: two disjoint triangles; class 1: one hexagon. Every core vertex
/// gets a pinwheel of leaves whose count is drawn from `size_range`
/// (inclusive). Labels alternate, starting with class 0.
pub fn gen_pinwheels(count: usize, seed: u64, size_range: (usize, usize)) -> Result<Vec<LabeledGraph>> {
    check_range("pinwheel size", size_range)?;
    Ok((0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let label = i % 2;
            let (mut edges, core_cycles) = if label == 0 {
                (vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], vec![3, 3])
            } else {
                ((0..6).map(|v| (v, (v + 1) % 6)).collect(), vec![6])
            };
            let mut n = 6;
            for core in 0..6 {
                let k = rng.random_range(size_range.0..=size_range.1);
                for _ in 0..k {
                    edges.push((core, n));
                    n += 1;
                }
            }
            let vertex_values = distinct_uniform_values(n, &mut rng);
            LabeledGraph { graph: Graph::new(n, edges, vertex_values), label, core_cycles }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoCyclesParams {
    /// Combined vertex count of both cycles.
    pub total: usize,
    /// Class 0 short-cycle length range, inclusive.
    pub short_range: (usize, usize),
    /// Class 1 first-cycle length range, inclusive.
    pub balanced_range: (usize, usize),
}

impl Default for TwoCyclesParams {
    fn default() -> Self {
        TwoCyclesParams { total: 100, short_range: (3, 15), balanced_range: (45, 55) }
    }
}

impl TwoCyclesParams {
    fn validate(&self) -> Result<()> {
        check_range("short cycle", self.short_range)?;
        check_range("balanced cycle", self.balanced_range)?;
        let ok = |(lo, hi): (usize, usize)| lo >= 3 && hi + 3 <= self.total;
        if self.total < 6 || !ok(self.short_range) || !ok(self.balanced_range) {
            return Err(Error::InvalidParams(format!(
                "every cycle needs at least 3 vertices out of {}",
                self.total
            )));
        }
        Ok(())
    }
}

/// Disjoint cycles on `0..a` and `a..a+b`, with seeded distinct values.
pub fn two_cycles_graph<R: Rng>(a: usize, b: usize, rng: &mut R) -> Graph {
    assert!(a >= 3 && b >= 3, "cycles need at least 3 vertices");
    let mut edges = Vec::with_capacity(a + b);
    for (start, len) in [(0, a), (a, b)] {
        for i in 0..len {
            edges.push((start + i, start + (i + 1) % len));
        }
    }
    Graph::new(a + b, edges, distinct_uniform_values(a + b, rng))
}

/// Class 0: one short and one long cycle; class 1: two near-equal cycles.
/// Labels alternate, starting with class 0.
pub fn gen_two_cycles(count: usize, seed: u64, params: TwoCyclesParams) -> Result<Vec<LabeledGraph>> {
    params.validate()?;
    Ok((0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let label = i % 2;
            let range = if label == 0 { params.short_range } else { params.balanced_range };
            let a = rng.random_range(range.0..=range.1);
            let b = params.total - a;
            LabeledGraph { graph: two_cycles_graph(a, b, &mut rng), label, core_cycles: vec![a, b] }
        })
        .collect())
}

/// G(n, p): each vertex pair joined independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = stream_rng(seed, 0);
    erdos_renyi_with(n, p, &mut rng)
}

pub fn erdos_renyi_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((w, v));
            }
        }
    } else if p > 0.0 {
        // skip over absent pairs with geometric jumps
        let lp = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / lp).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    let values = distinct_uniform_values(n, rng);
    Ok(Graph::new(n, edges, values))
}

/// Cycle length (vertex count) to number of representatives of that length.
pub fn cycle_length_histogram(bc: &ExtendedBarcode) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for c in &bc.cycles {
        *hist.entry(c.len()).or_insert(0) += 1;
    }
    hist
}

/// Writes `graph_00000.json`, ... and `labels.csv` into `dir`.
pub fn write_dataset(dir: &Path, graphs: &[LabeledGraph]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut labels = String::from("index,label\n");
    for (i, lg) in graphs.iter().enumerate() {
        let path = dir.join(format!("graph_{i:05}.json"));
        fs::write(path, serde_json::to_string(&lg.graph)?)?;
        labels.push_str(&format!("{i},{}\n", lg.label));
    }
    let mut f = fs::File::create(dir.join("labels.csv"))?;
    f.write_all(labels.as_bytes())?;
    Ok(())
}
