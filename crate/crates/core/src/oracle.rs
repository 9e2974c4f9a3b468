//! Brute-force extended persistence by GF(2) boundary-matrix reduction.
//!
//! The coned filtration lists the apex `ω` first, then the lower index
//! filtration, then one cone simplex per graph simplex in upper order: the
//! cone edge `ωv` for a vertex `v` and the cone triangle `ωuv` for an edge
//! `(u, v)`. Pairs are classified by which half their simplices fall in.
//!
//! Only the lower filtration is borrowed from [`crate::graph`]; the upper
//! order and the pairing are computed here independently of the fast path.

use crate::barcode::{Bar, BarKind, ExtendedBarcode};
use crate::error::Result;
use crate::graph::{build_lower_filtration, Graph, Simplex, TieBreakMode, TieBreakPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConedSimplex {
    Apex,
    Base(Simplex),
    /// `ωv` or `ωuv`, coning the given base simplex.
    Cone(Simplex),
}

impl ConedSimplex {
    pub fn dimension(self) -> usize {
        match self {
            ConedSimplex::Apex => 0,
            ConedSimplex::Base(Simplex::Vertex(_)) => 0,
            ConedSimplex::Base(Simplex::Edge(_)) | ConedSimplex::Cone(Simplex::Vertex(_)) => 1,
            ConedSimplex::Cone(Simplex::Edge(_)) => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConedFiltration {
    pub num_vertices: usize,
    pub simplices: Vec<ConedSimplex>,
    /// Values for the base simplices as read by the pairing: lower values for
    /// base edges, upper values for coned edges.
    lower_edge_values: Vec<f64>,
    upper_edge_values: Vec<f64>,
    vertex_values: Vec<f64>,
    boundaries: Vec<Vec<usize>>,
}

impl ConedFiltration {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn boundary(&self, j: usize) -> &[usize] {
        &self.boundaries[j]
    }
}

/// Upper order: descending smaller endpoint value, a vertex before the edges
/// it starts, then descending larger endpoint value, then index.
fn upper_order(g: &Graph, policy: &TieBreakPolicy, epsilon: f64) -> Vec<Simplex> {
    let f = &g.vertex_values;
    let lohi = |e: usize| {
        let (a, b) = (f[g.edges[e].0], f[g.edges[e].1]);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let key = |s: Simplex| -> (f64, u8, f64, usize) {
        match s {
            Simplex::Vertex(v) => (f[v], 0, f[v], v),
            Simplex::Edge(e) => {
                let (lo, hi) = lohi(e);
                match policy.mode {
                    TieBreakMode::Lexicographic => (lo, 1, hi, e),
                    TieBreakMode::EpsilonFormula => {
                        let val = lo + epsilon * hi;
                        (val.min(lo), 1, val, e)
                    }
                }
            }
        }
    };
    let mut all: Vec<Simplex> = (0..g.num_vertices)
        .map(Simplex::Vertex)
        .chain((0..g.num_edges()).map(Simplex::Edge))
        .collect();
    all.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        kb.0.total_cmp(&ka.0)
            .then(ka.1.cmp(&kb.1))
            .then_with(|| kb.2.total_cmp(&ka.2))
            .then(ka.3.cmp(&kb.3))
    });
    all
}

pub fn build_coned_filtration(g: &Graph, policy: &TieBreakPolicy) -> Result<ConedFiltration> {
    let lower = build_lower_filtration(g, policy)?;
    let epsilon = lower.epsilon;
    let n = g.num_vertices;
    let m = g.num_edges();
    let f = &g.vertex_values;

    let mut simplices = Vec::with_capacity(2 * (n + m) + 1);
    let mut boundaries: Vec<Vec<usize>> = Vec::with_capacity(2 * (n + m) + 1);
    let mut base_pos = vec![usize::MAX; n + m];
    let mut cone_pos = vec![usize::MAX; n];

    simplices.push(ConedSimplex::Apex);
    boundaries.push(Vec::new());
    for &s in lower.order() {
        let j = simplices.len();
        base_pos[s.flat_index(n)] = j;
        simplices.push(ConedSimplex::Base(s));
        boundaries.push(match s {
            Simplex::Vertex(_) => Vec::new(),
            Simplex::Edge(e) => {
                let (u, v) = g.edges[e];
                vec![base_pos[u], base_pos[v]]
            }
        });
    }
    for s in upper_order(g, policy, epsilon) {
        let j = simplices.len();
        simplices.push(ConedSimplex::Cone(s));
        boundaries.push(match s {
            Simplex::Vertex(v) => {
                cone_pos[v] = j;
                vec![0, base_pos[v]]
            }
            Simplex::Edge(e) => {
                let (u, v) = g.edges[e];
                vec![base_pos[n + e], cone_pos[u], cone_pos[v]]
            }
        });
    }

    let mut lower_edge_values = Vec::with_capacity(m);
    let mut upper_edge_values = Vec::with_capacity(m);
    for &(u, v) in &g.edges {
        let (lo, hi) = if f[u] < f[v] { (f[u], f[v]) } else { (f[v], f[u]) };
        lower_edge_values.push(hi + epsilon * lo);
        upper_edge_values.push(lo + epsilon * hi);
    }

    Ok(ConedFiltration {
        num_vertices: n,
        simplices,
        lower_edge_values,
        upper_edge_values,
        vertex_values: f.clone(),
        boundaries,
    })
}

/// Dense GF(2) columns; column `j` holds rows `0..j`.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    columns: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn from_boundaries(boundaries: &[Vec<usize>]) -> Self {
        let columns = boundaries
            .iter()
            .enumerate()
            .map(|(j, rows)| {
                let mut col = vec![0u64; j.div_ceil(64)];
                for &r in rows {
                    debug_assert!(r < j, "face after coface");
                    col[r / 64] ^= 1 << (r % 64);
                }
                col
            })
            .collect();
        BitMatrix { columns }
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// Largest row index set in column `j`.
    pub fn low(&self, j: usize) -> Option<usize> {
        let col = &self.columns[j];
        (0..col.len()).rev().find(|&w| col[w] != 0).map(|w| w * 64 + 63 - col[w].leading_zeros() as usize)
    }

    fn add_into(&mut self, src: usize, dst: usize) {
        debug_assert!(src < dst);
        let (head, tail) = self.columns.split_at_mut(dst);
        let s = &head[src];
        for (d, x) in tail[0].iter_mut().zip(s) {
            *d ^= *x;
        }
    }

    /// Standard left-to-right reduction. Returns the pivot row of each
    /// column, `None` for columns that reduce to zero.
    pub fn reduce(&mut self) -> Vec<Option<usize>> {
        let n = self.columns.len();
        let mut owner = vec![usize::MAX; n];
        let mut lows = vec![None; n];
        for j in 0..n {
            while let Some(l) = self.low(j) {
                let k = owner[l];
                if k == usize::MAX {
                    owner[l] = j;
                    lows[j] = Some(l);
                    break;
                }
                self.add_into(k, j);
            }
        }
        lows
    }
}

/// Reduces the coned boundary matrix and reads off the four bar kinds.
pub fn reduce_and_pair(cf: &ConedFiltration) -> ExtendedBarcode {
    let mut matrix = BitMatrix::from_boundaries(&cf.boundaries);
    let lows = matrix.reduce();
    let f = &cf.vertex_values;
    let mut bc = ExtendedBarcode { num_vertices: cf.num_vertices, ..Default::default() };
    for (j, low) in lows.iter().enumerate() {
        let Some(i) = *low else { continue };
        use ConedSimplex::*;
        use Simplex::*;
        let bar = |birth, death, bs, ds, kind| Bar { birth, death, birth_simplex: bs, death_simplex: ds, kind };
        let b = match (cf.simplices[i], cf.simplices[j]) {
            (Base(Vertex(v)), Base(Edge(e))) => bar(f[v], cf.lower_edge_values[e], Vertex(v), Edge(e), BarKind::B0Low),
            (Base(Vertex(v)), Cone(Vertex(w))) => bar(f[v], f[w], Vertex(v), Vertex(w), BarKind::B0Ext),
            (Cone(Vertex(u)), Cone(Edge(e))) => bar(f[u], cf.upper_edge_values[e], Vertex(u), Edge(e), BarKind::B0Up),
            (Base(Edge(a)), Cone(Edge(e))) => {
                bar(cf.lower_edge_values[a], cf.upper_edge_values[e], Edge(a), Edge(e), BarKind::B1Ext)
            }
            (x, y) => unreachable!("impossible persistence pair {x:?} -> {y:?}"),
        };
        bc.bars_mut(b.kind).push(b);
    }
    bc
}

/// Convenience wrapper: build, reduce and pair.
pub fn oracle_barcode(g: &Graph, policy: &TieBreakPolicy) -> Result<ExtendedBarcode> {
    Ok(reduce_and_pair(&build_coned_filtration(g, policy)?))
}

/// Alternative layout with all cone edges before all cone triangles. With
/// distinct vertex values this yields the same pairs.
pub fn oracle_barcode_cones_first(g: &Graph, policy: &TieBreakPolicy) -> Result<ExtendedBarcode> {
    let mut cf = build_coned_filtration(g, policy)?;
    let split = 1 + g.num_vertices + g.num_edges();
    let mut tail: Vec<usize> = (split..cf.len()).collect();
    tail.sort_by(|&a, &b| match (cf.simplices[a].dimension(), cf.simplices[b].dimension()) {
        (x, y) if x != y => x.cmp(&y),
        _ => a.cmp(&b),
    });
    let mut remap: Vec<usize> = (0..cf.len()).collect();
    for (k, &old) in tail.iter().enumerate() {
        remap[old] = split + k;
    }
    let mut simplices = cf.simplices.clone();
    let mut boundaries = cf.boundaries.clone();
    for &old in &tail {
        simplices[remap[old]] = cf.simplices[old];
        boundaries[remap[old]] = cf.boundaries[old].iter().map(|&r| remap[r]).collect();
    }
    cf.simplices = simplices;
    cf.boundaries = boundaries;
    Ok(reduce_and_pair(&cf))
}
