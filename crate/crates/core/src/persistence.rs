//! Extended persistence of a vertex-valued graph.
//!
//! The zero-dimensional bars come from union-find on both filtrations. The
//! one-dimensional bars come from replaying the upper filtration on a
//! link-cut tree: the negative upper edges form a spanning forest, and each
//! positive upper edge closes a cycle whose heaviest edge in the lower
//! filtration is swapped out and paired with it.

use rayon::prelude::*;

use crate::barcode::{Bar, BarKind, CycleRepresentative, ExtendedBarcode};
use crate::error::{Error, Result};
use crate::graph::{build_lower_filtration, build_upper_filtration, Graph, Simplex, TieBreakPolicy};
use crate::link_cut::DynamicForest;
use crate::ph_zero::{component_extrema, ph0_unchecked};

pub fn compute_extended_persistence(g: &Graph, policy: &TieBreakPolicy, with_cycles: bool) -> Result<ExtendedBarcode> {
    let lower = build_lower_filtration(g, policy)?;
    let upper = build_upper_filtration(g, policy)?;
    let low = ph0_unchecked(g, &lower);
    let up = ph0_unchecked(g, &upper);
    let b0_ext = component_extrema(&up.forest, &low.forest, g);

    // Lower-filtration ranks are distinct, so path maxima never tie.
    let rank = |e: usize| lower.position(Simplex::Edge(e)) as f64;

    // Endpoints of negative edges lie in different trees, and each cycle
    // edge is re-linked only after its heaviest tree edge is cut, so the
    // forest preconditions hold throughout and the checked calls are skipped.
    let mut forest = DynamicForest::new(g.num_vertices);
    for &e in &up.negative_edges {
        let (u, v) = g.edges[e];
        forest.evert(u)?;
        forest.link_unchecked(u, v, rank(e), e);
    }

    let mut b1_ext = Vec::with_capacity(up.positive_edges.len());
    let mut cycles = Vec::with_capacity(if with_cycles { up.positive_edges.len() } else { 0 });
    for &e in &up.positive_edges {
        let (u, v) = g.edges[e];
        let lca = forest.lca_unchecked(u, v);
        if with_cycles {
            let mut vertices = forest.path_to_unchecked(u, lca);
            let mut back = forest.path_to_unchecked(v, lca);
            back.pop();
            vertices.extend(back.into_iter().rev());
            cycles.push(CycleRepresentative { vertices, closing_edge: e });
        }
        let heaviest = forest.argmax_unchecked(u, v, lca).expect("a simple graph has no loops");
        forest.cut_edge(&heaviest)?;
        forest.evert(u)?;
        forest.link_unchecked(u, v, rank(e), e);
        b1_ext.push(Bar {
            birth: lower.edge_value(heaviest.key),
            death: upper.edge_value(e),
            birth_simplex: Simplex::Edge(heaviest.key),
            death_simplex: Simplex::Edge(e),
            kind: BarKind::B1Ext,
        });
    }

    Ok(ExtendedBarcode {
        num_vertices: g.num_vertices,
        b0_low: low.bars,
        b0_up: up.bars,
        b0_ext,
        b1_ext,
        cycles,
    })
}

/// Barcodes for many graphs, one graph per task on a pool of `workers`
/// threads. Output order follows input order and does not depend on
/// `workers`.
pub fn compute_batch(gs: &[Graph], policy: &TieBreakPolicy, with_cycles: bool, workers: usize) -> Result<Vec<ExtendedBarcode>> {
    if workers == 0 {
        return Err(Error::InvalidParams("workers must be at least 1".into()));
    }
    let run = |(index, g): (usize, &Graph)| {
        compute_extended_persistence(g, policy, with_cycles).map_err(|e| Error::Batch { index, source: Box::new(e) })
    };
    if workers == 1 {
        return gs.iter().enumerate().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))?;
    pool.install(|| gs.par_iter().enumerate().map(run).collect())
}

/// Vertex values along a cycle representative, in its vertex order.
pub fn cycle_scalars(rep: &CycleRepresentative, g: &Graph) -> Vec<f64> {
    rep.vertices.iter().map(|&v| g.vertex_values[v]).collect()
}
