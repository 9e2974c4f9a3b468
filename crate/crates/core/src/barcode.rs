//! Bars, extended barcodes, cycle representatives and their JSON form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Direction, Graph, Simplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BarKind {
    B0Low,
    B0Up,
    B0Ext,
    B1Ext,
}

impl BarKind {
    pub const ALL: [BarKind; 4] = [BarKind::B0Low, BarKind::B0Up, BarKind::B0Ext, BarKind::B1Ext];

    pub fn name(self) -> &'static str {
        match self {
            BarKind::B0Low => "b0_low",
            BarKind::B0Up => "b0_up",
            BarKind::B0Ext => "b0_ext",
            BarKind::B1Ext => "b1_ext",
        }
    }
}

impl fmt::Display for BarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One persistence pair with the simplices that created and destroyed it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
    pub birth_simplex: Simplex,
    pub death_simplex: Simplex,
    pub kind: BarKind,
}

impl Bar {
    pub fn persistence(&self) -> f64 {
        (self.death - self.birth).abs()
    }

    /// Birth and death read from the unperturbed vertex values of `g`.
    pub fn unperturbed(&self, g: &Graph) -> (f64, f64) {
        let (bd, dd) = match self.kind {
            BarKind::B0Low => (Direction::Lower, Direction::Lower),
            BarKind::B0Up => (Direction::Upper, Direction::Upper),
            BarKind::B0Ext => (Direction::Lower, Direction::Upper),
            BarKind::B1Ext => (Direction::Lower, Direction::Upper),
        };
        (g.base_value(self.birth_simplex, bd), g.base_value(self.death_simplex, dd))
    }

    /// Checks the simplex types and the direction of the interval, on
    /// unperturbed values.
    pub fn check_shape(&self, g: &Graph) -> std::result::Result<(), String> {
        let (bv, dv) = (self.birth_simplex.is_vertex(), self.death_simplex.is_vertex());
        let types_ok = match self.kind {
            BarKind::B0Low | BarKind::B0Up => bv && !dv,
            BarKind::B0Ext => bv && dv,
            BarKind::B1Ext => !bv && !dv,
        };
        if !types_ok {
            return Err(format!("{} bar has simplices {} and {}", self.kind, self.birth_simplex, self.death_simplex));
        }
        if !(self.birth.is_finite() && self.death.is_finite()) {
            return Err(format!("{} bar is not finite", self.kind));
        }
        let (b, d) = self.unperturbed(g);
        let ordered = match self.kind {
            BarKind::B0Low | BarKind::B0Ext => b <= d,
            BarKind::B0Up => b >= d,
            BarKind::B1Ext => true,
        };
        if !ordered {
            return Err(format!("{} bar ({b}, {d}) has the wrong orientation", self.kind));
        }
        Ok(())
    }
}

/// Explicit cycle of the graph witnessing a `B1Ext` bar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRepresentative {
    /// `u, ..., lca, ..., v` where `(u, v)` is the closing edge.
    pub vertices: Vec<usize>,
    pub closing_edge: usize,
}

impl CycleRepresentative {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Indices of the graph edges traversed by the cycle, closing edge last.
    pub fn edge_indices(&self, g: &Graph) -> std::result::Result<Vec<usize>, String> {
        let lookup = edge_lookup(g);
        let k = self.vertices.len();
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            match lookup.get(&(a.min(b), a.max(b))) {
                Some(&e) => out.push(e),
                None => return Err(format!("cycle vertices {a} and {b} are not adjacent")),
            }
        }
        Ok(out)
    }

    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        if self.vertices.len() < 3 {
            return Err(format!("cycle has only {} vertices", self.vertices.len()));
        }
        if self.vertices.iter().any(|&v| v >= g.num_vertices) {
            return Err("cycle references a vertex out of range".into());
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err("cycle repeats a vertex".into());
        }
        let edges = self.edge_indices(g)?;
        if edges.last() != Some(&self.closing_edge) {
            return Err("closing edge does not join the last vertex to the first".into());
        }
        Ok(())
    }
}

fn edge_lookup(g: &Graph) -> std::collections::HashMap<(usize, usize), usize> {
    g.edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| ((u.min(v), u.max(v)), i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtendedBarcode {
    pub num_vertices: usize,
    pub b0_low: Vec<Bar>,
    pub b0_up: Vec<Bar>,
    pub b0_ext: Vec<Bar>,
    pub b1_ext: Vec<Bar>,
    /// Aligned with `b1_ext`; empty when cycles were not requested.
    pub cycles: Vec<CycleRepresentative>,
}

/// Bar multiset key: kind plus the exact bit patterns of birth and death.
pub type BarSignature = (BarKind, u64, u64);

impl ExtendedBarcode {
    pub fn bars(&self, kind: BarKind) -> &[Bar] {
        match kind {
            BarKind::B0Low => &self.b0_low,
            BarKind::B0Up => &self.b0_up,
            BarKind::B0Ext => &self.b0_ext,
            BarKind::B1Ext => &self.b1_ext,
        }
    }

    pub fn bars_mut(&mut self, kind: BarKind) -> &mut Vec<Bar> {
        match kind {
            BarKind::B0Low => &mut self.b0_low,
            BarKind::B0Up => &mut self.b0_up,
            BarKind::B0Ext => &mut self.b0_ext,
            BarKind::B1Ext => &mut self.b1_ext,
        }
    }

    pub fn all_bars(&self) -> impl Iterator<Item = &Bar> {
        BarKind::ALL.into_iter().flat_map(move |k| self.bars(k).iter())
    }

    pub fn counts(&self) -> [usize; 4] {
        BarKind::ALL.map(|k| self.bars(k).len())
    }

    /// Sorted (kind, birth, death) multiset, compared bit-for-bit.
    pub fn signature(&self) -> Vec<BarSignature> {
        let mut sig: Vec<BarSignature> = self
            .all_bars()
            .map(|b| (b.kind, b.birth.to_bits(), b.death.to_bits()))
            .collect();
        sig.sort_unstable();
        sig
    }

    pub fn to_json_value(&self) -> BarcodeJson {
        let n = self.num_vertices;
        let rows = |bars: &[Bar]| -> Vec<(f64, f64, usize, usize)> {
            bars.iter()
                .map(|b| (b.birth, b.death, b.birth_simplex.flat_index(n), b.death_simplex.flat_index(n)))
                .collect()
        };
        BarcodeJson {
            b0_low: rows(&self.b0_low),
            b0_up: rows(&self.b0_up),
            b0_ext: rows(&self.b0_ext),
            b1_ext: rows(&self.b1_ext),
            cycles: self.cycles.iter().map(|c| c.vertices.clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("barcode serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("barcode serialization cannot fail")
    }

    /// Rebuilds a barcode from its JSON form. Simplex ids are decoded against
    /// `num_vertices`; each cycle's closing edge is taken from the death
    /// simplex of the matching `b1_ext` bar.
    pub fn from_json(json: &BarcodeJson, num_vertices: usize) -> Result<Self> {
        let n = num_vertices;
        let decode = |rows: &[(f64, f64, usize, usize)], kind| -> Vec<Bar> {
            rows.iter()
                .map(|&(birth, death, bs, ds)| Bar {
                    birth,
                    death,
                    birth_simplex: Simplex::from_flat_index(bs, n),
                    death_simplex: Simplex::from_flat_index(ds, n),
                    kind,
                })
                .collect()
        };
        let b1_ext = decode(&json.b1_ext, BarKind::B1Ext);
        if !json.cycles.is_empty() && json.cycles.len() != b1_ext.len() {
            return Err(Error::InvalidParams(format!(
                "{} cycles for {} b1_ext bars",
                json.cycles.len(),
                b1_ext.len()
            )));
        }
        let mut cycles = Vec::with_capacity(json.cycles.len());
        for (c, bar) in json.cycles.iter().zip(&b1_ext) {
            let closing_edge = match bar.death_simplex {
                Simplex::Edge(e) => e,
                Simplex::Vertex(_) => {
                    return Err(Error::InvalidParams("b1_ext bar dies at a vertex".into()));
                }
            };
            cycles.push(CycleRepresentative { vertices: c.clone(), closing_edge });
        }
        Ok(ExtendedBarcode {
            num_vertices: n,
            b0_low: decode(&json.b0_low, BarKind::B0Low),
            b0_up: decode(&json.b0_up, BarKind::B0Up),
            b0_ext: decode(&json.b0_ext, BarKind::B0Ext),
            b1_ext,
            cycles,
        })
    }
}

/// Wire format: `[birth, death, birth_id, death_id]` rows where vertex `v`
/// has id `v` and edge `e` has id `num_vertices + e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeJson {
    pub b0_low: Vec<(f64, f64, usize, usize)>,
    pub b0_up: Vec<(f64, f64, usize, usize)>,
    pub b0_ext: Vec<(f64, f64, usize, usize)>,
    pub b1_ext: Vec<(f64, f64, usize, usize)>,
    pub cycles: Vec<Vec<usize>>,
}
