//! Zero-dimensional persistence of one filtration by union-find.
//!
//! Merges follow the elder rule: the root with the extremal value (minimum
//! for a lower filtration, maximum for an upper one) survives, so a root is
//! always the extremal vertex of its component.

use crate::barcode::{Bar, BarKind};
use crate::error::Result;
use crate::graph::{Direction, Graph, IndexFiltration, Simplex};

#[derive(Debug, Clone, PartialEq)]
pub struct UnionFindForest {
    parent: Vec<usize>,
    root_value: Vec<f64>,
    pub direction: Direction,
}

impl UnionFindForest {
    pub fn new(values: &[f64], direction: Direction) -> Self {
        UnionFindForest {
            parent: (0..values.len()).collect(),
            root_value: values.to_vec(),
            direction,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// Value carried by the root of `v`'s component.
    pub fn root_value(&self, v: usize) -> f64 {
        self.root_value[self.root_of(v)]
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v] == v
    }

    /// Root lookup with path compression.
    pub fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = v;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Root lookup that leaves the forest untouched.
    pub fn root_of(&self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        root
    }

    /// Whether `a` is older than `b` under this forest's direction.
    fn elder(&self, a: usize, b: usize) -> bool {
        match self.direction {
            Direction::Lower => self.root_value[a] < self.root_value[b],
            Direction::Upper => self.root_value[a] > self.root_value[b],
        }
    }

    /// Merges two distinct roots and returns `(survivor, absorbed)`.
    pub fn union_roots(&mut self, a: usize, b: usize) -> (usize, usize) {
        debug_assert!(a != b && self.is_root(a) && self.is_root(b));
        let (old, young) = if self.elder(a, b) { (a, b) } else { (b, a) };
        self.parent[young] = old;
        (old, young)
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(move |&v| self.parent[v] == v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhZeroResult {
    pub bars: Vec<Bar>,
    /// Edges closing a cycle, in filtration order.
    pub positive_edges: Vec<usize>,
    /// Edges merging two components, in filtration order.
    pub negative_edges: Vec<usize>,
    pub forest: UnionFindForest,
}

/// Runs union-find over the edges of `filt` in filtration order.
pub fn ph0(g: &Graph, filt: &IndexFiltration) -> Result<PhZeroResult> {
    filt.check(g)?;
    Ok(ph0_unchecked(g, filt))
}

/// As [`ph0`] without re-validating `filt` against `g`.
pub(crate) fn ph0_unchecked(g: &Graph, filt: &IndexFiltration) -> PhZeroResult {
    let kind = match filt.direction {
        Direction::Lower => BarKind::B0Low,
        Direction::Upper => BarKind::B0Up,
    };
    let mut forest = UnionFindForest::new(&g.vertex_values, filt.direction);
    let n = g.num_vertices;
    let mut bars = Vec::with_capacity(n);
    let mut positive_edges = Vec::new();
    let mut negative_edges = Vec::with_capacity(n);
    for e in filt.edges_in_order() {
        let (u, v) = g.edges[e];
        let (ru, rv) = (forest.find(u), forest.find(v));
        if ru == rv {
            positive_edges.push(e);
            continue;
        }
        let (_, young) = forest.union_roots(ru, rv);
        bars.push(Bar {
            birth: g.vertex_values[young],
            death: filt.edge_value(e),
            birth_simplex: Simplex::Vertex(young),
            death_simplex: Simplex::Edge(e),
            kind,
        });
        negative_edges.push(e);
    }
    PhZeroResult { bars, positive_edges, negative_edges, forest }
}

/// One `B0Ext` bar per component: born at the component minimum (root of the
/// lower forest), dying at its maximum (root of the upper forest).
pub fn component_extrema(forest_up: &UnionFindForest, forest_low: &UnionFindForest, g: &Graph) -> Vec<Bar> {
    forest_low
        .roots()
        .map(|lo| {
            let hi = forest_up.root_of(lo);
            Bar {
                birth: g.vertex_values[lo],
                death: g.vertex_values[hi],
                birth_simplex: Simplex::Vertex(lo),
                death_simplex: Simplex::Vertex(hi),
                kind: BarKind::B0Ext,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_lower_filtration, build_upper_filtration, TieBreakPolicy};

    fn pol() -> TieBreakPolicy {
        TieBreakPolicy::with_epsilon(0.001)
    }

    #[test]
    fn path_lower_bars() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], vec![0.0, 1.0, 2.0]);
        let f = build_lower_filtration(&g, &pol()).unwrap();
        let r = ph0(&g, &f).unwrap();
        // death values carry the ε·min perturbation
        let got: Vec<_> = r.bars.iter().map(|b| (b.birth, b.death, b.birth_simplex, b.death_simplex)).collect();
        assert_eq!(
            got,
            vec![
                (1.0, 1.0, Simplex::Vertex(1), Simplex::Edge(0)),
                (2.0, 2.0 + 0.001 * 1.0, Simplex::Vertex(2), Simplex::Edge(1)),
            ]
        );
        assert_eq!(r.negative_edges, vec![0, 1]);
        assert!(r.positive_edges.is_empty());
    }

    #[test]
    fn triangle_has_one_positive_edge() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        let f = build_lower_filtration(&g, &pol()).unwrap();
        let r = ph0(&g, &f).unwrap();
        assert_eq!(r.bars.len(), 2);
        assert_eq!(r.positive_edges, vec![1]);
    }

    #[test]
    fn triangle_upper_bars() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        let f = build_upper_filtration(&g, &pol()).unwrap();
        let r = ph0(&g, &f).unwrap();
        let got: Vec<_> = r.bars.iter().map(|b| (b.birth, b.death)).collect();
        assert_eq!(got, vec![(1.0, 1.0 + 0.001 * 2.0), (0.0, 0.001 * 2.0)]);
        assert_eq!(r.positive_edges, vec![0]);
    }

    #[test]
    fn isolated_vertices_have_no_bars() {
        let g = Graph::new(4, vec![], vec![0.0, 1.0, 2.0, 3.0]);
        let f = build_lower_filtration(&g, &pol()).unwrap();
        let r = ph0(&g, &f).unwrap();
        assert!(r.bars.is_empty() && r.negative_edges.is_empty() && r.positive_edges.is_empty());
    }

    fn extrema(g: &Graph) -> Vec<(f64, f64, Simplex, Simplex)> {
        let lo = ph0(g, &build_lower_filtration(g, &pol()).unwrap()).unwrap();
        let up = ph0(g, &build_upper_filtration(g, &pol()).unwrap()).unwrap();
        let mut bars: Vec<_> = component_extrema(&up.forest, &lo.forest, g)
            .into_iter()
            .map(|b| (b.birth, b.death, b.birth_simplex, b.death_simplex))
            .collect();
        bars.sort_by(|a, b| a.0.total_cmp(&b.0));
        bars
    }

    #[test]
    fn extrema_connected() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0]);
        assert_eq!(extrema(&g), vec![(0.0, 2.0, Simplex::Vertex(0), Simplex::Vertex(2))]);
    }

    #[test]
    fn extrema_two_components() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)], vec![0.0, 1.0, 7.0, 5.0]);
        let got: Vec<_> = extrema(&g).into_iter().map(|b| (b.0, b.1)).collect();
        assert_eq!(got, vec![(0.0, 1.0), (5.0, 7.0)]);
    }

    #[test]
    fn extrema_single_vertex() {
        let g = Graph::new(1, vec![], vec![3.0]);
        let got: Vec<_> = extrema(&g).into_iter().map(|b| (b.0, b.1)).collect();
        assert_eq!(got, vec![(3.0, 3.0)]);
    }

    #[test]
    fn find_compresses_paths() {
        let mut f = UnionFindForest::new(&[0.0, 1.0, 2.0, 3.0], Direction::Lower);
        f.union_roots(2, 3);
        f.union_roots(1, 2);
        f.union_roots(0, 1);
        assert_eq!(f.parent(3), 2);
        assert_eq!(f.find(3), 0);
        assert_eq!(f.parent(3), 0);
        assert_eq!(f.find(3), 0);
    }

    #[test]
    fn upper_survivor_is_maximum() {
        let mut f = UnionFindForest::new(&[0.0, 5.0], Direction::Upper);
        assert_eq!(f.union_roots(0, 1), (1, 0));
        assert_eq!(f.root_value(0), 5.0);
    }
}
