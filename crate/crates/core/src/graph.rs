//! Vertex-valued graphs and the lower/upper index filtrations they induce.
//!
//! A [`Graph`] carries one scalar per vertex. Edge values are derived from
//! their endpoints: `max + ε·min` for the lower filtration and
//! `min + ε·max` for the upper one. The simplex order itself is decided by
//! a [`TieBreakPolicy`]; the default orders edges lexicographically by their
//! endpoint values, which never depends on vertex indices when the vertex
//! values are distinct.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph with one filtration value per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub vertex_values: Vec<f64>,
}

/// A vertex or an edge of a [`Graph`], identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Simplex {
    Vertex(usize),
    Edge(usize),
}

impl Simplex {
    /// Flat simplex index: vertices occupy `0..n`, edge `e` maps to `n + e`.
    pub fn flat_index(self, num_vertices: usize) -> usize {
        match self {
            Simplex::Vertex(v) => v,
            Simplex::Edge(e) => num_vertices + e,
        }
    }

    pub fn from_flat_index(index: usize, num_vertices: usize) -> Simplex {
        if index < num_vertices {
            Simplex::Vertex(index)
        } else {
            Simplex::Edge(index - num_vertices)
        }
    }

    pub fn is_vertex(self) -> bool {
        matches!(self, Simplex::Vertex(_))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Simplex::Vertex(v) => write!(f, "v{v}"),
            Simplex::Edge(e) => write!(f, "e{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Sublevel sets: values ascend along the order.
    Lower,
    /// Superlevel sets: values descend along the order.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    SelfLoop { edge: usize, vertex: usize },
    VertexOutOfRange { edge: usize, vertex: usize },
    DuplicateEdge { first: usize, second: usize },
    ValueCountMismatch { expected: usize, found: usize },
    NonFiniteValue { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { edge, vertex } => {
                write!(f, "edge {edge} is a self-loop on vertex {vertex}")
            }
            Violation::VertexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} references vertex {vertex} which does not exist")
            }
            Violation::DuplicateEdge { first, second } => {
                write!(f, "edges {first} and {second} join the same pair of vertices")
            }
            Violation::ValueCountMismatch { expected, found } => {
                write!(f, "expected {expected} vertex values, found {found}")
            }
            Violation::NonFiniteValue { vertex } => {
                write!(f, "vertex {vertex} has a non-finite value")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    DuplicateValues { first: usize, second: usize, value: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DuplicateValues { first, second, value } => {
                write!(f, "vertices {first} and {second} share the value {value}")
            }
        }
    }
}

/// Outcome of [`Graph::validate`]. Isolated vertices are informational only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
    pub isolated_vertices: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>, vertex_values: Vec<f64>) -> Self {
        Graph { num_vertices, edges, vertex_values }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Reports simple-graph violations and duplicate vertex values without failing.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.num_vertices;
        if self.vertex_values.len() != n {
            report.violations.push(Violation::ValueCountMismatch {
                expected: n,
                found: self.vertex_values.len(),
            });
        }
        for (v, x) in self.vertex_values.iter().enumerate() {
            if !x.is_finite() {
                report.violations.push(Violation::NonFiniteValue { vertex: v });
            }
        }

        let mut seen: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut degree = vec![0usize; n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let mut in_range = true;
            for w in [u, v] {
                if w >= n {
                    report.violations.push(Violation::VertexOutOfRange { edge: i, vertex: w });
                    in_range = false;
                }
            }
            if u == v {
                report.violations.push(Violation::SelfLoop { edge: i, vertex: u });
                continue;
            }
            if !in_range {
                continue;
            }
            degree[u] += 1;
            degree[v] += 1;
            let key = (u.min(v), u.max(v));
            if let Some(&first) = seen.get(&key) {
                report.violations.push(Violation::DuplicateEdge { first, second: i });
            } else {
                seen.insert(key, i);
            }
        }
        report.isolated_vertices = (0..n).filter(|&v| degree[v] == 0).collect();

        if let Some((first, second, value)) = self.first_duplicate_value() {
            report.warnings.push(Warning::DuplicateValues { first, second, value });
        }
        report
    }

    /// Hard precondition of every persistence entry point: a valid simple
    /// graph whose vertex values are pairwise distinct.
    pub fn check(&self) -> Result<()> {
        let report = self.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidGraph(v.to_string()));
        }
        if let Some((first, second, value)) = self.first_duplicate_value() {
            return Err(Error::DuplicateVertexValues { first, second, value });
        }
        Ok(())
    }

    fn first_duplicate_value(&self) -> Option<(usize, usize, f64)> {
        let mut idx: Vec<usize> = (0..self.vertex_values.len()).collect();
        idx.sort_by(|&a, &b| {
            self.vertex_values[a]
                .total_cmp(&self.vertex_values[b])
                .then(a.cmp(&b))
        });
        idx.windows(2).find_map(|w| {
            let (a, b) = (w[0], w[1]);
            // -0.0 and 0.0 compare equal as values
            (self.vertex_values[a] == self.vertex_values[b]).then(|| (a, b, self.vertex_values[a]))
        })
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Component label per vertex, labels numbered by smallest member.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.num_vertices {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn num_components(&self) -> usize {
        self.component_labels().1
    }

    /// Relabels vertex `v` as `perm[v]`, keeping edge order.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.num_vertices, "permutation length");
        let mut values = vec![0.0; self.num_vertices];
        for (v, &p) in perm.iter().enumerate() {
            values[p] = self.vertex_values[v];
        }
        Graph {
            num_vertices: self.num_vertices,
            edges: self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
            vertex_values: values,
        }
    }

    pub fn with_values(&self, vertex_values: Vec<f64>) -> Graph {
        Graph { vertex_values, ..self.clone() }
    }

    pub fn edge_endpoint_values(&self, e: usize) -> (f64, f64) {
        let (u, v) = self.edges[e];
        let (a, b) = (self.vertex_values[u], self.vertex_values[v]);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Unperturbed edge value: larger endpoint for lower, smaller for upper.
    pub fn base_edge_value(&self, e: usize, direction: Direction) -> f64 {
        let (lo, hi) = self.edge_endpoint_values(e);
        match direction {
            Direction::Lower => hi,
            Direction::Upper => lo,
        }
    }

    /// Unperturbed value of any simplex in the given direction.
    pub fn base_value(&self, s: Simplex, direction: Direction) -> f64 {
        match s {
            Simplex::Vertex(v) => self.vertex_values[v],
            Simplex::Edge(e) => self.base_edge_value(e, direction),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakMode {
    /// Edges ordered by (base value, other endpoint value); exact.
    #[default]
    Lexicographic,
    /// Edges ordered by their ε-perturbed values.
    EpsilonFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TieBreakPolicy {
    /// `None` selects the per-graph default from [`default_epsilon`].
    pub epsilon: Option<f64>,
    pub mode: TieBreakMode,
}

impl TieBreakPolicy {
    pub fn with_epsilon(epsilon: f64) -> Self {
        TieBreakPolicy { epsilon: Some(epsilon), ..Self::default() }
    }

    pub fn epsilon_formula(epsilon: Option<f64>) -> Self {
        TieBreakPolicy { epsilon, mode: TieBreakMode::EpsilonFormula }
    }

    pub fn resolve_epsilon(&self, g: &Graph) -> Result<f64> {
        let eps = match self.epsilon {
            Some(e) => e,
            None => return Ok(default_epsilon(g)),
        };
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidEpsilon { epsilon: eps, reason: "must be finite and positive".into() });
        }
        if self.mode == TieBreakMode::EpsilonFormula {
            if let Some(gap) = min_value_gap(&g.vertex_values) {
                if eps >= gap / 2.0 {
                    return Err(Error::InvalidEpsilon {
                        epsilon: eps,
                        reason: format!("must be below half the minimum vertex-value gap {gap}"),
                    });
                }
            }
        }
        Ok(eps)
    }
}

/// Smallest positive difference between sorted vertex values.
pub fn min_value_gap(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .min_by(f64::total_cmp)
}

/// `gap / (4 (n + m) max(1, max|f|))`, so that `ε·|f|` stays below a quarter
/// of the smallest vertex-value gap for every vertex.
pub fn default_epsilon(g: &Graph) -> f64 {
    let gap = min_value_gap(&g.vertex_values).unwrap_or(1.0);
    let scale = g
        .vertex_values
        .iter()
        .fold(1.0f64, |acc, x| acc.max(x.abs()));
    let size = (g.num_vertices + g.num_edges()).max(1) as f64;
    gap / (4.0 * size * scale)
}

/// ε-perturbed edge value for the given direction.
pub fn perturbed_edge_value(lo: f64, hi: f64, epsilon: f64, direction: Direction) -> f64 {
    match direction {
        Direction::Lower => hi + epsilon * lo,
        Direction::Upper => lo + epsilon * hi,
    }
}

/// Total order on the vertices and edges of a graph, with per-simplex values.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexFiltration {
    pub direction: Direction,
    pub epsilon: f64,
    order: Vec<Simplex>,
    vertex_values: Vec<f64>,
    edge_values: Vec<f64>,
    vertex_pos: Vec<usize>,
    edge_pos: Vec<usize>,
}

impl IndexFiltration {
    pub fn order(&self) -> &[Simplex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_values.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_values.len()
    }

    pub fn value(&self, s: Simplex) -> f64 {
        match s {
            Simplex::Vertex(v) => self.vertex_values[v],
            Simplex::Edge(e) => self.edge_values[e],
        }
    }

    pub fn edge_value(&self, e: usize) -> f64 {
        self.edge_values[e]
    }

    pub fn vertex_value(&self, v: usize) -> f64 {
        self.vertex_values[v]
    }

    pub fn position(&self, s: Simplex) -> usize {
        match s {
            Simplex::Vertex(v) => self.vertex_pos[v],
            Simplex::Edge(e) => self.edge_pos[e],
        }
    }

    /// Edge indices in filtration order.
    pub fn edges_in_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().filter_map(|s| match *s {
            Simplex::Edge(e) => Some(e),
            Simplex::Vertex(_) => None,
        })
    }

    /// Checks that this filtration is a well-formed index filtration of `g`.
    ///
    /// Monotonicity is checked on the unperturbed values, which is what fixes
    /// the order; the ε-perturbed upper edge values sit slightly above their
    /// lower endpoint and are therefore not monotone themselves.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let mismatch = |msg: String| Err(Error::FiltrationMismatch(msg));
        if self.num_vertices() != g.num_vertices || self.num_edges() != g.num_edges() {
            return mismatch(format!(
                "filtration has {} vertices and {} edges, graph has {} and {}",
                self.num_vertices(),
                self.num_edges(),
                g.num_vertices,
                g.num_edges()
            ));
        }
        let n = g.num_vertices;
        let mut seen = vec![false; n + g.num_edges()];
        for (i, &s) in self.order.iter().enumerate() {
            let in_range = match s {
                Simplex::Vertex(v) => v < n,
                Simplex::Edge(e) => e < g.num_edges(),
            };
            if !in_range || std::mem::replace(&mut seen[s.flat_index(n)], true) || self.position(s) != i {
                return mismatch(format!("simplex {s} at position {i} is out of place"));
            }
            if let Simplex::Edge(e) = s {
                let (u, v) = g.edges[e];
                if self.vertex_pos[u] > i || self.vertex_pos[v] > i {
                    return mismatch(format!("edge {e} precedes one of its endpoints"));
                }
            }
        }
        if self.order.len() != seen.len() {
            return mismatch("filtration does not list every simplex".into());
        }
        for w in self.order.windows(2) {
            let a = g.base_value(w[0], self.direction);
            let b = g.base_value(w[1], self.direction);
            let ok = match self.direction {
                Direction::Lower => a <= b,
                Direction::Upper => a >= b,
            };
            if !ok {
                return mismatch(format!("{} and {} are out of value order", w[0], w[1]));
            }
        }
        Ok(())
    }
}

struct SortKey {
    primary: f64,
    is_edge: bool,
    secondary: f64,
    index: usize,
}

fn build_filtration(g: &Graph, policy: &TieBreakPolicy, direction: Direction) -> Result<IndexFiltration> {
    g.check()?;
    let epsilon = policy.resolve_epsilon(g)?;
    let n = g.num_vertices;
    let m = g.num_edges();

    let edge_values: Vec<f64> = (0..m)
        .map(|e| {
            let (lo, hi) = g.edge_endpoint_values(e);
            perturbed_edge_value(lo, hi, epsilon, direction)
        })
        .collect();

    let mut keys: Vec<(Simplex, SortKey)> = Vec::with_capacity(n + m);
    for v in 0..n {
        let x = g.vertex_values[v];
        keys.push((Simplex::Vertex(v), SortKey { primary: x, is_edge: false, secondary: x, index: v }));
    }
    for e in 0..m {
        let (lo, hi) = g.edge_endpoint_values(e);
        let key = match (policy.mode, direction) {
            (TieBreakMode::Lexicographic, Direction::Lower) => (hi, lo),
            (TieBreakMode::Lexicographic, Direction::Upper) => (lo, hi),
            // clamp so that an edge never lands before its endpoints
            (TieBreakMode::EpsilonFormula, Direction::Lower) => (edge_values[e].max(hi), edge_values[e]),
            (TieBreakMode::EpsilonFormula, Direction::Upper) => (edge_values[e].min(lo), edge_values[e]),
        };
        keys.push((Simplex::Edge(e), SortKey { primary: key.0, is_edge: true, secondary: key.1, index: e }));
    }

    let descending = direction == Direction::Upper;
    keys.sort_by(|(_, a), (_, b)| {
        let by_value = |x: f64, y: f64| -> Ordering {
            if descending {
                y.total_cmp(&x)
            } else {
                x.total_cmp(&y)
            }
        };
        by_value(a.primary, b.primary)
            .then(a.is_edge.cmp(&b.is_edge))
            .then_with(|| by_value(a.secondary, b.secondary))
            .then(a.index.cmp(&b.index))
    });

    let order: Vec<Simplex> = keys.into_iter().map(|(s, _)| s).collect();
    let mut vertex_pos = vec![0; n];
    let mut edge_pos = vec![0; m];
    for (i, s) in order.iter().enumerate() {
        match *s {
            Simplex::Vertex(v) => vertex_pos[v] = i,
            Simplex::Edge(e) => edge_pos[e] = i,
        }
    }

    Ok(IndexFiltration {
        direction,
        epsilon,
        order,
        vertex_values: g.vertex_values.clone(),
        edge_values,
        vertex_pos,
        edge_pos,
    })
}

/// Sublevel index filtration; edge `(u, v)` is valued `max + ε·min`.
pub fn build_lower_filtration(g: &Graph, policy: &TieBreakPolicy) -> Result<IndexFiltration> {
    build_filtration(g, policy, Direction::Lower)
}

/// Superlevel index filtration; edge `(u, v)` is valued `min + ε·max`.
pub fn build_upper_filtration(g: &Graph, policy: &TieBreakPolicy) -> Result<IndexFiltration> {
    build_filtration(g, policy, Direction::Upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0.0, 1.0, 2.0])
    }

    #[test]
    fn triangle_validates_cleanly() {
        let r = triangle().validate();
        assert!(r.is_valid());
        assert!(r.warnings.is_empty());
        assert!(r.isolated_vertices.is_empty());
    }

    #[test]
    fn self_loop_is_a_violation() {
        let g = Graph::new(2, vec![(0, 0), (0, 1)], vec![0.0, 1.0]);
        let r = g.validate();
        assert_eq!(r.violations, vec![Violation::SelfLoop { edge: 0, vertex: 0 }]);
        assert!(matches!(g.check(), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn duplicate_values_warn_but_fail_check() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], vec![1.0, 1.0, 2.0]);
        let r = g.validate();
        assert!(r.is_valid());
        assert_eq!(r.warnings, vec![Warning::DuplicateValues { first: 0, second: 1, value: 1.0 }]);
        assert!(matches!(
            build_lower_filtration(&g, &TieBreakPolicy::default()),
            Err(Error::DuplicateVertexValues { .. })
        ));
    }

    #[test]
    fn duplicate_edges_and_out_of_range() {
        let g = Graph::new(3, vec![(0, 1), (1, 0), (2, 5)], vec![0.0, 1.0, 2.0]);
        let r = g.validate();
        assert!(r.violations.contains(&Violation::DuplicateEdge { first: 0, second: 1 }));
        assert!(r.violations.contains(&Violation::VertexOutOfRange { edge: 2, vertex: 5 }));
    }

    #[test]
    fn isolated_vertices_are_reported_not_rejected() {
        let g = Graph::new(3, vec![(0, 1)], vec![0.0, 1.0, 2.0]);
        let r = g.validate();
        assert!(r.is_valid());
        assert_eq!(r.isolated_vertices, vec![2]);
    }

    #[test]
    fn lower_triangle_values_and_order() {
        let f = build_lower_filtration(&triangle(), &TieBreakPolicy::with_epsilon(0.001)).unwrap();
        assert_eq!(f.edge_value(0), 1.0);
        assert_eq!(f.edge_value(1), 2.0 + 0.001);
        assert_eq!(f.edge_value(2), 2.0);
        use Simplex::*;
        assert_eq!(f.order(), &[Vertex(0), Vertex(1), Edge(0), Vertex(2), Edge(2), Edge(1)]);
        f.check(&triangle()).unwrap();
    }

    #[test]
    fn upper_triangle_values_and_order() {
        let f = build_upper_filtration(&triangle(), &TieBreakPolicy::with_epsilon(0.001)).unwrap();
        assert_eq!(f.edge_value(1), 1.0 + 0.001 * 2.0);
        assert_eq!(f.edge_value(0), 0.001 * 1.0);
        assert_eq!(f.edge_value(2), 0.001 * 2.0);
        use Simplex::*;
        assert_eq!(f.order(), &[Vertex(2), Vertex(1), Edge(1), Vertex(0), Edge(2), Edge(0)]);
        f.check(&triangle()).unwrap();
    }

    #[test]
    fn single_vertex_filtrations() {
        let g = Graph::new(1, vec![], vec![3.0]);
        for f in [
            build_lower_filtration(&g, &TieBreakPolicy::default()).unwrap(),
            build_upper_filtration(&g, &TieBreakPolicy::default()).unwrap(),
        ] {
            assert_eq!(f.order(), &[Simplex::Vertex(0)]);
        }
    }

    #[test]
    fn path_of_two() {
        let g = Graph::new(2, vec![(0, 1)], vec![5.0, 3.0]);
        let f = build_lower_filtration(&g, &TieBreakPolicy::with_epsilon(0.001)).unwrap();
        assert_eq!(f.edge_value(0), 5.0 + 0.001 * 3.0);
        use Simplex::*;
        assert_eq!(f.order(), &[Vertex(1), Vertex(0), Edge(0)]);
    }

    #[test]
    fn relabeled_triangle_keeps_value_roles() {
        let g = triangle();
        let h = g.relabel(&[2, 0, 1]);
        let pol = TieBreakPolicy::with_epsilon(0.001);
        for dir in [Direction::Lower, Direction::Upper] {
            let fg = build_filtration(&g, &pol, dir).unwrap();
            let fh = build_filtration(&h, &pol, dir).unwrap();
            let roles = |f: &IndexFiltration| -> Vec<(bool, u64)> {
                f.order().iter().map(|&s| (s.is_vertex(), f.value(s).to_bits())).collect()
            };
            assert_eq!(roles(&fg), roles(&fh));
        }
    }

    #[test]
    fn default_epsilon_stays_inside_gap() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], vec![-1000.0, -999.0, 1000.0]);
        let eps = default_epsilon(&g);
        assert!(eps * 1000.0 < 0.25);
        let f = build_lower_filtration(&g, &TieBreakPolicy::default()).unwrap();
        f.check(&g).unwrap();
    }

    #[test]
    fn epsilon_validation() {
        let g = triangle();
        assert!(TieBreakPolicy::with_epsilon(0.0).resolve_epsilon(&g).is_err());
        assert!(TieBreakPolicy::with_epsilon(f64::NAN).resolve_epsilon(&g).is_err());
        assert!(TieBreakPolicy::epsilon_formula(Some(0.6)).resolve_epsilon(&g).is_err());
        assert!(TieBreakPolicy::epsilon_formula(Some(0.4)).resolve_epsilon(&g).is_ok());
    }

    #[test]
    fn epsilon_mode_matches_lexicographic_for_nonnegative_values() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], vec![0.3, 0.9, 0.1, 0.5]);
        for dir in [Direction::Lower, Direction::Upper] {
            let a = build_filtration(&g, &TieBreakPolicy::default(), dir).unwrap();
            let b = build_filtration(&g, &TieBreakPolicy::epsilon_formula(None), dir).unwrap();
            assert_eq!(a.order(), b.order());
            b.check(&g).unwrap();
        }
    }
}
