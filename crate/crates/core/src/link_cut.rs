//! Link-cut tree with path-max queries over weighted edges.
//!
//! The represented forest is stored subdivided: every tree edge is a node of
//! its own, sitting between its two endpoint vertices and carrying the edge
//! weight. Vertex nodes weigh `-inf`, so a max over a path's nodes is the max
//! over its edges, and re-rooting ([`DynamicForest::evert`]) needs no edge
//! bookkeeping.
//!
//! Each preferred path is an auxiliary splay tree keyed by depth. A node's
//! `parent` field is its splay parent, or the path-parent pointer when it is
//! the root of its auxiliary tree.

use thiserror::Error;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("node {0} is not the root of its tree")]
    NotARoot(usize),
    #[error("nodes {0} and {1} are already in the same tree")]
    SameTree(usize, usize),
    #[error("node {0} is a root and has no parent edge")]
    IsRoot(usize),
    #[error("nodes {0} and {1} are in different trees")]
    DifferentTrees(usize, usize),
    #[error("node {anc} is not an ancestor of {node}")]
    NotAncestor { node: usize, anc: usize },
    #[error("{lca} is not the lowest common ancestor of {u} and {v}")]
    InvalidLca { u: usize, v: usize, lca: usize },
}

/// A tree edge of the forest: endpoints, caller key, and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    /// Child endpoint at link time.
    pub a: usize,
    /// Parent endpoint at link time.
    pub b: usize,
    pub key: usize,
    pub weight: f64,
    handle: usize,
}

impl TreeEdge {
    /// Internal node id, usable with [`DynamicForest::cut_edge`].
    pub fn handle(&self) -> usize {
        self.handle
    }
}

#[derive(Debug, Clone)]
struct Node {
    ch: [usize; 2],
    parent: usize,
    rev: bool,
    weight: f64,
    /// (max weight, node id) over the splay subtree.
    agg: (f64, usize),
}

impl Node {
    fn new(id: usize, weight: f64) -> Self {
        Node { ch: [NIL, NIL], parent: NIL, rev: false, weight, agg: (weight, id) }
    }
}

fn agg_max(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)) {
        std::cmp::Ordering::Less => b,
        _ => a,
    }
}

#[derive(Debug, Clone)]
pub struct DynamicForest {
    num_vertices: usize,
    nodes: Vec<Node>,
    edges: Vec<Option<TreeEdge>>,
    free: Vec<usize>,
    rotations: u64,
}

impl DynamicForest {
    /// Forest of `n` isolated vertices `0..n`.
    pub fn new(n: usize) -> Self {
        DynamicForest {
            num_vertices: n,
            nodes: (0..n).map(|i| Node::new(i, f64::NEG_INFINITY)).collect(),
            edges: vec![None; n],
            free: Vec::new(),
            rotations: 0,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Total splay rotations performed so far.
    pub fn rotations(&self) -> u64 {
        self.rotations
    }

    fn check_vertex(&self, v: usize) -> Result<(), ForestError> {
        if v < self.num_vertices {
            Ok(())
        } else {
            Err(ForestError::UnknownNode(v))
        }
    }

    fn is_aux_root(&self, x: usize) -> bool {
        let p = self.nodes[x].parent;
        p == NIL || (self.nodes[p].ch[0] != x && self.nodes[p].ch[1] != x)
    }

    fn update(&mut self, x: usize) {
        let mut agg = (self.nodes[x].weight, x);
        for c in self.nodes[x].ch {
            if c != NIL {
                agg = agg_max(agg, self.nodes[c].agg);
            }
        }
        self.nodes[x].agg = agg;
    }

    fn push(&mut self, x: usize) {
        if self.nodes[x].rev {
            self.nodes[x].rev = false;
            self.nodes[x].ch.swap(0, 1);
            for c in self.nodes[x].ch {
                if c != NIL {
                    self.nodes[c].rev ^= true;
                }
            }
        }
    }

    fn rotate(&mut self, x: usize) {
        let y = self.nodes[x].parent;
        let z = self.nodes[y].parent;
        let dx = (self.nodes[y].ch[1] == x) as usize;
        if !self.is_aux_root(y) {
            let dy = (self.nodes[z].ch[1] == y) as usize;
            self.nodes[z].ch[dy] = x;
        }
        self.nodes[x].parent = z;
        let b = self.nodes[x].ch[dx ^ 1];
        self.nodes[y].ch[dx] = b;
        if b != NIL {
            self.nodes[b].parent = y;
        }
        self.nodes[x].ch[dx ^ 1] = y;
        self.nodes[y].parent = x;
        self.update(y);
        self.update(x);
        self.rotations += 1;
    }

    fn splay(&mut self, x: usize) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_aux_root(y) {
            y = self.nodes[y].parent;
            stack.push(y);
        }
        while let Some(s) = stack.pop() {
            self.push(s);
        }
        while !self.is_aux_root(x) {
            let y = self.nodes[x].parent;
            if !self.is_aux_root(y) {
                let z = self.nodes[y].parent;
                let same = (self.nodes[y].ch[1] == x) == (self.nodes[z].ch[1] == y);
                self.rotate(if same { y } else { x });
            }
            self.rotate(x);
        }
    }

    /// Makes the root-to-`x` path preferred with `x` at the root of its
    /// auxiliary tree. Returns the last node where the walk joined the
    /// previously exposed path.
    fn access(&mut self, x: usize) -> usize {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.nodes[y].ch[1] = last;
            self.update(y);
            last = y;
            y = self.nodes[y].parent;
        }
        self.splay(x);
        last
    }

    /// Public form of the exposure step.
    pub fn expose(&mut self, v: usize) -> Result<(), ForestError> {
        self.check_vertex(v)?;
        self.access(v);
        Ok(())
    }

    /// Makes `v` the root of its represented tree.
    pub fn evert(&mut self, v: usize) -> Result<(), ForestError> {
        self.check_vertex(v)?;
        self.evert_node(v);
        Ok(())
    }

    fn evert_node(&mut self, x: usize) {
        self.access(x);
        self.nodes[x].rev ^= true;
        self.push(x);
    }

    fn extreme(&mut self, mut x: usize, side: usize) -> usize {
        loop {
            self.push(x);
            let c = self.nodes[x].ch[side];
            if c == NIL {
                return x;
            }
            x = c;
        }
    }

    fn root_node(&mut self, x: usize) -> usize {
        self.access(x);
        let r = self.extreme(x, 0);
        self.splay(r);
        r
    }

    pub fn find_root(&mut self, v: usize) -> Result<usize, ForestError> {
        self.check_vertex(v)?;
        Ok(self.root_node(v))
    }

    pub fn connected(&mut self, u: usize, v: usize) -> Result<bool, ForestError> {
        Ok(self.find_root(u)? == self.find_root(v)?)
    }

    /// Represented parent of vertex `v`, skipping the edge node in between.
    pub fn parent(&mut self, v: usize) -> Result<Option<usize>, ForestError> {
        self.check_vertex(v)?;
        self.access(v);
        let l = self.nodes[v].ch[0];
        if l == NIL {
            return Ok(None);
        }
        let e = self.extreme(l, 1);
        self.splay(e);
        let l = self.nodes[e].ch[0];
        let p = self.extreme(l, 1);
        self.splay(p);
        Ok(Some(p))
    }

    fn alloc_edge(&mut self, weight: f64) -> usize {
        match self.free.pop() {
            Some(id) => {
                self.nodes[id] = Node::new(id, weight);
                id
            }
            None => {
                let id = self.nodes.len();
                self.nodes.push(Node::new(id, weight));
                self.edges.push(None);
                id
            }
        }
    }

    /// Attaches the root `child` below `parent` through a new edge.
    pub fn link(&mut self, child: usize, parent: usize, weight: f64, key: usize) -> Result<TreeEdge, ForestError> {
        self.check_vertex(child)?;
        self.check_vertex(parent)?;
        if self.root_node(child) != child {
            return Err(ForestError::NotARoot(child));
        }
        if self.root_node(parent) == child {
            return Err(ForestError::SameTree(child, parent));
        }
        Ok(self.link_unchecked(child, parent, weight, key))
    }

    /// As [`Self::link`]; the caller guarantees that `child` is a root and
    /// that `parent` lies in another tree.
    pub(crate) fn link_unchecked(&mut self, child: usize, parent: usize, weight: f64, key: usize) -> TreeEdge {
        let e = self.alloc_edge(weight);
        let edge = TreeEdge { a: child, b: parent, key, weight, handle: e };
        self.edges[e] = Some(edge);
        // `child` is a represented root, so after exposure it is alone on its path.
        self.access(child);
        self.nodes[child].parent = e;
        self.nodes[e].parent = parent;
        edge
    }

    /// Removes the edge between `x` and its represented parent node.
    fn detach(&mut self, x: usize) -> bool {
        self.access(x);
        let l = self.nodes[x].ch[0];
        if l == NIL {
            return false;
        }
        self.nodes[x].ch[0] = NIL;
        self.nodes[l].parent = NIL;
        self.update(x);
        true
    }

    fn release(&mut self, e: usize) -> TreeEdge {
        let edge = self.edges[e].take().expect("edge node is live");
        self.nodes[e] = Node::new(e, f64::NEG_INFINITY);
        self.free.push(e);
        edge
    }

    /// Detaches vertex `u` from its represented parent.
    pub fn cut(&mut self, u: usize) -> Result<TreeEdge, ForestError> {
        self.check_vertex(u)?;
        self.access(u);
        let l = self.nodes[u].ch[0];
        if l == NIL {
            return Err(ForestError::IsRoot(u));
        }
        // the parent edge node is u's in-order predecessor
        let e = self.extreme(l, 1);
        self.detach(u);
        self.detach(e);
        Ok(self.release(e))
    }

    /// Removes the given tree edge.
    pub fn cut_edge(&mut self, edge: &TreeEdge) -> Result<TreeEdge, ForestError> {
        let e = edge.handle;
        match self.edges.get(e) {
            Some(Some(live)) if live.key == edge.key && live.a == edge.a && live.b == edge.b => {}
            _ => return Err(ForestError::UnknownNode(e)),
        }
        // whichever endpoint sits above the edge node keeps the root
        self.access(e);
        let above = self.extreme(self.nodes[e].ch[0], 1);
        let below = if above == edge.a { edge.b } else { edge.a };
        self.detach(below);
        self.detach(e);
        Ok(self.release(e))
    }

    /// Lowest common ancestor of `u` and `v` under the current rooting.
    pub fn lca(&mut self, u: usize, v: usize) -> Result<usize, ForestError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.root_node(u) != self.root_node(v) {
            return Err(ForestError::DifferentTrees(u, v));
        }
        Ok(self.lca_unchecked(u, v))
    }

    /// As [`Self::lca`] for vertices known to share a tree.
    pub(crate) fn lca_unchecked(&mut self, u: usize, v: usize) -> usize {
        self.access(u);
        self.access(v)
    }

    fn check_ancestor(&mut self, u: usize, anc: usize) -> Result<(), ForestError> {
        match self.lca(u, anc) {
            Ok(l) if l == anc => Ok(()),
            _ => Err(ForestError::NotAncestor { node: u, anc }),
        }
    }

    /// Vertices from `u` up to its ancestor `anc`, both included.
    pub fn path_to(&mut self, u: usize, anc: usize) -> Result<Vec<usize>, ForestError> {
        self.check_vertex(u)?;
        self.check_vertex(anc)?;
        self.check_ancestor(u, anc)?;
        Ok(self.path_to_unchecked(u, anc))
    }

    /// As [`Self::path_to`] for a known ancestor.
    pub(crate) fn path_to_unchecked(&mut self, u: usize, anc: usize) -> Vec<usize> {
        self.access(u);
        self.splay(anc);
        let mut down = Vec::new();
        self.collect_in_order(self.nodes[anc].ch[1], &mut down);
        let mut path: Vec<usize> = down.into_iter().rev().filter(|&x| x < self.num_vertices).collect();
        path.push(anc);
        path
    }

    fn collect_in_order(&mut self, root: usize, out: &mut Vec<usize>) {
        let mut stack = Vec::new();
        let mut x = root;
        loop {
            while x != NIL {
                self.push(x);
                stack.push(x);
                x = self.nodes[x].ch[0];
            }
            match stack.pop() {
                None => break,
                Some(y) => {
                    out.push(y);
                    x = self.nodes[y].ch[1];
                }
            }
        }
    }

    /// Heaviest edge on the path from `u` up to its ancestor `anc`.
    pub fn path_max(&mut self, u: usize, anc: usize) -> Result<Option<TreeEdge>, ForestError> {
        self.check_vertex(u)?;
        self.check_vertex(anc)?;
        self.check_ancestor(u, anc)?;
        Ok(self.path_max_unchecked(u, anc))
    }

    fn path_max_unchecked(&mut self, u: usize, anc: usize) -> Option<TreeEdge> {
        if u == anc {
            return None;
        }
        self.access(u);
        self.splay(anc);
        let r = self.nodes[anc].ch[1];
        let (_, id) = self.nodes[r].agg;
        self.edges[id]
    }

    /// Heaviest edge on the tree path `u -> lca -> v`. Ties on weight go to
    /// the edge with the larger internal id.
    pub fn argmax_reduce_cycle(&mut self, u: usize, v: usize, lca: usize) -> Result<TreeEdge, ForestError> {
        let invalid = ForestError::InvalidLca { u, v, lca };
        self.check_vertex(lca)?;
        if self.lca(u, v)? != lca || u == v {
            return Err(invalid);
        }
        self.argmax_unchecked(u, v, lca).ok_or(invalid)
    }

    /// As [`Self::argmax_reduce_cycle`] for a known lca of `u != v`.
    pub(crate) fn argmax_unchecked(&mut self, u: usize, v: usize, lca: usize) -> Option<TreeEdge> {
        let a = self.path_max_unchecked(u, lca);
        let b = self.path_max_unchecked(v, lca);
        match (a, b) {
            (Some(x), Some(y)) => {
                if agg_max((x.weight, x.handle), (y.weight, y.handle)).1 == x.handle {
                    Some(x)
                } else {
                    Some(y)
                }
            }
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Vertices of the auxiliary tree holding `v`, in path order.
    pub fn preferred_path(&mut self, v: usize) -> Result<Vec<usize>, ForestError> {
        self.check_vertex(v)?;
        let r = self.aux_root_node(v);
        self.splay(r);
        let mut out = Vec::new();
        self.collect_in_order(r, &mut out);
        Ok(out.into_iter().filter(|&x| x < self.num_vertices).collect())
    }

    fn aux_root_node(&self, mut x: usize) -> usize {
        while !self.is_aux_root(x) {
            x = self.nodes[x].parent;
        }
        x
    }

    /// Root of the auxiliary splay tree that currently holds `v`.
    pub fn aux_root(&self, v: usize) -> Result<usize, ForestError> {
        self.check_vertex(v)?;
        Ok(self.aux_root_node(v))
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = &TreeEdge> {
        self.edges.iter().flatten()
    }

    /// Recomputes every subtree aggregate and checks the splay links; used
    /// by tests after arbitrary operation sequences.
    pub fn check_aggregates(&self) -> Result<(), String> {
        for x in 0..self.nodes.len() {
            let live = x < self.num_vertices || self.edges[x].is_some();
            if !live {
                continue;
            }
            let node = &self.nodes[x];
            let mut agg = (node.weight, x);
            for c in node.ch {
                if c == NIL {
                    continue;
                }
                if self.nodes[c].parent != x {
                    return Err(format!("child {c} of {x} does not point back"));
                }
                agg = agg_max(agg, self.nodes[c].agg);
            }
            if agg.1 != node.agg.1 || agg.0.to_bits() != node.agg.0.to_bits() {
                return Err(format!("stale aggregate at node {x}"));
            }
        }
        Ok(())
    }
}
