//! Immutable edge-weighted simple graphs.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::weight::{Scalar, Weight};

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

/// Index into the canonical edge list of a [`WeightedGraph`].
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("self loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {v} out of range for graph with {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("edge {0}-{1} is not present")]
    EdgeNotPresent(VertexId, VertexId),
}

/// Undirected edge stored as a 2-set with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Canonicalizes the endpoint order. Panics on a loop.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    #[inline]
    pub fn u(&self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> VertexId {
        self.v
    }

    #[inline]
    pub fn ends(&self) -> [VertexId; 2] {
        [self.u, self.v]
    }

    #[inline]
    pub fn contains(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn intersects(&self, other: &Edge) -> bool {
        self.contains(other.u) || self.contains(other.v)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((a, b): (VertexId, VertexId)) -> Self {
        Edge::new(a, b)
    }
}

/// Simple undirected graph with a weight on every edge.
///
/// Adjacency lists are sorted; edges are numbered in canonical `(u, v)`
/// order so that `EdgeId`s are stable and deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedGraph<W = u64> {
    adj: Vec<Vec<VertexId>>,
    adj_edge: Vec<Vec<EdgeId>>,
    edges: Vec<Edge>,
    weights: Vec<Weight<W>>,
}

impl<W: Scalar> fmt::Debug for WeightedGraph<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedGraph")
            .field("n", &self.n())
            .field(
                "edges",
                &self
                    .edges
                    .iter()
                    .zip(&self.weights)
                    .map(|(e, w)| format!("{}-{}:{}", e.u, e.v, w))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl<W: Scalar> WeightedGraph<W> {
    pub fn build<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Weight<W>)>,
    {
        let mut list = Vec::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { v: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((Edge::new(a, b), w));
        }
        list.sort_by_key(|(e, _)| *e);
        for pair in list.windows(2) {
            if pair[0].0 == pair[1].0 {
                let e = pair[0].0;
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
        }

        let mut adj = vec![Vec::new(); n];
        let mut adj_edge = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(list.len());
        let mut weights = Vec::with_capacity(list.len());
        for (id, (e, w)) in list.into_iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
            edges.push(e);
            weights.push(w);
        }
        let mut adj_v = Vec::with_capacity(n);
        for list in adj.iter_mut() {
            list.sort_unstable();
            adj_v.push(list.iter().map(|&(x, _)| x).collect());
        }
        for (v, list) in adj.into_iter().enumerate() {
            adj_edge[v] = list.into_iter().map(|(_, id)| id).collect();
        }
        Ok(WeightedGraph {
            adj: adj_v,
            adj_edge,
            edges,
            weights,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unit<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::build(n, edges.into_iter().map(|(a, b)| (a, b, Weight::Finite(W::one()))))
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, std::iter::empty()).expect("empty graph is valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n() })
        }
    }

    /// N(v), sorted.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        self.check_vertex(v)?;
        Ok(&self.adj[v])
    }

    /// N(v) without the range check.
    #[inline]
    pub fn adj(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    /// Edge ids incident to `v`, parallel to [`adj`](Self::adj).
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adj_edge[v]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        if a >= self.n() || b >= self.n() || a == b {
            return None;
        }
        let (from, to) = if self.adj[a].len() <= self.adj[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[from].binary_search(&to).ok().map(|i| self.adj_edge[from][i])
    }

    #[inline]
    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn id_of(&self, e: Edge) -> Result<EdgeId, GraphError> {
        self.edge_id(e.u, e.v).ok_or(GraphError::EdgeNotPresent(e.u, e.v))
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    #[inline]
    pub fn weight(&self, id: EdgeId) -> Weight<W> {
        self.weights[id]
    }

    pub fn weight_of(&self, e: Edge) -> Result<Weight<W>, GraphError> {
        self.id_of(e).map(|id| self.weights[id])
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> &[Weight<W>] {
        &self.weights
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (Edge, Weight<W>)> + '_ {
        self.edges.iter().copied().zip(self.weights.iter().copied())
    }

    /// Same topology with every weight passed through `f`.
    pub fn map_weights<F>(&self, mut f: F) -> Self
    where
        F: FnMut(Edge, Weight<W>) -> Weight<W>,
    {
        let mut g = self.clone();
        for (id, w) in g.weights.iter_mut().enumerate() {
            *w = f(self.edges[id], *w);
        }
        g
    }

    /// Open and closed neighborhood of an edge: N(uv) and N[uv].
    pub fn edge_neighborhood(&self, e: Edge) -> Result<(Vec<VertexId>, Vec<VertexId>), GraphError> {
        self.id_of(e)?;
        let mut open: Vec<VertexId> = self.adj[e.u]
            .iter()
            .chain(&self.adj[e.v])
            .copied()
            .filter(|&x| !e.contains(x))
            .collect();
        open.sort_unstable();
        open.dedup();
        let mut closed = open.clone();
        closed.extend([e.u, e.v]);
        closed.sort_unstable();
        Ok((open, closed))
    }

    /// Subgraph induced by `keep`, renumbered in increasing old-id order.
    ///
    /// The returned map sends old ids to new ids (`None` when dropped).
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<(Self, Vec<Option<VertexId>>), GraphError> {
        let mut map = vec![None; self.n()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            self.check_vertex(v)?;
        }
        for (new, &old) in sorted.iter().enumerate() {
            map[old] = Some(new);
        }
        let edges = self
            .weighted_edges()
            .filter_map(|(e, w)| Some((map[e.u]?, map[e.v]?, w)));
        let g = Self::build(sorted.len(), edges).expect("induced subgraph is simple");
        Ok((g, map))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// One adjacency bitset per vertex.
    pub fn adjacency_bitsets(&self) -> Vec<FixedBitSet> {
        self.adj
            .iter()
            .map(|list| {
                let mut row = FixedBitSet::with_capacity(self.n());
                for &w in list {
                    row.insert(w);
                }
                row
            })
            .collect()
    }
}

/// Canonical, sorted, duplicate-free set of edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        match self.edges.binary_search(&e) {
            Ok(_) => false,
            Err(i) => {
                self.edges.insert(i, e);
                true
            }
        }
    }

    /// V(M), sorted.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.edges.iter().flat_map(|e| e.ends()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn union(&self, other: &Matching) -> Matching {
        self.iter().chain(other.iter()).collect()
    }

    /// Renames endpoints through `f` (e.g. back to a parent graph's ids).
    pub fn map_vertices(&self, f: impl Fn(VertexId) -> VertexId) -> Matching {
        self.iter().map(|e| Edge::new(f(e.u), f(e.v))).collect()
    }
}

impl FromIterator<Edge> for Matching {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        let mut edges: Vec<Edge> = iter.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }
}

impl<'a> IntoIterator for &'a Matching {
    type Item = &'a Edge;
    type IntoIter = std::slice::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}
