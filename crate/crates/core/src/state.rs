//! Mutable overlay on an immutable graph: deleted vertices, infinite-weight
//! overrides and the matching edges accumulated so far.

use fixedbitset::FixedBitSet;

use crate::check::check_dim;
use crate::graph::{Edge, EdgeId, Matching, VertexId, WeightedGraph};
use crate::patterns::{butterfly_peripheral_edges, c4_edges, diamond_mid_edges};
use crate::weight::{Scalar, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("operation requires a feasible state")]
    InfeasibleState,
    #[error("edge {0:?} is not alive")]
    EdgeNotAlive(Edge),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    /// Adding the edge would break the induced-matching property.
    NotInduced(Edge),
    /// A forced edge carries infinite weight.
    InfiniteForced(Edge),
    /// A structural property required for a d.i.m. containing `xy` failed.
    Structure(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible(Infeasibility),
}

/// Residual view of `base` together with the matching built so far.
///
/// Cloning is cheap (three bitsets and a short edge list), which is how
/// branches are forked.
#[derive(Clone)]
pub struct SolverState<'g, W: Scalar = u64> {
    base: &'g WeightedGraph<W>,
    alive: FixedBitSet,
    matched: FixedBitSet,
    inf: FixedBitSet,
    m_acc: Vec<EdgeId>,
    status: Status,
}

impl<W: Scalar> std::fmt::Debug for SolverState<'_, W> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverState")
            .field("alive", &self.alive.ones().collect::<Vec<_>>())
            .field("m_acc", &self.matching())
            .field("status", &self.status)
            .finish()
    }
}

impl<'g, W: Scalar> SolverState<'g, W> {
    pub fn new(base: &'g WeightedGraph<W>) -> Self {
        let mut alive = FixedBitSet::with_capacity(base.n());
        alive.insert_range(..);
        SolverState {
            base,
            alive,
            matched: FixedBitSet::with_capacity(base.n()),
            inf: FixedBitSet::with_capacity(base.m()),
            m_acc: Vec::new(),
            status: Status::Feasible,
        }
    }

    pub fn base(&self) -> &'g WeightedGraph<W> {
        self.base
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    pub fn mark_infeasible(&mut self, why: Infeasibility) {
        if self.is_feasible() {
            self.status = Status::Infeasible(why);
        }
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    pub fn alive(&self) -> &FixedBitSet {
        &self.alive
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.ones()
    }

    /// Alive neighbors of `v`.
    pub fn nbrs(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.base.adj(v).iter().copied().filter(move |&w| self.alive[w])
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.matched[v]
    }

    pub fn edge_alive(&self, e: Edge) -> bool {
        self.alive[e.u()] && self.alive[e.v()] && self.base.has_edge(e.u(), e.v())
    }

    /// Override if present, otherwise the base weight.
    pub fn effective_weight_id(&self, id: EdgeId) -> Weight<W> {
        if self.inf[id] {
            Weight::Infinite
        } else {
            self.base.weight(id)
        }
    }

    /// Panics if `e` is not an edge of the base graph.
    pub fn effective_weight(&self, e: Edge) -> Weight<W> {
        let id = self.base.edge_id(e.u(), e.v()).expect("edge of the base graph");
        self.effective_weight_id(id)
    }

    pub fn set_infinite(&mut self, e: Edge) {
        if let Some(id) = self.base.edge_id(e.u(), e.v()) {
            self.inf.insert(id);
        }
    }

    pub fn infinite_ids(&self) -> &FixedBitSet {
        &self.inf
    }

    pub fn matching(&self) -> Matching {
        self.m_acc.iter().map(|&id| self.base.edge(id)).collect()
    }

    pub fn matching_ids(&self) -> &[EdgeId] {
        &self.m_acc
    }

    /// Sum of the effective weights of the accumulated matching.
    pub fn acc_weight(&self) -> Weight<W> {
        self.m_acc.iter().map(|&id| self.effective_weight_id(id)).sum()
    }

    /// Induced subgraph on the alive vertices with effective weights baked
    /// in, plus the map from new ids back to base ids.
    pub fn residual_graph(&self) -> Result<(WeightedGraph<W>, Vec<VertexId>), StateError> {
        if !self.is_feasible() {
            return Err(StateError::InfeasibleState);
        }
        let keep: Vec<VertexId> = self.alive.ones().collect();
        Ok(self.restricted(&keep))
    }

    /// Induced subgraph on `keep` (alive base ids) with effective weights.
    pub fn restricted(&self, keep: &[VertexId]) -> (WeightedGraph<W>, Vec<VertexId>) {
        let mut back = keep.to_vec();
        back.sort_unstable();
        let mut map = vec![usize::MAX; self.base.n()];
        for (i, &v) in back.iter().enumerate() {
            map[v] = i;
        }
        let edges = self
            .base
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| map[e.u()] != usize::MAX && map[e.v()] != usize::MAX)
            .map(|(id, e)| (map[e.u()], map[e.v()], self.effective_weight_id(id)));
        let g = WeightedGraph::build(back.len(), edges).expect("restriction of a simple graph");
        (g, back)
    }

    /// Reduction step for `vw`: add it to the matching, delete both ends
    /// and give every alive edge at distance one infinite weight. Breaking
    /// the induced-matching property makes the state infeasible instead.
    pub fn apply_reduction_step(&mut self, vw: Edge) -> Result<(), StateError> {
        if !self.is_feasible() {
            return Err(StateError::InfeasibleState);
        }
        let id = match self.base.edge_id(vw.u(), vw.v()) {
            Some(id) if self.alive[vw.u()] && self.alive[vw.v()] => id,
            _ => return Err(StateError::EdgeNotAlive(vw)),
        };
        for x in vw.ends() {
            if self.base.adj(x).iter().any(|&z| self.matched[z]) {
                self.status = Status::Infeasible(Infeasibility::NotInduced(vw));
                return Ok(());
            }
        }
        for x in vw.ends() {
            for &z in self.base.adj(x) {
                if !self.alive[z] || vw.contains(z) {
                    continue;
                }
                for (k, &q) in self.base.adj(z).iter().enumerate() {
                    if self.alive[q] && !vw.contains(q) {
                        self.inf.insert(self.base.incident(z)[k]);
                    }
                }
            }
        }
        for x in vw.ends() {
            self.alive.set(x, false);
            self.matched.insert(x);
        }
        self.m_acc.push(id);
        Ok(())
    }

    /// Give every alive edge lying on an induced C4 of the residual graph
    /// infinite weight.
    pub fn mark_c4_edges_infinite(&mut self) -> Result<(), StateError> {
        let (g, back) = self.residual_graph()?;
        for e in c4_edges(&g) {
            self.set_infinite(Edge::new(back[e.u()], back[e.v()]));
        }
        Ok(())
    }
}

/// Result of seeding with diamond mid-edges and butterfly peripheral edges.
#[derive(Debug)]
pub enum Seeded<'g, W: Scalar> {
    State(SolverState<'g, W>),
    NoDim,
    /// The forced edges already form a d.i.m.
    Done(Matching, Weight<W>),
}

/// Forced edges of the whole graph: diamond mid-edges and butterfly
/// peripheral edges, in canonical order without repetition.
pub fn forced_seed<W: Scalar>(g: &WeightedGraph<W>) -> Vec<Edge> {
    let mut f = diamond_mid_edges(g);
    f.extend(butterfly_peripheral_edges(g));
    f.sort_unstable();
    f.dedup();
    f
}

pub fn seed_forced_edges<W: Scalar>(g: &WeightedGraph<W>) -> Seeded<'_, W> {
    let forced: Matching = forced_seed(g).into_iter().collect();
    let report = check_dim(g, &forced).expect("forced edges belong to the graph");
    if !report.induced_matching {
        return Seeded::NoDim;
    }
    if !forced.is_empty() && report.dim {
        let w = forced.iter().map(|e| g.weight_of(e).unwrap()).sum();
        return Seeded::Done(forced, w);
    }
    let mut s = SolverState::new(g);
    for e in forced.iter() {
        s.apply_reduction_step(e).expect("forced edges are disjoint");
        if !s.is_feasible() {
            return Seeded::NoDim;
        }
    }
    Seeded::State(s)
}
