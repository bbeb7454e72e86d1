//! Completing a branch once N4 is empty: every u_i in S2 needs exactly one
//! mate in T_i, and every edge between two T sets must get exactly one
//! matched end point.
//!
//! The choice is made by two-coloring T_one (black for mates, white for
//! I-vertices) with the propagation of [`extend_w_in_m`].

use std::collections::VecDeque;

use crate::check::check_dim;
use crate::graph::{Edge, Matching, VertexId};
use crate::levels::LevelDecomposition;
use crate::state::SolverState;
use crate::weight::{Scalar, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EndgameError {
    #[error("vertex {0} is not in any T_i")]
    WNotInTOne(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

/// Colors of T_one vertices, indexed by base vertex id.
#[derive(Clone, Debug)]
pub struct Coloring(Vec<Option<Color>>);

impl Coloring {
    pub fn new(n: usize) -> Self {
        Coloring(vec![None; n])
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.0[v]
    }

    fn paint(&mut self, v: VertexId, c: Color, queue: &mut VecDeque<VertexId>) -> bool {
        match self.0[v] {
            Some(old) => old == c,
            None => {
                self.0[v] = Some(c);
                queue.push_back(v);
                true
            }
        }
    }

    /// Black vertex of T_i, if any.
    pub fn black_in(&self, d: &LevelDecomposition, i: usize) -> Option<VertexId> {
        d.t[i].iter().copied().find(|&t| self.0[t] == Some(Color::Black))
    }
}

fn t_one_nbrs<'a, W: Scalar>(
    s: &'a SolverState<'_, W>,
    d: &'a LevelDecomposition,
    v: VertexId,
) -> impl Iterator<Item = VertexId> + 'a {
    s.base().adj(v).iter().copied().filter(|&w| d.is_t_one(w))
}

/// Color `w` black on top of `col` and propagate. Returns false on a
/// recolor conflict, leaving `col` in an unspecified state.
pub fn extend<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, col: &mut Coloring, w: &[VertexId]) -> bool {
    let mut queue = VecDeque::new();
    for &v in w {
        if !col.paint(v, Color::Black, &mut queue) {
            return false;
        }
    }
    while let Some(v) = queue.pop_front() {
        match col.get(v).expect("queued vertices are colored") {
            Color::Black => {
                let i = d.t_index[v].expect("colored vertices lie in T_one");
                let others = d.t[i].iter().copied().filter(|&t| t != v);
                for z in t_one_nbrs(s, d, v).chain(others) {
                    if !col.paint(z, Color::White, &mut queue) {
                        return false;
                    }
                }
            }
            Color::White => {
                for z in t_one_nbrs(s, d, v) {
                    if !col.paint(z, Color::Black, &mut queue) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendResult {
    NoDimWithW,
    Partition {
        black: Vec<VertexId>,
        white: Vec<VertexId>,
        /// T_one vertices of W' left without a color.
        uncolored: Vec<VertexId>,
        /// S2 vertices whose T set holds a black vertex.
        s2_colored: Vec<VertexId>,
    },
}

/// Vertices of the components of G[S2 ∪ T_one] that meet `w`.
fn w_prime<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, w: &[VertexId]) -> Vec<VertexId> {
    let g = s.base();
    let inside = |v: VertexId| d.is_t_one(v) || d.s2.binary_search(&v).is_ok();
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<VertexId> = w.to_vec();
    for &v in w {
        seen[v] = true;
    }
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for &z in g.adj(v) {
            if !seen[z] && inside(z) {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Extend from scratch, reporting the partition of T_one ∩ W'.
pub fn extend_w_in_m<W: Scalar>(
    s: &SolverState<'_, W>,
    d: &LevelDecomposition,
    w: &[VertexId],
) -> Result<ExtendResult, EndgameError> {
    if let Some(&v) = w.iter().find(|&&v| v >= d.t_index.len() || !d.is_t_one(v)) {
        return Err(EndgameError::WNotInTOne(v));
    }
    let mut col = Coloring::new(s.base().n());
    if !extend(s, d, &mut col, w) {
        return Ok(ExtendResult::NoDimWithW);
    }
    let (mut black, mut white, mut uncolored) = (Vec::new(), Vec::new(), Vec::new());
    for v in w_prime(s, d, w).into_iter().filter(|&v| d.is_t_one(v)) {
        match col.get(v) {
            Some(Color::Black) => black.push(v),
            Some(Color::White) => white.push(v),
            None => uncolored.push(v),
        }
    }
    let s2_colored = (0..d.k())
        .filter(|&i| col.black_in(d, i).is_some())
        .map(|i| d.s2[i])
        .collect();
    Ok(ExtendResult::Partition {
        black,
        white,
        uncolored,
        s2_colored,
    })
}

/// Mates forced by S3: a T_i vertex seeing S3 must be matched with u_i.
/// `None` when two S3 vertices are adjacent.
pub fn s3_contacts<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Vec<Edge>> {
    let mut out = Vec::new();
    for &v in &d.s3 {
        for z in d.nbrs_in(s, v, 3) {
            let i = d.t_index[z]?;
            out.push(Edge::new(d.s2[i], z));
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Force the mates of [`s3_contacts`] on `s`. Returns whether anything
/// changed; an S3 edge makes `s` infeasible.
pub fn force_s3_contacts<W: Scalar>(s: &mut SolverState<'_, W>, d: &LevelDecomposition) -> bool {
    match s3_contacts(s, d) {
        Some(e) => crate::levels::force_all(s, &e),
        None => {
            s.mark_infeasible(crate::state::Infeasibility::Structure("adjacent S3 vertices"));
            true
        }
    }
}

/// Candidate completion: mate edges and their effective weight.
pub type Partial<W> = (Vec<Edge>, Weight<W>);

fn better<W: Scalar>(a: &Partial<W>, b: &Partial<W>) -> bool {
    a.1 < b.1 || (a.1 == b.1 && a.0 < b.0)
}

fn keep_best<W: Scalar>(best: &mut Option<Partial<W>>, cand: Partial<W>) {
    if best.as_ref().is_none_or(|b| better(&cand, b)) {
        *best = Some(cand);
    }
}

/// Mate edges for the T sets whose index is in `idx`; `None` when one of
/// them has no black vertex.
fn mates<W: Scalar>(
    s: &SolverState<'_, W>,
    d: &LevelDecomposition,
    col: &Coloring,
    idx: impl IntoIterator<Item = usize>,
) -> Option<Partial<W>> {
    let mut edges = Vec::new();
    let mut w = Weight::zero();
    for i in idx {
        let e = Edge::new(d.s2[i], col.black_in(d, i)?);
        w = w + s.effective_weight(e);
        edges.push(e);
    }
    edges.sort_unstable();
    Some((edges, w))
}

/// Finish the region `q_set` (T indices of one uncolored component) after
/// coloring `q` black: leaf T sets still lacking a black vertex get the
/// cheapest admissible one.
pub fn solve_star_component<W: Scalar>(
    s: &SolverState<'_, W>,
    d: &LevelDecomposition,
    base: &Coloring,
    q_set: &[usize],
    q: VertexId,
) -> Option<Partial<W>> {
    let g = s.base();
    let mut col = base.clone();
    if !extend(s, d, &mut col, &[q]) {
        return None;
    }
    loop {
        let open = q_set
            .iter()
            .copied()
            .find(|&j| col.black_in(d, j).is_none() && d.t[j].iter().any(|&t| col.get(t).is_none()));
        let Some(j) = open else { break };
        let uj = d.s2[j];
        let free: Vec<VertexId> = d.t[j].iter().copied().filter(|&t| col.get(t).is_none()).collect();
        let inner = free
            .iter()
            .enumerate()
            .find_map(|(p, &a)| free[p + 1..].iter().find(|&&b| g.has_edge(a, b)).map(|&b| (a, b)));
        let key = |t: VertexId| (s.effective_weight(Edge::new(uj, t)), Edge::new(uj, t));
        let pick = match inner {
            Some((a, b)) => {
                if key(a) <= key(b) {
                    a
                } else {
                    b
                }
            }
            None => free.iter().copied().min_by_key(|&t| key(t)).expect("open T set"),
        };
        if !extend(s, d, &mut col, &[pick]) {
            return None;
        }
    }
    let p = mates(s, d, &col, q_set.iter().copied())?;
    p.1.is_finite().then_some(p)
}

/// Complete `col` over every uncolored part, component by component.
/// Returns the mates of all T sets.
fn complete<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, col: &Coloring) -> Option<Partial<W>> {
    let g = s.base();
    let k = d.k();
    let done: Vec<bool> = (0..k).map(|i| col.black_in(d, i).is_some()).collect();
    let (mut edges, mut w) = mates(s, d, col, (0..k).filter(|&i| done[i]))?;

    // region: open u_i together with the uncolored T_one vertices
    let s2_pos = |v: VertexId| d.s2.binary_search(&v).ok();
    let in_region = |v: VertexId| match (d.t_index[v], s2_pos(v)) {
        (Some(_), _) => col.get(v).is_none(),
        (None, Some(i)) => !done[i],
        _ => false,
    };
    let mut seen = vec![false; g.n()];
    for i in (0..k).filter(|&i| !done[i]) {
        let root = d.s2[i];
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut p = 0;
        while p < comp.len() {
            let v = comp[p];
            p += 1;
            for &z in g.adj(v) {
                if !seen[z] && in_region(z) {
                    seen[z] = true;
                    comp.push(z);
                }
            }
        }
        let mut q_set: Vec<usize> = comp.iter().filter_map(|&v| s2_pos(v)).collect();
        q_set.sort_unstable();
        let mut ts: Vec<VertexId> = comp.into_iter().filter(|&v| d.is_t_one(v)).collect();
        ts.sort_unstable();
        let mut best = None;
        for &q in &ts {
            if let Some(c) = solve_star_component(s, d, col, &q_set, q) {
                keep_best(&mut best, c);
            }
        }
        let (e, cw) = best?;
        edges.extend(e);
        w = w + cw;
    }
    edges.sort_unstable();
    Some((edges, w))
}

/// Full candidate from a finished set of mates: `None` unless it is a
/// finite d.i.m. of the base graph minus the unreached components, which
/// are solved separately.
fn validated<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, p: Partial<W>) -> Option<Partial<W>> {
    let m: Matching = s.matching().iter().chain(p.0.iter().copied()).collect();
    let w = s.acc_weight() + p.1;
    if !w.is_finite() {
        return None;
    }
    let g = s.base();
    let ok = if d.unreached.is_empty() {
        check_dim(g, &m).is_ok_and(|r| r.dim)
    } else {
        let mut skip = vec![false; g.n()];
        for &v in &d.unreached {
            skip[v] = true;
        }
        let keep: Vec<VertexId> = (0..g.n()).filter(|&v| !skip[v]).collect();
        let (sub, map) = g.induced_subgraph(&keep).expect("vertices of the base graph");
        let local = m.map_vertices(|v| map[v].expect("matched vertices are reached"));
        check_dim(&sub, &local).is_ok_and(|r| r.dim)
    };
    ok.then(|| (m.edges().to_vec(), w))
}

/// No edges between distinct T sets: each u_i picks its mate on its own.
pub fn solve_disjoint_ts<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Partial<W>> {
    let p = complete(s, d, &Coloring::new(s.base().n()))?;
    validated(s, d, p)
}

/// First edge between two different T sets, in canonical order.
pub fn first_cross_edge<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Edge> {
    let mut ts: Vec<VertexId> = d.t.iter().flatten().copied().collect();
    ts.sort_unstable();
    ts.iter().find_map(|&a| {
        t_one_nbrs(s, d, a)
            .filter(|&b| b > a && d.t_index[a] != d.t_index[b])
            .min()
            .map(|b| Edge::new(a, b))
    })
}

/// Sweep anchored at the cross edge `t1 t2`.
pub fn solve_with_t1t2_edge<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Partial<W>> {
    let g = s.base();
    let anchor = first_cross_edge(s, d)?;
    let mut seeds: Vec<Vec<VertexId>> = Vec::new();
    for (a, b) in [(anchor.u(), anchor.v()), (anchor.v(), anchor.u())] {
        let jb = d.t_index[b].expect("cross edge in T_one");
        let partners: Vec<VertexId> = d.t[jb].iter().copied().filter(|&t| !g.has_edge(a, t)).collect();
        if partners.is_empty() {
            seeds.push(vec![a]);
        }
        seeds.extend(partners.into_iter().map(|t| vec![a, t]));
    }
    let mut best = None;
    for w in seeds {
        let mut col = Coloring::new(g.n());
        if !extend(s, d, &mut col, &w) {
            continue;
        }
        if let Some(c) = complete(s, d, &col).and_then(|p| validated(s, d, p)) {
            keep_best(&mut best, c);
        }
    }
    best
}

/// Finish a branch with N4 empty and S3 isolated. The result is the whole
/// matching of the state (accumulated edges plus mates) and its weight.
pub fn solve_n4_empty<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Partial<W>> {
    if first_cross_edge(s, d).is_some() {
        solve_with_t1t2_edge(s, d)
    } else {
        solve_disjoint_ts(s, d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZComponent {
    Singleton(usize),
    EdgeType(usize, usize),
    StarType { center: usize, leaves: Vec<usize> },
}

/// Graph on T indices other than those of the anchor edge, restricted to
/// the common non-neighborhood of its ends; two indices are adjacent when
/// their restricted T sets see each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<ZComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZBuild {
    Ready(ZGraph),
    /// A component that is not a star.
    Infeasible,
}

pub fn build_z_graph<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, t1: VertexId, t2: VertexId) -> ZBuild {
    let g = s.base();
    let (i1, i2) = (d.t_index[t1], d.t_index[t2]);
    let far = |v: VertexId| v != t1 && v != t2 && !g.has_edge(v, t1) && !g.has_edge(v, t2);
    let nodes: Vec<usize> = (0..d.k()).filter(|&i| Some(i) != i1 && Some(i) != i2).collect();
    let mut edges = Vec::new();
    for (p, &i) in nodes.iter().enumerate() {
        for &j in &nodes[p + 1..] {
            let sees = d.t[i]
                .iter()
                .filter(|&&a| far(a))
                .any(|&a| d.t[j].iter().any(|&b| far(b) && g.has_edge(a, b)));
            if sees {
                edges.push((i, j));
            }
        }
    }
    let deg = |i: usize| edges.iter().filter(|&&(a, b)| a == i || b == i).count();
    let mut seen = vec![false; d.k()];
    let mut components = Vec::new();
    for &i in &nodes {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let mut comp = vec![i];
        let mut p = 0;
        while p < comp.len() {
            let v = comp[p];
            p += 1;
            for &(a, b) in &edges {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    comp.push(other);
                }
            }
        }
        comp.sort_unstable();
        let inner = edges.iter().filter(|&&(a, _)| comp.contains(&a)).count();
        match comp.len() {
            1 => components.push(ZComponent::Singleton(i)),
            2 => components.push(ZComponent::EdgeType(comp[0], comp[1])),
            l => {
                let centers: Vec<usize> = comp.iter().copied().filter(|&c| deg(c) == l - 1).collect();
                if inner != l - 1 || centers.len() != 1 {
                    return ZBuild::Infeasible;
                }
                let center = centers[0];
                let leaves = comp.into_iter().filter(|&c| c != center).collect();
                components.push(ZComponent::StarType { center, leaves });
            }
        }
    }
    ZBuild::Ready(ZGraph {
        nodes,
        edges,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levels::{decompose, Levels};
    use crate::{oracle_min_dim, Graph, OracleOutcome};

    fn ready<'g>(g: &'g Graph, xy: (usize, usize), r: usize) -> (SolverState<'g, u64>, LevelDecomposition) {
        let mut s = SolverState::new(g);
        s.apply_reduction_step(Edge::from(xy)).unwrap();
        match decompose(&s, Edge::from(xy), r).unwrap() {
            Levels::Ready(d) => (s, d),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn p5_endgame_matches_oracle() {
        let g = Graph::unit(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (s, d) = ready(&g, (0, 1), 2);
        let (m, w) = solve_n4_empty(&s, &d).unwrap();
        assert_eq!(m, vec![Edge::new(0, 1), Edge::new(3, 4)]);
        let OracleOutcome::Found(om, ow) = oracle_min_dim(&g, 26).unwrap() else {
            panic!()
        };
        assert_eq!((om.edges().to_vec(), ow), (m, w));
    }

    // 0-1 anchor, r=2, u1=3 with T1 = {5,6}, u2=4 with T2 = {7}
    fn two_ts(extra: &[(usize, usize)]) -> Graph {
        let mut e = vec![(0, 1), (1, 2), (2, 3), (2, 4), (3, 5), (3, 6), (4, 7)];
        e.extend_from_slice(extra);
        Graph::unit(8, e).unwrap()
    }

    #[test]
    fn extend_traces() {
        let g = two_ts(&[(5, 7)]);
        let (s, d) = ready(&g, (0, 1), 2);
        match extend_w_in_m(&s, &d, &[6]).unwrap() {
            ExtendResult::Partition {
                black,
                white,
                uncolored,
                s2_colored,
            } => {
                assert_eq!(black, vec![6, 7]);
                assert_eq!(white, vec![5]);
                assert!(uncolored.is_empty());
                assert_eq!(s2_colored, vec![3, 4]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(extend_w_in_m(&s, &d, &[5, 7]).unwrap(), ExtendResult::NoDimWithW);
        assert_eq!(extend_w_in_m(&s, &d, &[3]), Err(EndgameError::WNotInTOne(3)));
    }

    #[test]
    fn disjoint_picks_cheapest() {
        let g = two_ts(&[]).map_weights(|e, w| if e == Edge::new(3, 6) { Weight::Finite(0) } else { w });
        let (s, d) = ready(&g, (0, 1), 2);
        let (m, w) = solve_disjoint_ts(&s, &d).unwrap();
        assert!(m.contains(&Edge::new(3, 6)));
        assert!(m.contains(&Edge::new(4, 7)));
        assert_eq!(w, Weight::Finite(2));
    }

    #[test]
    fn cross_edge_sweep_matches_oracle() {
        let g = two_ts(&[(5, 7)]);
        let (s, d) = ready(&g, (0, 1), 2);
        let (m, w) = solve_n4_empty(&s, &d).unwrap();
        assert!(check_dim(&g, &m.iter().copied().collect()).unwrap().dim);
        let OracleOutcome::Found(_, ow) = oracle_min_dim(&g, 26).unwrap() else {
            panic!()
        };
        assert_eq!(w, ow);
    }

    #[test]
    fn s3_edge_is_infeasible() {
        // 8 sees u1=3 and u2=4, so it is in S3; 9 likewise; 8-9 adjacent
        let g = Graph::unit(
            10,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 6),
                (3, 8),
                (4, 8),
                (3, 9),
                (4, 9),
                (8, 9),
            ],
        )
        .unwrap();
        let (s, d) = ready(&g, (0, 1), 2);
        assert_eq!(d.s3, vec![8, 9]);
        assert!(s3_contacts(&s, &d).is_none());
    }

    #[test]
    fn z_graph_shapes() {
        // u_i = 3..=7, T_i = {8..=12}; 8-9 anchor; 10 sees 11 and 12
        let g = Graph::unit(
            13,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (2, 5),
                (2, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 10),
                (6, 11),
                (7, 12),
                (8, 9),
                (10, 11),
                (10, 12),
            ],
        )
        .unwrap();
        let (s, d) = ready(&g, (0, 1), 2);
        let ZBuild::Ready(z) = build_z_graph(&s, &d, 8, 9) else {
            panic!()
        };
        assert_eq!(
            z.components,
            vec![ZComponent::StarType {
                center: 2,
                leaves: vec![3, 4]
            }]
        );
    }
}
