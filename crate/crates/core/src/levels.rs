//! Distance levels around a matched edge `xy` and the early forcing rules
//! that depend only on them.

use std::collections::VecDeque;

use crate::graph::{Edge, VertexId};
use crate::state::{Infeasibility, SolverState, StateError};
use crate::weight::Scalar;

pub const UNREACHED: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LevelError {
    #[error("anchor edge {0:?} is not part of the accumulated matching")]
    EdgeNotAlive(Edge),
    #[error("vertex {r} does not form a P3 with {xy:?}")]
    BadWitness { xy: Edge, r: VertexId },
}

/// Distance classes N1..N5 of the residual graph around `xy`, with the
/// split of N2 into matched pairs (M2) and isolated vertices (S2), and the
/// split of N3 into private neighborhoods T_i of each u_i and the rest (S3).
#[derive(Debug, Clone)]
pub struct LevelDecomposition {
    pub xy: Edge,
    pub r: VertexId,
    /// Level of every base vertex; 0 for x and y, [`UNREACHED`] otherwise.
    pub level: Vec<u8>,
    /// `levels[i]` lists N_i in increasing order; index 0 holds x and y.
    pub levels: [Vec<VertexId>; 6],
    pub m2: Vec<Edge>,
    /// u_1..u_k in ascending vertex order.
    pub s2: Vec<VertexId>,
    /// `t[i]` is T_i, the N3 vertices whose only S2 neighbor is `s2[i]`.
    pub t: Vec<Vec<VertexId>>,
    /// Index i with v in T_i, for every v in T_one.
    pub t_index: Vec<Option<usize>>,
    pub s3: Vec<VertexId>,
    /// Alive vertices in other components of the residual graph.
    pub unreached: Vec<VertexId>,
}

/// Outcome of [`decompose`].
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Levels {
    Ready(LevelDecomposition),
    /// No d.i.m. contains `xy` on this branch.
    Infeasible(&'static str),
    /// A vertex at distance six or more: the input is not P8-free.
    NotP8Free(VertexId),
}

impl LevelDecomposition {
    pub fn n(&self, i: usize) -> &[VertexId] {
        &self.levels[i]
    }

    pub fn at(&self, v: VertexId) -> u8 {
        self.level[v]
    }

    pub fn in_level(&self, v: VertexId, i: u8) -> bool {
        self.level[v] == i
    }

    pub fn k(&self) -> usize {
        self.s2.len()
    }

    /// Neighbors of `v` in level `i`.
    pub fn nbrs_in<'a, W: Scalar>(
        &'a self,
        s: &'a SolverState<'_, W>,
        v: VertexId,
        i: u8,
    ) -> impl Iterator<Item = VertexId> + 'a {
        s.base().adj(v).iter().copied().filter(move |&w| self.level[w] == i)
    }

    pub fn is_t_one(&self, v: VertexId) -> bool {
        self.t_index[v].is_some()
    }
}

/// BFS from the (already matched) edge `xy` over the alive vertices.
///
/// `xy` must belong to the accumulated matching of `s`; its end points are
/// dead, but their edges to alive vertices define N1.
pub fn decompose<W: Scalar>(s: &SolverState<'_, W>, xy: Edge, r: VertexId) -> Result<Levels, LevelError> {
    let g = s.base();
    if !s.matching().contains(xy) {
        return Err(LevelError::EdgeNotAlive(xy));
    }
    let (x, y) = (xy.u(), xy.v());
    if r >= g.n() || xy.contains(r) || g.has_edge(r, x) == g.has_edge(r, y) || !s.is_alive(r) {
        return Err(LevelError::BadWitness { xy, r });
    }

    let n = g.n();
    let mut level = vec![UNREACHED; n];
    let mut levels: [Vec<VertexId>; 6] = Default::default();
    level[x] = 0;
    level[y] = 0;
    levels[0] = vec![x, y];
    let mut queue = VecDeque::from([x, y]);
    while let Some(v) = queue.pop_front() {
        let lv = level[v];
        for &w in g.adj(v) {
            if s.is_alive(w) && level[w] == UNREACHED {
                if lv >= 5 {
                    return Ok(Levels::NotP8Free(w));
                }
                level[w] = lv + 1;
                levels[(lv + 1) as usize].push(w);
                queue.push_back(w);
            }
        }
    }
    for l in levels.iter_mut() {
        l.sort_unstable();
    }

    for &a in &levels[1] {
        if g.adj(a).iter().any(|&b| level[b] == 1) {
            return Ok(Levels::Infeasible("N1 is not independent"));
        }
    }
    let mut m2 = Vec::new();
    let mut s2 = Vec::new();
    for &a in &levels[2] {
        let mut same = g.adj(a).iter().filter(|&&b| level[b] == 2);
        match (same.next(), same.next()) {
            (None, _) => s2.push(a),
            (Some(&b), None) => {
                if a < b {
                    m2.push(Edge::new(a, b));
                }
            }
            _ => return Ok(Levels::Infeasible("N2 vertex with two N2 neighbors")),
        }
    }

    let mut s2_pos = vec![usize::MAX; n];
    for (i, &u) in s2.iter().enumerate() {
        s2_pos[u] = i;
    }
    let mut t = vec![Vec::new(); s2.len()];
    let mut t_index = vec![None; n];
    let mut s3 = Vec::new();
    for &v in &levels[3] {
        let mut owners = g.adj(v).iter().filter(|&&u| level[u] == 2 && s2_pos[u] != usize::MAX);
        match (owners.next(), owners.next()) {
            (Some(&u), None) => {
                let i = s2_pos[u];
                t[i].push(v);
                t_index[v] = Some(i);
            }
            _ => s3.push(v),
        }
    }

    let unreached = s.alive_vertices().filter(|&v| level[v] == UNREACHED).collect();
    Ok(Levels::Ready(LevelDecomposition {
        xy,
        r,
        level,
        levels,
        m2,
        s2,
        t,
        t_index,
        s3,
        unreached,
    }))
}

/// Reduce `e` as an xy-forced edge. An infinite effective weight or an
/// induced-matching conflict makes the state infeasible.
pub fn force<W: Scalar>(s: &mut SolverState<'_, W>, e: Edge) -> Result<(), StateError> {
    if !s.is_feasible() {
        return Ok(());
    }
    if !s.edge_alive(e) {
        return Err(StateError::EdgeNotAlive(e));
    }
    if s.effective_weight(e).is_infinite() {
        s.mark_infeasible(Infeasibility::InfiniteForced(e));
        return Ok(());
    }
    s.apply_reduction_step(e)
}

/// Force several edges. An edge whose end point was consumed by an earlier
/// member makes the state infeasible. Returns whether anything was forced.
pub fn force_all<W: Scalar>(s: &mut SolverState<'_, W>, edges: &[Edge]) -> bool {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for e in sorted {
        if !s.is_feasible() {
            break;
        }
        if s.edge_alive(e) {
            force(s, e).expect("alive edge");
        } else {
            s.mark_infeasible(Infeasibility::NotInduced(e));
        }
    }
    !edges.is_empty()
}

/// Every edge inside N2 belongs to every d.i.m. containing `xy`.
pub fn force_m2<W: Scalar>(s: &mut SolverState<'_, W>, d: &LevelDecomposition) -> bool {
    force_all(s, &d.m2)
}

/// Edges bc of N4 with a common N3 neighbor a.
pub fn n3n4_triangle_edges<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Vec<Edge> {
    let g = s.base();
    let mut out = Vec::new();
    for &b in d.n(4) {
        for &c in g.adj(b) {
            if c > b && d.in_level(c, 4) && d.nbrs_in(s, b, 3).any(|a| g.has_edge(a, c)) {
                out.push(Edge::new(b, c));
            }
        }
    }
    out
}

pub fn force_n3n4_triangles<W: Scalar>(s: &mut SolverState<'_, W>, d: &LevelDecomposition) -> bool {
    let edges = n3n4_triangle_edges(s, d);
    force_all(s, &edges)
}

/// Edges u_i t with t in T_i seeing two vertices of some other T_j.
pub fn double_tj_contacts<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Vec<Edge> {
    let g = s.base();
    let mut out = Vec::new();
    let mut seen = vec![0usize; d.k()];
    let mut stamp = vec![usize::MAX; d.k()];
    for (i, ti) in d.t.iter().enumerate() {
        for &t in ti {
            let mut hit = false;
            for &w in g.adj(t) {
                if let Some(j) = d.t_index[w] {
                    if j == i {
                        continue;
                    }
                    if stamp[j] != t {
                        stamp[j] = t;
                        seen[j] = 0;
                    }
                    seen[j] += 1;
                    if seen[j] >= 2 {
                        hit = true;
                    }
                }
            }
            if hit {
                out.push(Edge::new(d.s2[i], t));
            }
        }
    }
    out
}

pub fn force_double_tj_contact<W: Scalar>(s: &mut SolverState<'_, W>, d: &LevelDecomposition) -> bool {
    let edges = double_tj_contacts(s, d);
    force_all(s, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Graph;

    fn anchored(g: &Graph, xy: (usize, usize)) -> SolverState<'_, u64> {
        let mut s = SolverState::new(g);
        s.apply_reduction_step(Edge::from(xy)).unwrap();
        s
    }

    fn ready(l: Levels) -> LevelDecomposition {
        match l {
            Levels::Ready(d) => d,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn p5_levels() {
        let g = Graph::unit(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let s = anchored(&g, (0, 1));
        let d = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert_eq!(d.n(1), &[2]);
        assert_eq!(d.n(2), &[3]);
        assert_eq!(d.n(3), &[4]);
        assert_eq!(d.s2, vec![3]);
        assert_eq!(d.t, vec![vec![4]]);
        assert!(d.m2.is_empty() && d.s3.is_empty());
    }

    #[test]
    fn star_levels() {
        // center 0, leaves 1,2,3; xy = (0,1)
        let g = Graph::unit(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = anchored(&g, (0, 1));
        let d = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert_eq!(d.n(1), &[2, 3]);
        assert!(d.n(2).is_empty());
    }

    #[test]
    fn adjacent_n1_is_infeasible() {
        // xy = 01, 2 and 3 both see 0 and each other
        let g = Graph::unit(4, [(0, 1), (0, 2), (0, 3), (2, 3)]).unwrap();
        let s = anchored(&g, (0, 1));
        assert!(matches!(
            decompose(&s, Edge::new(0, 1), 2).unwrap(),
            Levels::Infeasible(_)
        ));
    }

    #[test]
    fn far_vertex_flags_p8() {
        let g = Graph::unit(9, (0..8).map(|i| (i, i + 1))).unwrap();
        let s = anchored(&g, (0, 1));
        assert!(matches!(
            decompose(&s, Edge::new(0, 1), 2).unwrap(),
            Levels::NotP8Free(7)
        ));
    }

    #[test]
    fn bad_anchor_and_witness() {
        let g = Graph::unit(3, [(0, 1), (1, 2)]).unwrap();
        let s = SolverState::new(&g);
        assert!(decompose(&s, Edge::new(0, 1), 2).is_err());
        let s = anchored(&g, (0, 1));
        assert_eq!(
            decompose(&s, Edge::new(0, 1), 0).unwrap_err(),
            LevelError::BadWitness {
                xy: Edge::new(0, 1),
                r: 0
            }
        );
    }

    #[test]
    fn m2_edge_is_forced() {
        // y0 - x1 - r2 - {3,4} with 34 an edge in N2
        let g = Graph::unit(5, [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let mut s = anchored(&g, (0, 1));
        let d = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert_eq!(d.m2, vec![Edge::new(3, 4)]);
        assert!(force_m2(&mut s, &d));
        assert!(s.matching().contains(Edge::new(3, 4)));
    }

    #[test]
    fn m2_edges_at_distance_one_conflict() {
        // N2 edges 34 and 56 joined by edge 45
        let g = Graph::unit(
            7,
            [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4), (2, 5), (2, 6), (5, 6), (4, 5)],
        )
        .unwrap();
        let mut s = anchored(&g, (0, 1));
        match decompose(&s, Edge::new(0, 1), 2).unwrap() {
            Levels::Ready(d) => {
                force_m2(&mut s, &d);
                assert!(!s.is_feasible());
            }
            Levels::Infeasible(_) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn n3n4_triangle_forces_bc() {
        // 0-1 xy, 2 in N1, 3 in N2, 4 in N3, 5,6 in N4 with 4-5-6 a triangle
        let g = Graph::unit(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)]).unwrap();
        let mut s = anchored(&g, (0, 1));
        let d = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert_eq!(n3n4_triangle_edges(&s, &d), vec![Edge::new(5, 6)]);
        force_n3n4_triangles(&mut s, &d);
        assert!(s.matching().contains(Edge::new(5, 6)));
    }

    #[test]
    fn double_contact_forces_mate() {
        // x=1,y=0; r=2; u1=3,u2=4 in N2; t1=5 in T_1; a=6,b=7 in T_2, t1 sees a,b
        let g = Graph::unit(
            8,
            [(0, 1), (1, 2), (2, 3), (2, 4), (3, 5), (4, 6), (4, 7), (5, 6), (5, 7)],
        )
        .unwrap();
        let mut s = anchored(&g, (0, 1));
        let d = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert_eq!(d.s2, vec![3, 4]);
        assert_eq!(double_tj_contacts(&s, &d), vec![Edge::new(3, 5)]);
        force_double_tj_contact(&mut s, &d);
        assert!(s.matching().contains(Edge::new(3, 5)));
        let d2 = ready(decompose(&s, Edge::new(0, 1), 2).unwrap());
        assert!(double_tj_contacts(&s, &d2).is_empty());
    }
}
