//! Branching and forcing rules that empty the fourth distance level.
//!
//! Every stage either forces edges on the current state, splits it into a
//! few branches, or proves that no d.i.m. containing `xy` survives. The
//! driver re-derives the levels after every change.

use crate::endgame::s3_contacts;
use crate::graph::{Edge, VertexId};
use crate::levels::{
    decompose, double_tj_contacts, force_all, force_m2, n3n4_triangle_edges, LevelDecomposition, LevelError, Levels,
};
use crate::state::{Infeasibility, SolverState};
use crate::weight::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum N4Error {
    #[error("branch cap of {0} exceeded")]
    BranchCapExceeded(u64),
    #[error(transparent)]
    Level(#[from] LevelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Triangle([VertexId; 3]),
    EdgeComp(VertexId, VertexId),
    Singleton(VertexId),
}

/// A component of G[N4] with the N3 neighborhood of each of its vertices
/// (in the order of `kind`) and its N5 neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N4Component {
    pub kind: ComponentKind,
    pub n3: Vec<Vec<VertexId>>,
    pub n5: Vec<VertexId>,
}

impl N4Component {
    pub fn vertices(&self) -> Vec<VertexId> {
        match self.kind {
            ComponentKind::Triangle(t) => t.to_vec(),
            ComponentKind::EdgeComp(a, b) => vec![a, b],
            ComponentKind::Singleton(v) => vec![v],
        }
    }
}

/// Components of a level restricted to alive vertices, each sorted.
fn level_components<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition, lvl: u8) -> Vec<Vec<VertexId>> {
    let g = s.base();
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for &v in d.n(lvl as usize) {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            i += 1;
            for w in d.nbrs_in(s, a, lvl) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn induced_edge_count<W: Scalar>(s: &SolverState<'_, W>, vs: &[VertexId]) -> usize {
    let g = s.base();
    let mut c = 0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if g.has_edge(a, b) {
                c += 1;
            }
        }
    }
    c
}

/// Components of G[N4]; `None` when one of them is not a clique of size at
/// most three, which rules out every d.i.m. containing `xy`.
pub fn classify_n4<W: Scalar>(s: &SolverState<'_, W>, d: &LevelDecomposition) -> Option<Vec<N4Component>> {
    let mut out = Vec::new();
    for comp in level_components(s, d, 4) {
        let kind = match comp.len() {
            1 => ComponentKind::Singleton(comp[0]),
            2 => ComponentKind::EdgeComp(comp[0], comp[1]),
            3 if induced_edge_count(s, &comp) == 3 => ComponentKind::Triangle([comp[0], comp[1], comp[2]]),
            _ => return None,
        };
        let n3 = comp.iter().map(|&v| d.nbrs_in(s, v, 3).collect()).collect();
        let mut n5: Vec<VertexId> = comp.iter().flat_map(|&v| d.nbrs_in(s, v, 5)).collect();
        n5.sort_unstable();
        n5.dedup();
        out.push(N4Component { kind, n3, n5 });
    }
    Some(out)
}

/// Fork `s` once per edge set, forcing each set on its copy; infeasible
/// copies are dropped.
fn fork<'g, W: Scalar>(s: &SolverState<'g, W>, options: Vec<Vec<Edge>>) -> Vec<SolverState<'g, W>> {
    options
        .into_iter()
        .filter_map(|edges| {
            let mut c = s.clone();
            force_all(&mut c, &edges);
            c.is_feasible().then_some(c)
        })
        .collect()
}

/// Single T index shared by every vertex in `vs`, if there is one.
fn common_t(d: &LevelDecomposition, vs: impl IntoIterator<Item = VertexId>) -> Option<Option<usize>> {
    let mut j = None;
    for v in vs {
        let i = d.t_index[v]?;
        match j {
            None => j = Some(i),
            Some(k) if k != i => return None,
            _ => {}
        }
    }
    Some(j)
}

/// The cheaper of two edges by effective weight, ties to the smaller edge.
pub fn cheaper<W: Scalar>(s: &SolverState<'_, W>, e: Edge, f: Edge) -> Edge {
    let (we, wf) = (s.effective_weight(e), s.effective_weight(f));
    if we < wf || (we == wf && e < f) {
        e
    } else {
        f
    }
}

/// Triangles in N4: all their N3 neighbors lie in one T_j, and the choice
/// of M-edge in the first triangle determines the mate of u_j and the
/// M-edge of every other triangle.
pub fn branch_n4_triangles<'g, W: Scalar>(
    s: &SolverState<'g, W>,
    d: &LevelDecomposition,
    comps: &[N4Component],
) -> Vec<SolverState<'g, W>> {
    let g = s.base();
    let tris: Vec<&N4Component> = comps
        .iter()
        .filter(|c| matches!(c.kind, ComponentKind::Triangle(_)))
        .collect();
    if tris.iter().any(|c| !c.n5.is_empty()) {
        return Vec::new();
    }
    let Some(Some(j)) = common_t(d, tris.iter().flat_map(|c| c.n3.iter().flatten().copied())) else {
        return Vec::new();
    };
    let uj = d.s2[j];
    let ComponentKind::Triangle(first) = tris[0].kind else {
        unreachable!()
    };
    let mut options = Vec::new();
    'choice: for p in 0..3 {
        let [a1] = tris[0].n3[p][..] else { continue };
        let mut edges = vec![Edge::new(uj, a1), Edge::new(first[(p + 1) % 3], first[(p + 2) % 3])];
        for c in &tris[1..] {
            let ComponentKind::Triangle(tri) = c.kind else {
                unreachable!()
            };
            let seeing: Vec<usize> = (0..3).filter(|&q| g.has_edge(tri[q], a1)).collect();
            let [q] = seeing[..] else { continue 'choice };
            if c.n3[q] != [a1] {
                continue 'choice;
            }
            edges.push(Edge::new(tri[(q + 1) % 3], tri[(q + 2) % 3]));
        }
        options.push(edges);
    }
    fork(s, options)
}

/// Edge components of a triangle-free N4.
pub fn resolve_n4_edges<'g, W: Scalar>(
    s: &SolverState<'g, W>,
    d: &LevelDecomposition,
    comps: &[N4Component],
) -> Vec<SolverState<'g, W>> {
    let g = s.base();
    let mut forced = Vec::new();
    // (a, b, apex, A, B) for components with an N5 apex
    let mut apexed = Vec::new();
    for c in comps {
        let ComponentKind::EdgeComp(a, b) = c.kind else {
            continue;
        };
        if c.n5.is_empty() {
            forced.push(Edge::new(a, b));
            continue;
        }
        let [apex] = c.n5[..] else { return Vec::new() };
        if !(g.has_edge(apex, a) && g.has_edge(apex, b)) {
            return Vec::new();
        }
        if c.n3.iter().flatten().any(|&v| !d.is_t_one(v)) {
            forced.push(Edge::new(a, b));
            continue;
        }
        apexed.push((a, b, apex, &c.n3[0], &c.n3[1]));
    }
    if !forced.is_empty() {
        return fork(s, vec![forced]);
    }
    let Some(Some(j)) = common_t(d, apexed.iter().flat_map(|t| t.3.iter().chain(t.4).copied())) else {
        return Vec::new();
    };
    let uj = d.s2[j];
    let mut cands: Vec<VertexId> = apexed.iter().flat_map(|t| t.3.iter().chain(t.4).copied()).collect();
    cands.sort_unstable();
    cands.dedup();
    let mut options = Vec::new();
    'cand: for &t in &cands {
        let mut edges = vec![Edge::new(uj, t)];
        for &(a, b, apex, aa, bb) in &apexed {
            match (aa.contains(&t), bb.contains(&t)) {
                (false, false) => edges.push(Edge::new(a, b)),
                (true, false) => edges.push(Edge::new(b, apex)),
                (false, true) => edges.push(Edge::new(a, apex)),
                (true, true) => continue 'cand,
            }
        }
        options.push(edges);
    }
    options.push(apexed.iter().map(|t| Edge::new(t.0, t.1)).collect());
    fork(s, options)
}

/// An N4 vertex with an N5 edge `bc` forming a triangle.
struct ApexTriangle {
    bc: Edge,
    /// The cheaper of the two edges from `a` into the triangle.
    a_edge: Edge,
    /// N3 neighbors of `a`.
    dd: Vec<VertexId>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Components of N5 once N4 is independent.
pub fn resolve_n5<'g, W: Scalar>(s: &SolverState<'g, W>, d: &LevelDecomposition) -> Vec<SolverState<'g, W>> {
    let g = s.base();
    let comps5 = level_components(s, d, 5);
    // every N5 component is a vertex or an edge, joined to each N4 neighbor
    for h in &comps5 {
        if h.len() > 2 {
            return Vec::new();
        }
        for &v in h {
            for c in d.nbrs_in(s, v, 4) {
                if h.iter().any(|&w| !g.has_edge(c, w)) {
                    return Vec::new();
                }
            }
        }
    }
    let edge_comps: Vec<Edge> = comps5
        .iter()
        .filter(|h| h.len() == 2)
        .map(|h| Edge::new(h[0], h[1]))
        .collect();

    // an N4 vertex seeing an N5 edge and a further N5 vertex
    let mut forced = Vec::new();
    for &c in d.n(4) {
        let nb5: Vec<VertexId> = d.nbrs_in(s, c, 5).collect();
        if nb5.len() < 3 {
            continue;
        }
        if let Some(e) = edge_comps.iter().find(|e| nb5.contains(&e.u())) {
            forced.push(cheaper(s, Edge::new(e.u(), c), Edge::new(e.v(), c)));
        }
    }
    if !forced.is_empty() {
        return fork(s, vec![forced]);
    }

    let mut tris = Vec::new();
    for &e in &edge_comps {
        let apexes: Vec<VertexId> = d.nbrs_in(s, e.u(), 4).collect();
        let [c] = apexes[..] else { return Vec::new() };
        let dd: Vec<VertexId> = d.nbrs_in(s, c, 3).collect();
        let in_s3 = dd.iter().any(|&v| !d.is_t_one(v));
        let mut per_t: Vec<usize> = dd.iter().filter_map(|&v| d.t_index[v]).collect();
        per_t.sort_unstable();
        let doubled = per_t.windows(2).any(|w| w[0] == w[1]);
        let hc = cheaper(s, Edge::new(e.u(), c), Edge::new(e.v(), c));
        if in_s3 || doubled {
            forced.push(hc);
        } else {
            tris.push(ApexTriangle { bc: e, a_edge: hc, dd });
        }
    }
    if !forced.is_empty() {
        return fork(s, vec![forced]);
    }

    if !tris.is_empty() {
        let l = tris.len();
        let mut parent: Vec<usize> = (0..l).collect();
        for i in 0..l {
            for k in i + 1..l {
                let shared: Vec<VertexId> = tris[i].dd.iter().copied().filter(|v| tris[k].dd.contains(v)).collect();
                let linked = shared.iter().enumerate().any(|(p, &d1)| {
                    shared[p + 1..]
                        .iter()
                        .any(|&d2| d.t_index[d1] != d.t_index[d2] && !g.has_edge(d1, d2))
                });
                if linked {
                    let (ri, rk) = (find(&mut parent, i), find(&mut parent, k));
                    parent[ri.max(rk)] = ri.min(rk);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); l];
        for i in 0..l {
            let r = find(&mut parent, i);
            groups[r].push(i);
        }
        if let Some(grp) = groups.iter().find(|grp| grp.len() >= 2) {
            let all_a: Vec<Edge> = grp.iter().map(|&i| tris[i].a_edge).collect();
            let mut all_bc: Vec<Edge> = grp.iter().map(|&i| tris[i].bc).collect();
            for &i in grp {
                for &v in &tris[i].dd {
                    let t = d.t_index[v].expect("checked above");
                    all_bc.push(Edge::new(d.s2[t], v));
                }
            }
            return fork(s, vec![all_a, all_bc]);
        }

        let Some(Some(j)) = common_t(d, tris.iter().flat_map(|t| t.dd.iter().copied())) else {
            return Vec::new();
        };
        let uj = d.s2[j];
        let mut cands: Vec<VertexId> = tris.iter().flat_map(|t| t.dd.iter().copied()).collect();
        cands.sort_unstable();
        cands.dedup();
        let mut options: Vec<Vec<Edge>> = cands
            .iter()
            .map(|&t| {
                let mut edges = vec![Edge::new(uj, t)];
                edges.extend(tris.iter().map(|tr| if tr.dd.contains(&t) { tr.bc } else { tr.a_edge }));
                edges
            })
            .collect();
        options.push(tris.iter().map(|t| t.a_edge).collect());
        return fork(s, options);
    }

    // N5 is independent now; pendants hanging from a single N4 vertex
    let one_n4 = |h: VertexId| {
        let mut it = d.nbrs_in(s, h, 4);
        match (it.next(), it.next()) {
            (Some(v4), None) => Some(v4),
            _ => None,
        }
    };
    let mut anchors: Vec<VertexId> = d.n(5).iter().filter_map(|&h| one_n4(h)).collect();
    anchors.sort_unstable();
    anchors.dedup();
    if !anchors.is_empty() {
        for &v4 in &anchors {
            let best = d
                .nbrs_in(s, v4, 5)
                .filter(|&h| one_n4(h).is_some())
                .map(|h| Edge::new(v4, h))
                .reduce(|e, f| cheaper(s, e, f))
                .expect("anchor has a pendant");
            forced.push(best);
        }
        return fork(s, vec![forced]);
    }
    if !d.n(5).is_empty() {
        return Vec::new();
    }

    // N4 independent, N5 empty: every N3 neighbor of N4 is a mate
    for &w in d.n(4) {
        for v in d.nbrs_in(s, w, 3) {
            match d.t_index[v] {
                Some(i) => forced.push(Edge::new(d.s2[i], v)),
                None => return Vec::new(),
            }
        }
    }
    fork(s, vec![forced])
}

/// One reduction round for a state with N4 nonempty.
pub fn n4_step<'g, W: Scalar>(s: &SolverState<'g, W>, d: &LevelDecomposition) -> Vec<SolverState<'g, W>> {
    let Some(comps) = classify_n4(s, d) else {
        return Vec::new();
    };
    if comps.iter().any(|c| matches!(c.kind, ComponentKind::Triangle(_))) {
        branch_n4_triangles(s, d, &comps)
    } else if comps.iter().any(|c| matches!(c.kind, ComponentKind::EdgeComp(..))) {
        resolve_n4_edges(s, d, &comps)
    } else {
        resolve_n5(s, d)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DriverReport {
    /// States created by branching stages.
    pub branches: u64,
    pub not_p8_free: bool,
}

/// Apply the forcing and branching rules until every surviving state has
/// N4 empty and S3 isolated in N3, handing each such state to `emit`
/// together with its decomposition.
pub fn reduce_until_n4_empty<'g, W: Scalar>(
    s: SolverState<'g, W>,
    xy: Edge,
    r: VertexId,
    cap: u64,
    report: &mut DriverReport,
    mut emit: impl FnMut(SolverState<'g, W>, LevelDecomposition),
) -> Result<(), N4Error> {
    let mut stack = vec![s];
    while let Some(mut s) = stack.pop() {
        loop {
            if !s.is_feasible() {
                break;
            }
            let d = match decompose(&s, xy, r)? {
                Levels::Ready(d) => d,
                Levels::Infeasible(why) => {
                    s.mark_infeasible(Infeasibility::Structure(why));
                    break;
                }
                Levels::NotP8Free(_) => {
                    report.not_p8_free = true;
                    break;
                }
            };
            if force_m2(&mut s, &d) {
                continue;
            }
            let e = n3n4_triangle_edges(&s, &d);
            if force_all(&mut s, &e) {
                continue;
            }
            let e = double_tj_contacts(&s, &d);
            if force_all(&mut s, &e) {
                continue;
            }
            if d.n(4).is_empty() {
                match s3_contacts(&s, &d) {
                    None => break,
                    Some(e) if force_all(&mut s, &e) => continue,
                    Some(_) => {
                        emit(s, d);
                        break;
                    }
                }
            }
            let mut next = n4_step(&s, &d);
            if next.len() == 1 {
                s = next.pop().unwrap();
                continue;
            }
            report.branches += next.len() as u64;
            if report.branches > cap {
                return Err(N4Error::BranchCapExceeded(cap));
            }
            next.reverse();
            stack.extend(next);
            break;
        }
    }
    Ok(())
}
