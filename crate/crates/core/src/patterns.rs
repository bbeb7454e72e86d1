//! Detection of the small induced subgraphs the solver consumes.

use fixedbitset::FixedBitSet;

use crate::graph::{Edge, GraphError, VertexId, WeightedGraph};
use crate::weight::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    K4,
    Diamond,
    Butterfly,
    C4,
    P8,
    P3,
}

impl PatternKind {
    /// Edges of the pattern over role positions.
    fn edges(self) -> Vec<(usize, usize)> {
        match self {
            PatternKind::K4 => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            // a,b,c,d with mid-edge bc
            PatternKind::Diamond => vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            // a,b,c,d,e with center c, peripheral ab and de
            PatternKind::Butterfly => vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
            PatternKind::C4 => vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            PatternKind::P8 => (0..7).map(|i| (i, i + 1)).collect(),
            PatternKind::P3 => vec![(0, 1), (1, 2)],
        }
    }

    fn order(self) -> usize {
        match self {
            PatternKind::K4 | PatternKind::Diamond | PatternKind::C4 => 4,
            PatternKind::Butterfly => 5,
            PatternKind::P8 => 8,
            PatternKind::P3 => 3,
        }
    }
}

/// Vertices of an induced pattern, listed in the pattern's role order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub kind: PatternKind,
    pub vertices: Vec<VertexId>,
}

impl PatternWitness {
    /// True iff the listed vertices induce exactly this pattern in `g`.
    pub fn validates<W: Scalar>(&self, g: &WeightedGraph<W>) -> bool {
        let k = self.kind.order();
        if self.vertices.len() != k || self.vertices.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut distinct = self.vertices.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != k {
            return false;
        }
        let want = self.kind.edges();
        for i in 0..k {
            for j in i + 1..k {
                let expected = want.contains(&(i, j)) || want.contains(&(j, i));
                if g.has_edge(self.vertices[i], self.vertices[j]) != expected {
                    return false;
                }
            }
        }
        true
    }
}

fn common_neighbors<W: Scalar>(g: &WeightedGraph<W>, a: VertexId, b: VertexId) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let (na, nb) = (g.adj(a), g.adj(b));
    let mut out = Vec::new();
    while i < na.len() && j < nb.len() {
        match na[i].cmp(&nb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(na[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Every edge `bc` that is the mid-edge of some induced diamond.
pub fn diamond_mid_edges<W: Scalar>(g: &WeightedGraph<W>) -> Vec<Edge> {
    let mut out = Vec::new();
    for &e in g.edges() {
        let common = common_neighbors(g, e.u(), e.v());
        let mid = common
            .iter()
            .enumerate()
            .any(|(i, &a)| common[i + 1..].iter().any(|&d| !g.has_edge(a, d)));
        if mid {
            out.push(e);
        }
    }
    out
}

/// Some induced diamond `a,b,c,d` (mid-edge `bc`), if any.
pub fn find_diamond<W: Scalar>(g: &WeightedGraph<W>) -> Option<PatternWitness> {
    for &e in g.edges() {
        let common = common_neighbors(g, e.u(), e.v());
        for (i, &a) in common.iter().enumerate() {
            if let Some(&d) = common[i + 1..].iter().find(|&&d| !g.has_edge(a, d)) {
                return Some(PatternWitness {
                    kind: PatternKind::Diamond,
                    vertices: vec![a, e.u(), e.v(), d],
                });
            }
        }
    }
    None
}

/// Triangles `c,a,b` through `c` as edges `ab` inside N(c).
fn edges_in_neighborhood<W: Scalar>(g: &WeightedGraph<W>, c: VertexId) -> Vec<Edge> {
    let nc = g.adj(c);
    let mut out = Vec::new();
    for (i, &a) in nc.iter().enumerate() {
        for &b in &nc[i + 1..] {
            if g.has_edge(a, b) {
                out.push(Edge::new(a, b));
            }
        }
    }
    out
}

fn butterfly_pairs<W: Scalar>(g: &WeightedGraph<W>, mut visit: impl FnMut(VertexId, Edge, Edge) -> bool) {
    for c in 0..g.n() {
        let tri = edges_in_neighborhood(g, c);
        for (i, p) in tri.iter().enumerate() {
            for q in &tri[i + 1..] {
                if p.intersects(q) {
                    continue;
                }
                let joined = p.ends().iter().any(|&s| q.ends().iter().any(|&t| g.has_edge(s, t)));
                if !joined && !visit(c, *p, *q) {
                    return;
                }
            }
        }
    }
}

/// Both peripheral edges of every induced butterfly.
pub fn butterfly_peripheral_edges<W: Scalar>(g: &WeightedGraph<W>) -> Vec<Edge> {
    let mut out = Vec::new();
    butterfly_pairs(g, |_, p, q| {
        out.push(p);
        out.push(q);
        true
    });
    out.sort_unstable();
    out.dedup();
    out
}

pub fn find_butterfly<W: Scalar>(g: &WeightedGraph<W>) -> Option<PatternWitness> {
    let mut found = None;
    butterfly_pairs(g, |c, p, q| {
        found = Some(PatternWitness {
            kind: PatternKind::Butterfly,
            vertices: vec![p.u(), p.v(), c, q.u(), q.v()],
        });
        false
    });
    found
}

/// Every edge lying on at least one induced C4.
pub fn c4_edges<W: Scalar>(g: &WeightedGraph<W>) -> Vec<Edge> {
    g.edges()
        .iter()
        .copied()
        .filter(|&e| c4_through(g, e).is_some())
        .collect()
}

/// An induced C4 `u,v,b,a` containing the edge `uv`.
fn c4_through<W: Scalar>(g: &WeightedGraph<W>, e: Edge) -> Option<[VertexId; 4]> {
    let (u, v) = (e.u(), e.v());
    for &a in g.adj(u) {
        if a == v || g.has_edge(a, v) {
            continue;
        }
        for &b in g.adj(a) {
            if b != u && b != v && g.has_edge(b, v) && !g.has_edge(b, u) {
                return Some([u, v, b, a]);
            }
        }
    }
    None
}

pub fn find_c4<W: Scalar>(g: &WeightedGraph<W>) -> Option<PatternWitness> {
    g.edges().iter().find_map(|&e| {
        c4_through(g, e).map(|vs| PatternWitness {
            kind: PatternKind::C4,
            vertices: vs.to_vec(),
        })
    })
}

pub fn find_k4<W: Scalar>(g: &WeightedGraph<W>) -> Option<PatternWitness> {
    for &e in g.edges() {
        let common = common_neighbors(g, e.u(), e.v());
        for (i, &a) in common.iter().enumerate() {
            if let Some(&b) = common[i + 1..].iter().find(|&&b| g.has_edge(a, b)) {
                return Some(PatternWitness {
                    kind: PatternKind::K4,
                    vertices: vec![e.u(), e.v(), a, b],
                });
            }
        }
    }
    None
}

/// Some induced path on eight vertices, if one exists.
///
/// Depth-first growth of chordless paths; a vertex may extend the path
/// only if it sees the last vertex and misses all earlier ones.
pub fn find_induced_p8<W: Scalar>(g: &WeightedGraph<W>) -> Option<PatternWitness> {
    find_induced_path(g, 8).map(|vertices| PatternWitness {
        kind: PatternKind::P8,
        vertices,
    })
}

/// Some induced path on `k` vertices.
pub fn find_induced_path<W: Scalar>(g: &WeightedGraph<W>, k: usize) -> Option<Vec<VertexId>> {
    if k == 0 || g.n() < k {
        return None;
    }
    let rows = g.adjacency_bitsets();
    let n = g.n();
    let mut path = Vec::with_capacity(k);
    // blocked[d]: vertices that may not be the (d+1)-th path vertex
    let mut blocked: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); k + 1];

    fn grow(rows: &[FixedBitSet], k: usize, path: &mut Vec<VertexId>, blocked: &mut Vec<FixedBitSet>) -> bool {
        if path.len() == k {
            return true;
        }
        let depth = path.len();
        let last = *path.last().expect("path is seeded");
        for w in rows[last].ones() {
            if blocked[depth].contains(w) {
                continue;
            }
            // next level forbids N[last] on top of the current block
            let mut next = blocked[depth].clone();
            next.union_with(&rows[last]);
            next.insert(last);
            next.insert(w);
            blocked[depth + 1] = next;
            path.push(w);
            if grow(rows, k, path, blocked) {
                return true;
            }
            path.pop();
        }
        false
    }

    for s in 0..n {
        if k == 1 {
            return Some(vec![s]);
        }
        path.clear();
        path.push(s);
        let mut b = FixedBitSet::with_capacity(n);
        b.insert(s);
        blocked[1] = b;
        if grow(&rows, k, &mut path, &mut blocked) {
            return Some(path);
        }
    }
    None
}

/// A vertex `r` seeing exactly one endpoint of `xy`, smallest id first.
pub fn p3_witness<W: Scalar>(g: &WeightedGraph<W>, xy: Edge) -> Result<Option<VertexId>, GraphError> {
    g.id_of(xy)?;
    let (x, y) = (xy.u(), xy.v());
    let mut best: Option<VertexId> = None;
    for (a, b) in [(x, y), (y, x)] {
        if let Some(&r) = g.adj(a).iter().find(|&&r| r != b && !g.has_edge(r, b)) {
            best = Some(best.map_or(r, |c| c.min(r)));
        }
    }
    Ok(best)
}

/// The P3 witness with role order `r, near, far`.
pub fn p3_pattern<W: Scalar>(g: &WeightedGraph<W>, xy: Edge, r: VertexId) -> PatternWitness {
    let (near, far) = if g.has_edge(r, xy.u()) {
        (xy.u(), xy.v())
    } else {
        (xy.v(), xy.u())
    };
    PatternWitness {
        kind: PatternKind::P3,
        vertices: vec![r, near, far],
    }
}
