//! Validation of candidate matchings and the exhaustive reference oracle.

use crate::graph::{Edge, EdgeId, GraphError, Matching, VertexId, WeightedGraph};
use crate::weight::{Scalar, Weight};

/// Largest edge count the oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_LIMIT: usize = 26;

/// Per-edge domination counts for a candidate matching.
///
/// An edge of M counts itself, so a d.i.m. gives every edge a count of 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationReport {
    /// Indexed by edge id of the checked graph.
    pub counts: Vec<u32>,
    pub induced_matching: bool,
    pub dim: bool,
    /// First pair of M-edges at distance < 2, if any.
    pub conflict: Option<(Edge, Edge)>,
}

impl DominationReport {
    /// First edge (canonical order) whose count is not exactly 1.
    pub fn first_violation<W: Scalar>(&self, g: &WeightedGraph<W>) -> Option<(Edge, u32)> {
        self.counts
            .iter()
            .enumerate()
            .find(|(_, &c)| c != 1)
            .map(|(id, &c)| (g.edge(id), c))
    }
}

fn ids_of<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> Result<Vec<EdgeId>, GraphError> {
    m.iter().map(|e| g.id_of(e)).collect()
}

/// Pairwise distance of M-edges is at least 2.
pub fn is_induced_matching<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> Result<bool, GraphError> {
    ids_of(g, m)?;
    Ok(find_conflict(g, m).is_none())
}

fn find_conflict<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> Option<(Edge, Edge)> {
    let mut owner: Vec<Option<Edge>> = vec![None; g.n()];
    for e in m.iter() {
        for x in e.ends() {
            if let Some(f) = owner[x] {
                return Some((f, e));
            }
            owner[x] = Some(e);
        }
    }
    for e in m.iter() {
        for x in e.ends() {
            for &z in g.adj(x) {
                if let Some(f) = owner[z] {
                    if f != e {
                        return Some((f.min(e), f.max(e)));
                    }
                }
            }
        }
    }
    None
}

/// Full domination report; linear in the size of the graph.
pub fn check_dim<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> Result<DominationReport, GraphError> {
    ids_of(g, m)?;
    // number of M-edges containing each vertex
    let mut hits = vec![0u32; g.n()];
    for e in m.iter() {
        hits[e.u()] += 1;
        hits[e.v()] += 1;
    }
    let counts: Vec<u32> = g
        .edges()
        .iter()
        .map(|e| {
            let both = hits[e.u()] + hits[e.v()];
            // an M-edge is counted once at each endpoint
            if m.contains(*e) {
                both - 1
            } else {
                both
            }
        })
        .collect();
    let conflict = find_conflict(g, m);
    let dim = counts.iter().all(|&c| c == 1);
    Ok(DominationReport {
        counts,
        induced_matching: conflict.is_none(),
        dim,
        conflict,
    })
}

pub fn is_dim<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> bool {
    check_dim(g, m).map(|r| r.dim).unwrap_or(false)
}

/// Saturating sum of the member weights.
pub fn matching_weight<W: Scalar>(g: &WeightedGraph<W>, m: &Matching) -> Result<Weight<W>, GraphError> {
    Ok(ids_of(g, m)?.into_iter().map(|id| g.weight(id)).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("graph has {m} edges, oracle limit is {limit}")]
    TooLarge { m: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome<W = u64> {
    NoDim,
    Found(Matching, Weight<W>),
}

/// Backtracking over edges in canonical order; calls `visit` with the edge
/// ids of every dominating induced matching. Returning `false` stops.
pub fn enumerate_dims<W: Scalar>(
    g: &WeightedGraph<W>,
    limit: usize,
    mut visit: impl FnMut(&[EdgeId]) -> bool,
) -> Result<(), OracleError> {
    if g.m() > limit {
        return Err(OracleError::TooLarge { m: g.m(), limit });
    }
    let mut search = Search {
        g,
        in_vm: vec![false; g.n()],
        near: vec![0; g.n()],
        last_inc: (0..g.n()).map(|v| g.incident(v).iter().copied().max()).collect(),
        chosen: Vec::new(),
    };
    search.run(0, &mut visit);
    Ok(())
}

struct Search<'a, W> {
    g: &'a WeightedGraph<W>,
    in_vm: Vec<bool>,
    /// number of V(M) vertices in the open neighborhood
    near: Vec<u32>,
    last_inc: Vec<Option<EdgeId>>,
    chosen: Vec<EdgeId>,
}

impl<W: Scalar> Search<'_, W> {
    /// Could `c` still become a matched vertex after edge `i` is decided?
    fn can_match(&self, c: VertexId, i: EdgeId) -> bool {
        !self.in_vm[c] && self.near[c] == 0 && self.last_inc[c].is_some_and(|l| l > i)
    }

    fn doomed(&self, i: EdgeId) -> bool {
        self.g.edges().iter().any(|e| {
            let (a, b) = (e.u(), e.v());
            !self.in_vm[a] && !self.in_vm[b] && !self.can_match(a, i) && !self.can_match(b, i)
        })
    }

    fn toggle(&mut self, e: Edge, on: bool) {
        for x in e.ends() {
            self.in_vm[x] = on;
            for &w in self.g.adj(x) {
                if on {
                    self.near[w] += 1;
                } else {
                    self.near[w] -= 1;
                }
            }
        }
    }

    /// Returns false once the visitor asked to stop.
    fn run(&mut self, i: EdgeId, visit: &mut impl FnMut(&[EdgeId]) -> bool) -> bool {
        if i == self.g.m() {
            return visit(&self.chosen);
        }
        let e = self.g.edge(i);
        let (u, v) = (e.u(), e.v());
        if !self.in_vm[u] && !self.in_vm[v] && self.near[u] == 0 && self.near[v] == 0 {
            self.toggle(e, true);
            self.chosen.push(i);
            let go_on = self.doomed(i) || self.run(i + 1, visit);
            self.chosen.pop();
            self.toggle(e, false);
            if !go_on {
                return false;
            }
        }
        if self.doomed(i) {
            return true;
        }
        self.run(i + 1, visit)
    }
}

/// Exhaustive minimum-weight d.i.m.; ties go to the lexicographically
/// smallest canonical edge list.
pub fn oracle_min_dim<W: Scalar>(g: &WeightedGraph<W>, limit: usize) -> Result<OracleOutcome<W>, OracleError> {
    let mut best: Option<(Weight<W>, Vec<EdgeId>)> = None;
    enumerate_dims(g, limit, |ids| {
        let w: Weight<W> = ids.iter().map(|&id| g.weight(id)).sum();
        let better = match &best {
            None => true,
            Some((bw, bids)) => w < *bw || (w == *bw && ids < bids.as_slice()),
        };
        if better {
            best = Some((w, ids.to_vec()));
        }
        true
    })?;
    Ok(match best {
        None => OracleOutcome::NoDim,
        Some((w, ids)) => OracleOutcome::Found(ids.into_iter().map(|id| g.edge(id)).collect(), w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Graph;

    fn path(n: usize) -> Graph {
        Graph::unit(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn m(edges: &[(usize, usize)]) -> Matching {
        edges.iter().map(|&e| Edge::from(e)).collect()
    }

    #[test]
    fn induced_matching_cases() {
        assert!(is_induced_matching(&path(6), &m(&[(0, 1), (3, 4)])).unwrap());
        assert!(!is_induced_matching(&path(4), &m(&[(0, 1), (2, 3)])).unwrap());
        assert!(is_induced_matching(&path(4), &Matching::new()).unwrap());
        assert!(is_induced_matching(&path(4), &m(&[(0, 3)])).is_err());
    }

    #[test]
    fn check_dim_cases() {
        let tri = cycle(3);
        let r = check_dim(&tri, &m(&[(0, 1)])).unwrap();
        assert_eq!(r.counts, vec![1, 1, 1]);
        assert!(r.dim);

        let c4 = cycle(4);
        let r = check_dim(&c4, &m(&[(0, 1)])).unwrap();
        assert!(!r.dim);
        assert_eq!(r.counts[c4.id_of(Edge::new(2, 3)).unwrap()], 0);
        assert_eq!(r.first_violation(&c4), Some((Edge::new(2, 3), 0)));

        let p7 = path(7);
        let r = check_dim(&p7, &m(&[(1, 2), (4, 5)])).unwrap();
        assert_eq!(r.counts, vec![1; 6]);
        assert!(r.dim && r.induced_matching);
    }

    #[test]
    fn weights_sum() {
        let g = Graph::build(
            4,
            [
                (0, 1, Weight::Finite(3)),
                (2, 3, Weight::Finite(4)),
                (1, 2, Weight::Infinite),
            ],
        )
        .unwrap();
        assert_eq!(matching_weight(&g, &Matching::new()).unwrap(), Weight::Finite(0));
        assert_eq!(matching_weight(&g, &m(&[(0, 1), (2, 3)])).unwrap(), Weight::Finite(7));
        assert_eq!(matching_weight(&g, &m(&[(0, 1), (1, 2)])).unwrap(), Weight::Infinite);
    }

    #[test]
    fn oracle_small_cycles() {
        assert_eq!(oracle_min_dim(&cycle(4), 26).unwrap(), OracleOutcome::NoDim);
        assert_eq!(oracle_min_dim(&cycle(5), 26).unwrap(), OracleOutcome::NoDim);
        assert_eq!(oracle_min_dim(&cycle(7), 26).unwrap(), OracleOutcome::NoDim);
        assert_eq!(
            oracle_min_dim(&cycle(6), 26).unwrap(),
            OracleOutcome::Found(m(&[(0, 1), (3, 4)]), Weight::Finite(2))
        );
    }

    #[test]
    fn oracle_infinite_only() {
        let g = Graph::build(2, [(0, 1, Weight::Infinite)]).unwrap();
        assert_eq!(
            oracle_min_dim(&g, 26).unwrap(),
            OracleOutcome::Found(m(&[(0, 1)]), Weight::Infinite)
        );
    }

    #[test]
    fn oracle_limit() {
        let g = cycle(30);
        assert_eq!(
            oracle_min_dim(&g, DEFAULT_ORACLE_LIMIT),
            Err(OracleError::TooLarge { m: 30, limit: 26 })
        );
    }
}
