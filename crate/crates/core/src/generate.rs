//! Seeded instance generators.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with the 64-bit seed of
//! the [`GenSpec`]; the same spec always yields the same graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, GraphError, Matching, VertexId};
use crate::patterns::find_induced_p8;
use crate::weight::Weight;
use crate::Graph;

/// Identifier of the generator algorithm, recorded next to corpora.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Rejections tolerated before giving up.
pub const REJECTION_BUDGET: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("no acceptable sample after {0} rejections")]
    RejectionBudgetExceeded(u32),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Diamond,
    Butterfly,
    Gem,
    Claw,
}

impl std::str::FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "star" => Family::Star,
            "diamond" => Family::Diamond,
            "butterfly" => Family::Butterfly,
            "gem" => Family::Gem,
            "claw" => Family::Claw,
            other => return Err(GenError::BadParameter(format!("unknown family {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    RandomP8Free,
    /// Planted d.i.m. with `k` edges.
    PlantedYes {
        k: usize,
    },
    Named(Family),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    /// Edge probability as numerator / denominator.
    pub p: (u32, u32),
    pub seed: u64,
    /// Inclusive range of finite weights.
    pub weights: (u64, u64),
    /// Reject disconnected samples (random kind only).
    pub connected: bool,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            n,
            p: (1, 3),
            seed,
            weights: (1, 1),
            connected: false,
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let (num, den) = self.p;
        if den == 0 || num > den {
            return Err(GenError::BadParameter(format!("probability {num}/{den}")));
        }
        if self.weights.0 > self.weights.1 {
            return Err(GenError::BadParameter(format!("weight range {:?}", self.weights)));
        }
        Ok(())
    }
}

fn weight(rng: &mut ChaCha8Rng, (lo, hi): (u64, u64)) -> Weight {
    Weight::Finite(rng.gen_range(lo..=hi))
}

/// Dispatch on the kind of `spec`; planted instances drop their matching.
pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    match spec.kind {
        GenKind::RandomP8Free => gen_random_p8_free(spec),
        GenKind::PlantedYes { k } => gen_planted_yes(spec, k).map(|(g, _)| g),
        GenKind::Named(f) => gen_named(f, spec.n),
    }
}

/// G(n, p) samples without an induced P8.
pub fn gen_random_p8_free(spec: &GenSpec) -> Result<Graph, GenError> {
    spec.check()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..=REJECTION_BUDGET {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_ratio(spec.p.0, spec.p.1) {
                    edges.push((u, v, weight(&mut rng, spec.weights)));
                }
            }
        }
        let g = Graph::build(n, edges)?;
        if spec.connected && !g.is_connected() {
            continue;
        }
        if find_induced_p8(&g).is_none() {
            return Ok(g);
        }
    }
    Err(GenError::RejectionBudgetExceeded(REJECTION_BUDGET))
}

/// A connected P8-free graph on `spec.n` vertices with a planted d.i.m. of
/// `k` edges.
///
/// The matched edges are a_i b_i. The independent side consists of
///  - a hub seeing every a_i,
///  - vertices seeing a prefix a_1..a_r of a random order (nested
///    neighborhoods, so the a-side carries no induced P5),
///  - pendants on some b_i,
///  - caps seeing both a_i and b_i.
///
/// Pendants and caps can only end an induced path, which keeps every
/// induced path below eight vertices.
pub fn gen_planted_yes(spec: &GenSpec, k: usize) -> Result<(Graph, Matching), GenError> {
    spec.check()?;
    let n = spec.n;
    if k == 0 || 2 * k > n {
        return Err(GenError::BadParameter(format!("k = {k} with n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..=REJECTION_BUDGET {
        let (g, planted) = planted_sample(&mut rng, spec, k)?;
        if g.is_connected() && find_induced_p8(&g).is_none() {
            return Ok((g, planted));
        }
    }
    Err(GenError::RejectionBudgetExceeded(REJECTION_BUDGET))
}

fn planted_sample(rng: &mut ChaCha8Rng, spec: &GenSpec, k: usize) -> Result<(Graph, Matching), GenError> {
    let n = spec.n;
    let mut label: Vec<VertexId> = (0..n).collect();
    label.shuffle(rng);
    let a = |i: usize| label[2 * i];
    let b = |i: usize| label[2 * i + 1];
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);

    let mut edges: Vec<(VertexId, VertexId, Weight)> = Vec::new();
    let mut planted = Vec::new();
    for i in 0..k {
        edges.push((a(i), b(i), weight(rng, spec.weights)));
        planted.push(Edge::new(a(i), b(i)));
    }
    for (idx, &z) in label[2 * k..].iter().enumerate() {
        let roll = if idx == 0 { 0 } else { rng.gen_range(0..4) };
        match roll {
            0 | 1 => {
                // the hub takes the full prefix
                let r = if idx == 0 {
                    k
                } else {
                    // short prefixes keep the graph sparse
                    (1 + rng.gen_range(0..k) / 4).min(k)
                };
                for &i in &order[..r] {
                    edges.push((z, a(i), weight(rng, spec.weights)));
                }
            }
            2 => {
                let i = rng.gen_range(0..k);
                edges.push((z, b(i), weight(rng, spec.weights)));
            }
            _ => {
                let i = rng.gen_range(0..k);
                edges.push((z, a(i), weight(rng, spec.weights)));
                edges.push((z, b(i), weight(rng, spec.weights)));
            }
        }
    }
    Ok((Graph::build(n, edges)?, planted.into_iter().collect()))
}

/// Standard small graphs with unit weights.
pub fn gen_named(family: Family, n: usize) -> Result<Graph, GenError> {
    let fixed = |size: usize, edges: &[(usize, usize)]| {
        if n != size {
            return Err(GenError::BadParameter(format!(
                "{family:?} has {size} vertices, got {n}"
            )));
        }
        Ok(Graph::unit(size, edges.iter().copied())?)
    };
    let at_least = |min: usize| {
        if n < min {
            Err(GenError::BadParameter(format!("{family:?} needs n >= {min}, got {n}")))
        } else {
            Ok(())
        }
    };
    match family {
        Family::Path => {
            at_least(1)?;
            Ok(Graph::unit(n, (1..n).map(|i| (i - 1, i)))?)
        }
        Family::Cycle => {
            at_least(3)?;
            Ok(Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n)))?)
        }
        Family::Complete => {
            at_least(1)?;
            Ok(Graph::unit(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))?)
        }
        Family::Star => {
            at_least(1)?;
            Ok(Graph::unit(n, (1..n).map(|i| (0, i)))?)
        }
        // mid-edge 1-2
        Family::Diamond => fixed(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        // shared vertex 0, peripheral edges 1-2 and 3-4
        Family::Butterfly => fixed(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
        // P4 1-2-3-4 plus apex 0
        Family::Gem => fixed(5, &[(1, 2), (2, 3), (3, 4), (0, 1), (0, 2), (0, 3), (0, 4)]),
        Family::Claw => fixed(4, &[(0, 1), (0, 2), (0, 3)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_dim;

    #[test]
    fn random_is_reproducible() {
        let mut spec = GenSpec::new(GenKind::RandomP8Free, 12, 1);
        spec.p = (3, 10);
        let g1 = gen_random_p8_free(&spec).unwrap();
        let g2 = gen_random_p8_free(&spec).unwrap();
        assert_eq!(g1, g2);
        assert!(find_induced_p8(&g1).is_none());
        spec.seed = 2;
        assert_ne!(g1, gen_random_p8_free(&spec).unwrap());
    }

    #[test]
    fn small_random_always_accepted() {
        let spec = GenSpec::new(GenKind::RandomP8Free, 5, 9);
        assert_eq!(gen_random_p8_free(&spec).unwrap().n(), 5);
    }

    #[test]
    fn planted_is_a_dim() {
        for seed in 0..20 {
            let mut spec = GenSpec::new(GenKind::PlantedYes { k: 4 }, 20, seed);
            spec.weights = (1, 9);
            let (g, m) = gen_planted_yes(&spec, 4).unwrap();
            assert!(g.is_connected());
            assert!(check_dim(&g, &m).unwrap().dim, "seed {seed}");
            assert!(find_induced_p8(&g).is_none());
        }
    }

    #[test]
    fn planted_k1_without_independent_side_is_k2() {
        let spec = GenSpec::new(GenKind::PlantedYes { k: 1 }, 2, 3);
        let (g, m) = gen_planted_yes(&spec, 1).unwrap();
        assert_eq!((g.n(), g.m(), m.len()), (2, 1, 1));
    }

    #[test]
    fn named_shapes() {
        assert_eq!(gen_named(Family::Path, 7).unwrap().m(), 6);
        assert_eq!(gen_named(Family::Cycle, 4).unwrap().m(), 4);
        assert_eq!(gen_named(Family::Butterfly, 5).unwrap().m(), 6);
        assert_eq!(gen_named(Family::Gem, 5).unwrap().m(), 7);
        assert!(gen_named(Family::Diamond, 5).is_err());
        assert!(gen_named(Family::Cycle, 2).is_err());
        assert_eq!("Claw".parse::<Family>().unwrap(), Family::Claw);
    }
}
