//! Exact minimum-weight dominating induced matching (d.i.m.) on P8-free graphs.
//!
//! A d.i.m. of a graph is a set of edges such that every edge of the graph
//! shares a vertex with exactly one member. [`solve_dim`] finds one of
//! minimum total weight by branching on a matched edge `xy` and reasoning
//! over the distance levels around it. [`oracle_min_dim`] is the exhaustive
//! reference used for cross-checking.
//!
//! Weights are generic over an unsigned integer [`Scalar`]; the `u64`
//! instantiations are exported as [`Graph`] and [`Wt`].

pub mod check;
pub mod endgame;
pub mod generate;
pub mod graph;
pub mod levels;
pub mod n4;
pub mod patterns;
pub mod solver;
pub mod state;
pub mod weight;

pub use check::{
    check_dim, enumerate_dims, is_dim, is_induced_matching, matching_weight, oracle_min_dim, DominationReport,
    OracleError, OracleOutcome, DEFAULT_ORACLE_LIMIT,
};
pub use graph::{Edge, EdgeId, GraphError, Matching, VertexId, WeightedGraph};
pub use patterns::{find_induced_p8, PatternKind, PatternWitness};
pub use solver::{solve_dim, solve_dim_checked, Diagnostics, SolveOptions, SolveOutcome, SolveStatus};
pub use weight::{ParseWeightError, Scalar, Weight};

/// Graph with `u64` weights.
pub type Graph = WeightedGraph<u64>;
/// Weight over `u64`.
pub type Wt = Weight<u64>;
