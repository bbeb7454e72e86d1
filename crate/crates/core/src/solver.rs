//! Top-level search: seed forced edges, split into components, then sweep
//! over the first matched edge `xy` of each component.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::check::{check_dim, matching_weight};
use crate::endgame::solve_n4_empty;
use crate::graph::{Edge, Matching, VertexId, WeightedGraph};
use crate::n4::{reduce_until_n4_empty, DriverReport, N4Error};
use crate::patterns::{find_induced_p8, find_k4, p3_witness};
use crate::state::{seed_forced_edges, Seeded, SolverState};
use crate::weight::{Scalar, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Branches allowed per `xy` attempt; defaults to 10·n³ of the component.
    pub branch_cap: Option<u64>,
    /// Worker threads for the `xy` sweep. 1 runs sequentially, 0 uses the
    /// global rayon pool.
    pub threads: usize,
    /// Record wall time; when off, `millis` stays 0 so output is reproducible.
    pub record_timing: bool,
    /// Look for an induced P8 first and flag the result as incomplete if
    /// one exists.
    pub check_p8_free: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            branch_cap: None,
            threads: 1,
            record_timing: true,
            check_p8_free: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub branches: u64,
    pub xy_tried: u64,
    pub millis: u64,
    /// Set when the search hit the branch cap or saw a vertex at distance
    /// six or more; a negative answer is then not certified.
    pub incomplete: bool,
    pub p8_witness: Option<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus<W = u64> {
    DimFound(Matching, Weight<W>),
    NoDim,
    /// A d.i.m. exists but all of them use an infinite edge.
    NoFiniteDim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome<W = u64> {
    pub status: SolveStatus<W>,
    pub diagnostics: Diagnostics,
}

type Found<W> = (Matching, Weight<W>);
type Key<W> = (usize, Vec<(Edge, Weight<W>)>);
type Memo<W> = HashMap<Key<W>, (Option<Found<W>>, Counts)>;

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    branches: u64,
    xy_tried: u64,
    incomplete: bool,
}

impl Counts {
    fn add(&mut self, o: Counts) {
        self.branches += o.branches;
        self.xy_tried += o.xy_tried;
        self.incomplete |= o.incomplete;
    }
}

struct Ctx<W> {
    cap: Option<u64>,
    parallel: bool,
    // keyed by graph content; hits replay the stored counts so totals do
    // not depend on evaluation order
    cache: Mutex<Memo<W>>,
}

fn better<W: Scalar>(a: &Found<W>, b: &Found<W>) -> bool {
    a.1 < b.1 || (a.1 == b.1 && a.0.edges() < b.0.edges())
}

fn keep_best<W: Scalar>(best: &mut Option<Found<W>>, cand: Found<W>) {
    if best.as_ref().is_none_or(|b| better(&cand, b)) {
        *best = Some(cand);
    }
}

/// Minimum finite d.i.m. of `g`, memoized.
fn solve_finite<W: Scalar>(g: &WeightedGraph<W>, ctx: &Ctx<W>, c: &mut Counts) -> Option<Found<W>> {
    if g.m() == 0 {
        return Some((Matching::new(), Weight::zero()));
    }
    let key: Key<W> = (g.n(), g.weighted_edges().collect());
    if let Some((r, cc)) = ctx.cache.lock().unwrap().get(&key).cloned() {
        c.add(cc);
        return r;
    }
    let mut local = Counts::default();
    let r = solve_uncached(g, ctx, &mut local);
    ctx.cache.lock().unwrap().insert(key, (r.clone(), local));
    c.add(local);
    r
}

fn solve_uncached<W: Scalar>(g: &WeightedGraph<W>, ctx: &Ctx<W>, c: &mut Counts) -> Option<Found<W>> {
    if find_k4(g).is_some() {
        return None;
    }
    let mut s = match seed_forced_edges(g) {
        Seeded::NoDim => return None,
        Seeded::Done(m, w) => return w.is_finite().then_some((m, w)),
        Seeded::State(s) => s,
    };
    s.mark_c4_edges_infinite().ok()?;
    let (res, back) = s.residual_graph().ok()?;
    let mut edges = s.matching().edges().to_vec();
    let mut w = s.acc_weight();
    for comp in res.connected_components() {
        if comp.len() < 2 {
            continue;
        }
        let (sub, _) = res.induced_subgraph(&comp).expect("component vertices exist");
        let (m, cw) = solve_component(&sub, ctx, c)?;
        edges.extend(m.iter().map(|e| Edge::new(back[comp[e.u()]], back[comp[e.v()]])));
        w = w + cw;
    }
    w.is_finite().then(|| (edges.into_iter().collect(), w))
}

/// Connected, seeded and C4-marked graph.
fn solve_component<W: Scalar>(g: &WeightedGraph<W>, ctx: &Ctx<W>, c: &mut Counts) -> Option<Found<W>> {
    let m = g.m();
    // a single edge meeting every other edge excludes larger solutions
    let singles: Vec<(Edge, Weight<W>)> = g
        .weighted_edges()
        .filter(|(e, _)| g.degree(e.u()) + g.degree(e.v()) == m + 1)
        .collect();
    if !singles.is_empty() {
        return singles
            .into_iter()
            .filter(|(_, w)| w.is_finite())
            .min_by_key(|&(e, w)| (w, e))
            .map(|(e, w)| (std::iter::once(e).collect(), w));
    }

    let cands: Vec<(Edge, VertexId)> = g
        .weighted_edges()
        .filter(|(_, w)| w.is_finite())
        .filter_map(|(e, _)| p3_witness(g, e).ok().flatten().map(|r| (e, r)))
        .collect();
    let n = g.n() as u64;
    let cap = ctx.cap.unwrap_or(10 * n * n * n);
    let results: Vec<(Option<Found<W>>, Counts)> = if ctx.parallel {
        cands
            .par_iter()
            .map(|&(xy, r)| dim_with_xy(g, xy, r, cap, ctx))
            .collect()
    } else {
        cands.iter().map(|&(xy, r)| dim_with_xy(g, xy, r, cap, ctx)).collect()
    };
    let mut best = None;
    for (r, cc) in results {
        c.add(cc);
        if let Some(f) = r {
            keep_best(&mut best, f);
        }
    }
    best
}

/// Cheapest finite d.i.m. of `g` containing `xy`, where `r` is a vertex
/// seeing exactly one end of `xy`. Returns the counts spent as well.
fn dim_with_xy<W: Scalar>(
    g: &WeightedGraph<W>,
    xy: Edge,
    r: VertexId,
    cap: u64,
    ctx: &Ctx<W>,
) -> (Option<Found<W>>, Counts) {
    let mut c = Counts {
        xy_tried: 1,
        ..Counts::default()
    };
    let mut s = SolverState::new(g);
    if s.effective_weight(xy).is_infinite() || s.apply_reduction_step(xy).is_err() || !s.is_feasible() {
        return (None, c);
    }
    let mut best = None;
    let mut report = DriverReport::default();
    let outcome = reduce_until_n4_empty(s, xy, r, cap, &mut report, |st, d| {
        let mut extra = Matching::new();
        let mut extra_w = Weight::zero();
        if !d.unreached.is_empty() {
            let (sub, back) = st.restricted(&d.unreached);
            match solve_finite(&sub, ctx, &mut c) {
                Some((m, w)) => {
                    extra = m.map_vertices(|v| back[v]);
                    extra_w = w;
                }
                None => return,
            }
        }
        let Some((edges, w)) = solve_n4_empty(&st, &d) else {
            return;
        };
        let total = w + extra_w;
        let m: Matching = edges.into_iter().chain(extra.iter()).collect();
        if total.is_finite() && check_dim(g, &m).is_ok_and(|rep| rep.dim) {
            keep_best(&mut best, (m, total));
        }
    });
    c.branches += report.branches;
    if report.not_p8_free || matches!(outcome, Err(N4Error::BranchCapExceeded(_))) {
        c.incomplete = true;
    }
    (best, c)
}

fn run<W: Scalar>(g: &WeightedGraph<W>, opts: &SolveOptions, parallel: bool) -> (SolveStatus<W>, Counts) {
    let ctx = Ctx {
        cap: opts.branch_cap,
        parallel,
        cache: Mutex::new(HashMap::new()),
    };
    let mut c = Counts::default();
    let status = match solve_finite(g, &ctx, &mut c) {
        Some((m, w)) => {
            let sound = check_dim(g, &m).is_ok_and(|r| r.dim) && matching_weight(g, &m).ok() == Some(w);
            debug_assert!(sound, "solver produced an invalid matching");
            if sound && w.is_finite() {
                SolveStatus::DimFound(m, w)
            } else {
                c.incomplete = true;
                SolveStatus::NoDim
            }
        }
        None if g.weights().iter().any(|w| w.is_infinite()) => {
            let relaxed = g.map_weights(|_, w| if w.is_infinite() { Weight::Finite(W::one()) } else { w });
            if solve_finite(&relaxed, &ctx, &mut c).is_some() {
                SolveStatus::NoFiniteDim
            } else {
                SolveStatus::NoDim
            }
        }
        None => SolveStatus::NoDim,
    };
    (status, c)
}

/// Minimum finite-weight d.i.m. of `g`.
///
/// A returned matching is always a verified d.i.m. of `g`. Negative
/// answers are exact on P8-free inputs unless `incomplete` is set.
pub fn solve_dim<W: Scalar>(g: &WeightedGraph<W>, opts: &SolveOptions) -> SolveOutcome<W> {
    let start = Instant::now();
    let p8_witness = if opts.check_p8_free {
        find_induced_p8(g).map(|w| w.vertices)
    } else {
        None
    };
    let (status, c) = match opts.threads {
        1 => run(g, opts, false),
        0 => run(g, opts, true),
        t => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(g, opts, true)),
            Err(_) => run(g, opts, false),
        },
    };
    let millis = if opts.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    SolveOutcome {
        status,
        diagnostics: Diagnostics {
            branches: c.branches,
            xy_tried: c.xy_tried,
            millis,
            incomplete: c.incomplete || p8_witness.is_some(),
            p8_witness,
        },
    }
}

/// [`solve_dim`] with the induced-P8 pre-check switched on.
pub fn solve_dim_checked<W: Scalar>(g: &WeightedGraph<W>, opts: &SolveOptions) -> SolveOutcome<W> {
    let opts = SolveOptions {
        check_p8_free: true,
        ..opts.clone()
    };
    solve_dim(g, &opts)
}
