//! Pattern detection against exhaustive subset enumeration.

use dimp8::patterns::{butterfly_peripheral_edges, c4_edges, diamond_mid_edges, find_induced_path, find_k4};
use dimp8::{find_induced_p8, Edge, Graph};
use proptest::prelude::*;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn inner_edges(g: &Graph, s: &[usize]) -> Vec<Edge> {
    let mut out = Vec::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            if g.has_edge(a, b) {
                out.push(Edge::new(a, b));
            }
        }
    }
    out
}

fn degree_in(edges: &[Edge], v: usize) -> usize {
    edges.iter().filter(|e| e.contains(v)).count()
}

fn is_induced_path(g: &Graph, s: &[usize]) -> bool {
    let e = inner_edges(g, s);
    if e.len() != s.len() - 1 || s.iter().any(|&v| degree_in(&e, v) > 2) {
        return false;
    }
    let (sub, _) = g.induced_subgraph(s).unwrap();
    sub.is_connected()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (4..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::unit(n, edges).unwrap()
        })
}

fn sorted(mut v: Vec<Edge>) -> Vec<Edge> {
    v.sort_unstable();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn four_and_five_vertex_patterns(g in graph_strategy(8)) {
        let mut mids = Vec::new();
        let mut c4 = Vec::new();
        let mut k4 = false;
        for s in subsets(g.n(), 4) {
            let e = inner_edges(&g, &s);
            let degs: Vec<usize> = s.iter().map(|&v| degree_in(&e, v)).collect();
            match e.len() {
                6 => k4 = true,
                5 => {
                    let hubs: Vec<usize> = s.iter().zip(&degs).filter(|(_, &d)| d == 3).map(|(&v, _)| v).collect();
                    mids.push(Edge::new(hubs[0], hubs[1]));
                }
                4 if degs.iter().all(|&d| d == 2) => c4.extend(e),
                _ => {}
            }
        }
        let mut peripheral = Vec::new();
        for s in subsets(g.n(), 5) {
            let e = inner_edges(&g, &s);
            let degs: Vec<usize> = s.iter().map(|&v| degree_in(&e, v)).collect();
            if e.len() == 6 && degs.iter().filter(|&&d| d == 4).count() == 1 && degs.iter().filter(|&&d| d == 2).count() == 4 {
                let c = s[degs.iter().position(|&d| d == 4).unwrap()];
                peripheral.extend(e.into_iter().filter(|x| !x.contains(c)));
            }
        }
        prop_assert_eq!(sorted(diamond_mid_edges(&g)), sorted(mids));
        prop_assert_eq!(sorted(c4_edges(&g)), sorted(c4));
        prop_assert_eq!(sorted(butterfly_peripheral_edges(&g)), sorted(peripheral));
        prop_assert_eq!(find_k4(&g).is_some(), k4);
    }

    #[test]
    fn induced_paths_match_subsets(g in graph_strategy(10)) {
        for k in 3..=8usize {
            let brute = subsets(g.n(), k).into_iter().any(|s| is_induced_path(&g, &s));
            let found = find_induced_path(&g, k);
            prop_assert_eq!(found.is_some(), brute, "k = {}", k);
            if let Some(p) = found {
                let mut s = p.clone();
                s.sort_unstable();
                prop_assert!(is_induced_path(&g, &s));
                prop_assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
            }
        }
        let brute8 = subsets(g.n(), 8).into_iter().any(|s| is_induced_path(&g, &s));
        let w = find_induced_p8(&g);
        prop_assert_eq!(w.is_some(), brute8);
        if let Some(w) = w {
            prop_assert!(w.validates(&g));
        }
    }
}

#[test]
fn long_cycles_contain_p8() {
    for n in 3..=12 {
        let g = Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        assert_eq!(find_induced_p8(&g).is_some(), n >= 9, "C{n}");
    }
}
