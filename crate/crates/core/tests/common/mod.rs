#![allow(dead_code)]

use graphtropy::graph::default_ids;
use graphtropy::DistinctionGraph;
use proptest::prelude::*;

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn graph_from_mask(n: usize, mask: &[bool]) -> DistinctionGraph {
    let links: Vec<_> = pairs(n).into_iter().zip(mask).filter(|(_, &b)| b).map(|(p, _)| p).collect();
    DistinctionGraph::from_indices(default_ids(n), &links).unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = DistinctionGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |m| graph_from_mask(n, &m))
    })
}

pub fn arb_graph_n(n: usize) -> impl Strategy<Value = DistinctionGraph> {
    proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |m| graph_from_mask(n, &m))
}

/// Every set partition of `0..n` as a cell label per element (restricted
/// growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            go(i + 1, n, max.max(c), cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    go(1, n, 0, &mut cur, &mut out);
    out
}

/// Automorphism count by filtering all `n!` permutations.
pub fn brute_force_automorphisms(g: &DistinctionGraph) -> usize {
    use itertools::Itertools;
    let n = g.len();
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|u| (0..n).all(|v| g.is_linked(u, v) == g.is_linked(p[u], p[v]))))
        .count()
}
