mod common;

use common::*;
use graphtropy::automorphism::*;
use graphtropy::graph::default_ids;
use graphtropy::thermo::*;
use graphtropy::weighted::{IntervalWeight, WeightedDistinctionGraph};
use graphtropy::{DistinctionGraph, PartitionView};
use itertools::Itertools;
use proptest::prelude::*;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

proptest! {
    #[test]
    fn count_matches_brute_force(g in arb_graph(6)) {
        let autos = automorphisms(&g, SearchLimits::default()).unwrap();
        prop_assert_eq!(autos.len(), brute_force_automorphisms(&g));
    }

    #[test]
    fn group_is_closed(g in arb_graph(6)) {
        let autos = automorphisms(&g, SearchLimits::default()).unwrap();
        let set: std::collections::BTreeSet<_> = autos.iter().cloned().collect();
        for p in &autos {
            prop_assert!(set.contains(&inverse(p)));
            for q in &autos {
                prop_assert!(set.contains(&compose(p, q)));
            }
        }
    }

    #[test]
    fn labeled_count_matches_brute_force(g in arb_graph(6), seed in any::<u64>()) {
        let n = g.len();
        let labels: Vec<u8> = (0..n).map(|i| (seed >> (2 * i) & 1) as u8).collect();
        let brute = (0..n).permutations(n).filter(|p| {
            (0..n).all(|u| labels[p[u]] == labels[u] && (0..n).all(|v| g.is_linked(u, v) == g.is_linked(p[u], p[v])))
        }).count() as u64;
        prop_assert_eq!(count_labeled_automorphisms(&g, &labels, SearchLimits::default()).unwrap(), brute);
    }

    #[test]
    fn distinct_cell_sizes_give_product_of_factorials(sizes in proptest::sample::subsequence(vec![1usize, 2, 3, 4], 1..4)) {
        let p = PartitionView::from_sizes(&sizes).unwrap();
        let g = p.to_graph(&default_ids(p.node_count())).unwrap();
        let expect: u64 = sizes.iter().map(|&s| factorial(s)).product();
        prop_assert_eq!(automorphisms(&g, SearchLimits::default()).unwrap().len() as u64, expect);
        prop_assert_eq!(microstate_decomposition(&p).total(), expect as u128);
    }

    #[test]
    fn orbits_partition_the_nodes(g in arb_graph(6)) {
        let autos = automorphisms(&g, SearchLimits::default()).unwrap();
        let orb = orbits(g.len(), &autos);
        let mut all: Vec<usize> = orb.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.len()).collect::<Vec<_>>());
        for o in &orb {
            for p in &autos {
                prop_assert!(o.iter().all(|&u| o.contains(&p[u])));
            }
        }
    }
}

#[test]
fn max_likelihood_matches_exhaustive_oracle() {
    let g = DistinctionGraph::from_indices(default_ids(4), &[(0, 1), (2, 3)]).unwrap();
    for k in 4..=8 {
        let found = max_likelihood_weighting(&g, &[1, 2], &WeightingConstraint::sum(k), SearchLimits::default()).unwrap();
        let mut best = 0u64;
        let mut optima = Vec::new();
        for w in (0..4).map(|_| [1i64, 2]).multi_cartesian_product() {
            if w.iter().sum::<i64>() != k {
                continue;
            }
            let c = count_labeled_automorphisms(&g, &w, SearchLimits::default()).unwrap();
            if c > best {
                best = c;
                optima.clear();
            }
            if c == best {
                optima.push(w);
            }
        }
        optima.sort();
        assert_eq!(found.automorphisms, best, "K = {k}");
        let got: Vec<Vec<i64>> = found.optima.iter().map(|w| w.values().to_vec()).collect();
        assert_eq!(got, optima, "K = {k}");
    }
}

proptest! {
    #[test]
    fn gibbs_hits_the_target(sizes in proptest::collection::vec(1usize..5, 2..5), shift in -3i64..3) {
        let p = PartitionView::from_sizes(&sizes).unwrap();
        let values: Vec<i64> = (0..sizes.len() as i64).map(|i| i + shift).collect();
        let n = p.node_count() as i64;
        let (lo, hi) = (values[0], *values.last().unwrap());
        // strictly interior targets K/N
        for k in (lo * n + 1)..(hi * n) {
            let s = gibbs_reference(&p, &values, k).unwrap();
            prop_assert!((s.mean - k as f64 / n as f64).abs() < 1e-8, "{:?}", s);
            prop_assert!((s.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn automorphism_distance_is_zero_on_symmetric_weights(n in 2usize..6, p in 0.05f64..0.95) {
        let mut wg = WeightedDistinctionGraph::new(default_ids(n), None).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                wg.set_distinctness(u, v, IntervalWeight::point(p).unwrap()).unwrap();
            }
        }
        let d = weighted_automorphism_distance(&wg, PermutationSet::Full, SearchLimits::default()).unwrap();
        prop_assert!(d.abs() < 1e-12);
    }
}
