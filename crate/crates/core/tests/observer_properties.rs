mod common;

use common::*;
use graphtropy::graph::{as_partition, graphtropy, logical_entropy};
use graphtropy::observer::*;
use graphtropy::weighted::{IntervalWeight, WeightedDistinctionGraph};
use graphtropy::{DistinctionGraph, Rational};
use proptest::prelude::*;

fn arb_trace() -> impl Strategy<Value = Vec<DistinctionGraph>> {
    (1usize..=8).prop_flat_map(|n| proptest::collection::vec(arb_graph_n(n), 1..40))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn memory_never_loses_graphtropy(trace in arb_trace()) {
        let mut m = MemoryGraph::new(trace[0].clone());
        let mut last = m.graphtropy();
        for g in &trace[1..] {
            m.observe(g).unwrap();
            let h = m.graphtropy();
            prop_assert!(h >= last);
            last = h;
        }
        // dit set of the memory is the union of all observed dit sets
        let mut union = std::collections::BTreeSet::new();
        for g in &trace {
            union.extend(g.dit_set());
        }
        prop_assert_eq!(m.graph().dit_set(), union);
    }

    #[test]
    fn join_algebra(a in arb_graph_n(5), b in arb_graph_n(5), c in arb_graph_n(5)) {
        let j = |t: &[DistinctionGraph]| memory_join(t).unwrap().graph().clone();
        prop_assert_eq!(j(&[a.clone(), a.clone()]), a.clone());
        prop_assert_eq!(j(&[a.clone(), b.clone()]), j(&[b.clone(), a.clone()]));
        let ab = j(&[a.clone(), b.clone()]);
        let bc = j(&[b.clone(), c.clone()]);
        prop_assert_eq!(j(&[ab, c.clone()]), j(&[a, bc]));
    }

    #[test]
    fn second_law_runs_are_monotone(n in 1usize..8, p in 0.0f64..1.0, seed in any::<u64>()) {
        let t = run_second_law_sim(n, 200, p, seed).unwrap();
        prop_assert!(t.violations.is_empty());
        prop_assert!(t.graphtropy.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn mep_partitions_refine(n in 1usize..40, events in 0usize..15, seed in any::<u64>()) {
        let t = run_mep_sim(n, events, seed).unwrap();
        prop_assert_eq!(t.steps.len(), events + 1);
        for w in t.steps.windows(2) {
            prop_assert!(w[1].cells >= w[0].cells);
            prop_assert!(w[1].logical >= w[0].logical);
            prop_assert!(w[1].shannon_nats >= w[0].shannon_nats - 1e-12);
        }
        // logical entropy of the final partition is the graphtropy of its partition graph
        let g = DistinctionGraph::from_labels(graphtropy::graph::default_ids(n), t.partition.cell_of()).unwrap();
        let last = t.steps.last().unwrap();
        prop_assert_eq!(graphtropy(&g).unwrap(), last.logical);
        prop_assert_eq!(logical_entropy(&as_partition(&g).unwrap()), last.logical);
    }

    #[test]
    fn mep_refinement_is_nested(n in 2usize..30, events in 1usize..10, seed in any::<u64>()) {
        let short = run_mep_sim(n, events - 1, seed).unwrap();
        let long = run_mep_sim(n, events, seed).unwrap();
        let (a, b) = (short.partition.cell_of(), long.partition.cell_of());
        for x in 0..n {
            for y in 0..n {
                if b[x] == b[y] {
                    prop_assert_eq!(a[x], a[y]);
                }
            }
        }
    }

    #[test]
    fn alternating_updates_climb(start in 0.0f64..0.5, dd in 0.01f64..0.2, frac in 0.1f64..0.9) {
        let ds = dd * frac;
        let params = MemoryUpdateParams::new(dd, ds, 0.0).unwrap();
        let mut wg = WeightedDistinctionGraph::new(vec!["a".into(), "b".into()], None).unwrap();
        wg.set_distinctness(0, 1, IntervalWeight::point(start).unwrap()).unwrap();
        let mut mu = wg.mu(0, 1);
        for _ in 0..200 {
            wg = weighted_memory_update(&wg, 0, 1, Observation::Distinct, &params).unwrap();
            wg = weighted_memory_update(&wg, 0, 1, Observation::Same, &params).unwrap();
            let next = wg.mu(0, 1);
            let d = wg.distinctness(0, 1);
            prop_assert!(d.lo() >= 0.0 && d.hi() <= 1.0);
            if mu + dd <= 1.0 {
                prop_assert!(next > mu);
            }
            mu = next;
        }
    }
}

#[test]
fn forgetting_breaks_monotonicity_on_long_runs() {
    let with_violation = (0..20).filter(|&s| !run_forgetting_sim(6, 2000, 0.1, 0.05, s).unwrap().violations.is_empty()).count();
    assert_eq!(with_violation, 20);
    let t = run_forgetting_sim(4, 50, 0.2, 0.3, 1).unwrap();
    assert!(t.graphtropy.iter().all(|h| *h >= Rational::from_integer(0) && *h <= Rational::new(3, 4)));
}
