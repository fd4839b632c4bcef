mod common;

use common::*;
use graphtropy::format::*;
use graphtropy::graph::default_ids;
use graphtropy::weighted::{IntervalWeight, WeightedDistinctionGraph};
use proptest::prelude::*;

proptest! {
    #[test]
    fn plain_graphs_round_trip(g in arb_graph(8)) {
        let text = serde_json::to_string(&graph_file(&g)).unwrap();
        prop_assert_eq!(parse_plain_graph(&text).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&text).unwrap(), AnyGraph::Plain(g));
    }

    #[test]
    fn weighted_graphs_round_trip(n in 2usize..6, entries in proptest::collection::vec((0usize..6, 0usize..6, 0.0f64..1.0, 0.0f64..1.0), 0..10)) {
        let mut wg = WeightedDistinctionGraph::new(default_ids(n), Some((0..n as i64).collect())).unwrap();
        for (u, v, a, b) in entries {
            let (u, v) = (u % n, v % n);
            if u != v {
                wg.set_distinctness(u, v, IntervalWeight::new(a.min(b), a.max(b)).unwrap()).unwrap();
            }
        }
        let text = serde_json::to_string(&weighted_file(&wg)).unwrap();
        prop_assert_eq!(parse_weighted_graph(&text).unwrap(), wg);
    }

    #[test]
    fn ddgs_round_trip(rules in 1usize..4, lag in 1usize..4, seed in any::<u64>()) {
        let p = graphtropy::ddg::generate_planted(rules, lag, 3, seed).unwrap();
        let text = serde_json::to_string(&ddg_file(&p.ddg)).unwrap();
        prop_assert_eq!(parse_ddg(&text).unwrap(), p.ddg);
    }

    #[test]
    fn arbitrary_text_never_panics(s in ".{0,200}") {
        let _ = parse_graph(&s);
        let _ = parse_distribution(&s);
        let _ = parse_density_matrix(&s);
        let _ = parse_actions(&s);
        let _ = parse_trace(&s);
        let _ = parse_stimuli(&s);
        let _ = parse_quantum_links(&s);
    }
}
