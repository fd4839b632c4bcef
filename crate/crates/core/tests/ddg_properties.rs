use graphtropy::ddg::*;
use graphtropy::quantum::random_unitary;
use graphtropy::rng::seeded;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn chain_ddg(n_links: usize, alphas: &[f64], seed: u64) -> Ddg {
    let mut rng = seeded(seed);
    let nodes: Vec<String> = (0..=n_links).map(|i| format!("n{i}")).collect();
    let links: Vec<DLink> = (0..n_links).map(|i| DLink::new(i, i + 1, rng.random_range(0.0..=1.0)).unwrap()).collect();
    let rules = alphas
        .iter()
        .enumerate()
        .map(|(i, &a)| CausalRule {
            antecedent: Trigger { target: Target::Link(i % n_links), direction: if i % 2 == 0 { Direction::More } else { Direction::Less } },
            consequent: Trigger { target: Target::Link((i + 1) % n_links), direction: if i % 3 == 0 { Direction::Less } else { Direction::More } },
            multiplier: a,
            lag: 1 + i % 3,
            confidence: 1.0,
        })
        .collect();
    Ddg::new(nodes, None, links, rules).unwrap()
}

fn stimuli(n_links: usize, steps: usize, seed: u64) -> Vec<Vec<(usize, f64)>> {
    let mut rng = seeded(seed);
    (0..steps)
        .map(|_| {
            let mut step = Vec::new();
            for l in 0..n_links {
                if rng.random_bool(0.4) {
                    step.push((l, rng.random_range(-0.5..0.5)));
                }
            }
            step
        })
        .collect()
}

proptest! {
    #[test]
    fn zero_multipliers_only_follow_stimuli(n in 2usize..6, k in 1usize..6, seed in any::<u64>()) {
        let g = chain_ddg(n, &vec![0.0; k], seed);
        let mut cur = g.clone();
        for _ in 0..10 {
            cur = cur.step(1.0).unwrap();
        }
        prop_assert_eq!(cur.distinctness(), g.distinctness());
        // stimuli alone: one step then no further movement
        let s = stimuli(n, 1, seed);
        let once = g.step_with(1.0, &s[0]).unwrap();
        prop_assert_eq!(once.step(1.0).unwrap().distinctness(), once.distinctness());
    }

    #[test]
    fn values_stay_clamped_and_runs_are_deterministic(
        n in 2usize..6,
        alphas in proptest::collection::vec(0.0f64..5.0, 1..6),
        seed in any::<u64>(),
    ) {
        let g = chain_ddg(n, &alphas, seed);
        let s = stimuli(n, 60, seed ^ 1);
        let (a, ta) = g.run(1.0, &s).unwrap();
        let (b, tb) = g.run(1.0, &s).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&ta, &tb);
        prop_assert!(ta.values.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(a.rules().iter().all(|r| (0.0..=1.0).contains(&r.confidence)));
    }

    #[test]
    fn complexity_grows_with_rules(n in 2usize..6, k in 1usize..6, x in 0usize..6, seed in any::<u64>()) {
        let g = chain_ddg(n, &vec![1.0; k], seed);
        let x = x % g.nodes().len();
        let before = node_complexity(&g, x).unwrap();
        let mut rules = g.rules().to_vec();
        rules.push(CausalRule {
            antecedent: Trigger { target: Target::Rule(0), direction: Direction::More },
            consequent: Trigger { target: Target::Link(0), direction: Direction::More },
            multiplier: 1.0,
            lag: 1,
            confidence: 1.0,
        });
        let links: Vec<DLink> = g.dlinks().to_vec();
        let h = Ddg::new(g.nodes().to_vec(), None, links, rules).unwrap();
        prop_assert!(node_complexity(&h, x).unwrap() >= before);
        prop_assert!(before <= g.rules().len());
    }

    #[test]
    fn planted_rules_are_recovered(n_rules in 1usize..4, max_lag in 1usize..4, seed in any::<u64>()) {
        let p = generate_planted(n_rules, max_lag, 150, seed).unwrap();
        let mined = mine_rules(&p.trace, &MiningParams { max_lag, ..Default::default() }).unwrap();
        prop_assert_eq!(mined.len(), n_rules);
        for (m, r) in mined.iter().zip(p.ddg.rules()) {
            prop_assert_eq!((m.rule.antecedent, m.rule.consequent, m.rule.lag), (r.antecedent, r.consequent, r.lag));
            prop_assert!((m.rule.multiplier - r.multiplier).abs() < 1e-9);
        }
    }

    #[test]
    fn compile_apply_matches_naive_sum(
        n in 1usize..6,
        raw in proptest::collection::vec((0usize..6, 0usize..6, -2.0f64..2.0, -2.0f64..2.0), 0..12),
        v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
    ) {
        let links: Vec<QuantumCausalLink> = raw
            .iter()
            .map(|&(s, t, re, im)| QuantumCausalLink { source: s % n, target: t % n, alpha: Complex64::new(re, im) })
            .collect();
        let m = compile_quantum(&links, n).unwrap();
        let x = DVector::from_iterator(n, v.iter().take(n).map(|&(re, im)| Complex64::new(re, im)));
        let out = apply(&m, &x).unwrap();
        let mut naive = vec![Complex64::new(0.0, 0.0); n];
        for l in &links {
            naive[l.target] += l.alpha * x[l.source];
        }
        for i in 0..n {
            prop_assert!((out[i] - naive[i]).norm() < 1e-12);
        }
        let again = compile_quantum(&derive_links(&m), n).unwrap();
        prop_assert_eq!(again, m);
    }
}

#[test]
fn compiled_unitaries_preserve_norm() {
    let mut rng = seeded(99);
    for n in 1..=6 {
        let u = random_unitary(n, &mut rng);
        let m = compile_quantum(&derive_links(&u), n).unwrap();
        assert!(is_unitary(&m, 1e-9));
        for _ in 0..50 {
            let v = DVector::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let out = apply(&m, &v).unwrap();
            assert!((out.norm() - v.norm()).abs() < 1e-9);
        }
    }
}
