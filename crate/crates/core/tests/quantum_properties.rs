mod common;

use common::*;
use graphtropy::automorphism::{labeled_automorphisms, SearchLimits};
use graphtropy::graph::{default_ids, logical_entropy};
use graphtropy::quantum::*;
use graphtropy::rng::seeded;
use graphtropy::{to_f64, DistinctionGraph, PartitionView};
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_density(n: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    let u = random_unitary(n, &mut rng);
    let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let states: Vec<DVector<Complex64>> = (0..n).map(|j| u.column(j).into_owned()).collect();
    density_from_mixture(&states, &w).unwrap()
}

#[test]
fn partition_correspondence_exhaustive() {
    for n in 1..=5 {
        for labels in set_partitions(n) {
            let g = DistinctionGraph::from_labels(default_ids(n), &labels).unwrap();
            let p = graphtropy::graph::as_partition(&g).unwrap();
            let rho = density_from_partition(&p);
            assert!((quantum_logical_entropy(&rho) - to_f64(logical_entropy(&p))).abs() <= 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn entropy_range_and_spectrum(n in 1usize..7, seed in any::<u64>()) {
        let rho = random_density(n, seed);
        let h = quantum_logical_entropy(&rho);
        prop_assert!(h >= -1e-12 && h <= 1.0 - 1.0 / n as f64 + 1e-12);
        prop_assert!((h - spectral_logical_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn unitary_invariance(n in 1usize..7, seed in any::<u64>()) {
        let rho = random_density(n, seed);
        let u = random_unitary(n, &mut seeded(seed ^ 0xabc));
        let r2 = rho.conjugate(&u).unwrap();
        prop_assert!((quantum_logical_entropy(&r2) - quantum_logical_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn pure_states_have_zero_entropy(n in 1usize..7, seed in any::<u64>()) {
        let u = random_unitary(n, &mut seeded(seed));
        let rho = density_from_mixture(&[u.column(0).into_owned()], &[1.0]).unwrap();
        prop_assert!(quantum_logical_entropy(&rho).abs() < 1e-12);
    }

    #[test]
    fn diagonal_partitions_match(sizes in proptest::collection::vec(1usize..5, 1..6)) {
        let p = PartitionView::from_sizes(&sizes).unwrap();
        prop_assert!((quantum_logical_entropy(&density_from_partition(&p)) - to_f64(logical_entropy(&p))).abs() < 1e-12);
    }

    #[test]
    fn action_preserving_set_is_a_subgroup(g in arb_graph(6), seed in any::<u64>()) {
        let n = g.len();
        let acts: Vec<Complex64> = (0..n).map(|i| Complex64::new((seed >> (2 * i) & 1) as f64, (seed >> (2 * i + 1) & 1) as f64)).collect();
        let keys: Vec<(u64, u64)> = acts.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect();
        let group = labeled_automorphisms(&g, &keys, SearchLimits::default()).unwrap();
        let set: std::collections::BTreeSet<_> = group.iter().cloned().collect();
        for p in &group {
            prop_assert!(set.contains(&graphtropy::automorphism::inverse(p)));
            for q in &group {
                prop_assert!(set.contains(&graphtropy::automorphism::compose(p, q)));
            }
        }
        let act = ActionAssignment::uniform(acts).unwrap();
        let count = action_preserving_automorphisms(&g, &act, None, SearchLimits::default()).unwrap();
        prop_assert_eq!(count, group.len() as u64);
        prop_assert_eq!(brute_force_automorphisms(&g) as u64 % count, 0);
    }
}
