use graphtropy::algo_info::*;
use graphtropy::rng::seeded;
use graphtropy::{to_f64, Rational};
use proptest::prelude::*;

proptest! {
    #[test]
    fn compressor_round_trips(bits in proptest::collection::vec(any::<bool>(), 0..600)) {
        let c = Lz77Bits::default();
        let z = c.compress(&bits);
        prop_assert_eq!(c.decompress(&z), Some(bits.clone()));
        prop_assert_eq!(compressor_complexity(&c, &bits), z.len());
    }

    #[test]
    fn periodic_strings_compress(period in proptest::collection::vec(any::<bool>(), 1..8), len in 1024usize..3000) {
        let bits: Vec<bool> = period.iter().cycle().take(len).cloned().collect();
        let c = Lz77Bits::default();
        prop_assert!(compressor_complexity(&c, &bits) * 4 < bits.len());
    }

    #[test]
    fn decompress_never_panics(bits in proptest::collection::vec(any::<bool>(), 0..300)) {
        let _ = Lz77Bits::default().decompress(&bits);
    }

    #[test]
    fn energy_forms_agree(weights in proptest::collection::vec(-20i64..20, 1..40)) {
        let s = EnergySpectrum::from_weights(&weights).unwrap();
        prop_assert_eq!(s.energy(), graph_energy(&weights).unwrap());
        prop_assert_eq!(s.fractions().iter().sum::<Rational>(), Rational::from_integer(1));
    }

    #[test]
    fn predictions_follow_the_formula(k in 0u64..40, m in 0u64..40) {
        let p = predicted_graphtropy(k, m);
        prop_assert_eq!(p.value, 1.0 - 2f64.powi(k as i32 - m as i32 - 1));
        prop_assert_eq!(p.in_range, k <= m + 1);
        let c = predicted_graphtropy_compressible(k, m as f64, 1.0).unwrap();
        prop_assert_eq!(c, p);
    }
}

#[test]
fn random_strings_barely_compress() {
    let c = Lz77Bits::default();
    for seed in 0..20 {
        let s = random_states(1, 1024, &mut seeded(seed)).pop().unwrap();
        assert!(compressor_complexity(&c, &s) >= 1024 - 32, "seed {seed}");
    }
}

#[test]
fn observer_measurement_tracks_collision_rate() {
    for k in [1u32, 3, 6] {
        let row = simulate_observer(3000, 48, k, 5).unwrap();
        assert!((to_f64(row.measured) - row.uniform).abs() <= 0.02, "{row:?}");
    }
}
