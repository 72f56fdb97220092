//! Monte Carlo estimates, reproducibility, and the exponential-spacings sampler.

use proptest::prelude::*;
use rayon::ThreadPoolBuilder;

use pickup_sticks::montecarlo::estimate_ngon_formable;
use pickup_sticks::stats::{ks_critical_value, ks_two_sample};
use pickup_sticks::{
    estimate, no_kgon_indicator, spacings_equivalence_batch, Estimate, StickSample, TrialConfig,
};

fn run_with_threads(threads: usize, config: &TrialConfig) -> Estimate {
    ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(|| estimate(config).unwrap())
}

#[test]
fn triangle_estimate_million_trials() {
    let e = estimate(&TrialConfig::new(3, 3, 1_000_000, 42).unwrap()).unwrap();
    assert!((0.498..=0.502).contains(&e.p_hat), "{e:?}");
    assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
}

#[test]
fn quadrilateral_estimate_ten_million_trials() {
    let e = estimate(&TrialConfig::new(5, 4, 10_000_000, 7).unwrap()).unwrap();
    assert!((0.0248..=0.0252).contains(&e.p_hat), "{e:?}");
}

#[test]
fn vacuous_estimate() {
    for trials in [1, 17, 100_000] {
        let e = estimate(&TrialConfig::new(2, 3, trials, 3).unwrap()).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert_eq!(e.ci_high - e.ci_low, 0.0);
    }
}

#[test]
fn estimate_is_bit_identical_across_thread_counts() {
    let config = TrialConfig::with_chunk_size(6, 4, 300_000, 0xDEAD_BEEF, 4096).unwrap();
    let reference = run_with_threads(1, &config);
    for threads in [2, 3, 8] {
        let e = run_with_threads(threads, &config);
        assert_eq!(e.successes, reference.successes);
        assert_eq!(e.p_hat.to_bits(), reference.p_hat.to_bits());
        assert_eq!(e.ci_low.to_bits(), reference.ci_low.to_bits());
        assert_eq!(e.ci_high.to_bits(), reference.ci_high.to_bits());
    }
}

#[test]
fn different_seeds_give_different_streams() {
    let a = estimate(&TrialConfig::new(4, 3, 200_000, 1).unwrap()).unwrap();
    let b = estimate(&TrialConfig::new(4, 3, 200_000, 2).unwrap()).unwrap();
    assert_ne!(a.successes, b.successes);
}

#[test]
fn ngon_formable_frequency_at_four_sticks() {
    let trials = 10_000_000;
    let e = estimate_ngon_formable(4, trials, 99, 1 << 16).unwrap();
    assert!(e.sigmas_from(5.0 / 6.0) <= 4.0, "{e:?}");
}

#[test]
fn spacings_uniform_marginal_for_one_stick() {
    let reps = 100_000;
    let (direct, spacings) = spacings_equivalence_batch(1, reps, 2024).unwrap();
    let a: Vec<f64> = direct.iter().map(|s| s.values()[0]).collect();
    let b: Vec<f64> = spacings.iter().map(|s| s.order_statistics().values()[0]).collect();
    assert!(ks_two_sample(&a, &b) < ks_critical_value(0.01, reps, reps));
    let mean = b.iter().sum::<f64>() / reps as f64;
    let sigma = (1.0f64 / 12.0 / reps as f64).sqrt();
    assert!((mean - 0.5).abs() <= 4.0 * sigma, "{mean}");
}

#[test]
fn spacings_middle_order_statistic_of_three() {
    let reps = 100_000;
    let (direct, spacings) = spacings_equivalence_batch(3, reps, 77).unwrap();
    let a: Vec<f64> = direct.iter().map(|s| s.values()[1]).collect();
    let b: Vec<f64> = spacings.iter().map(|s| s.order_statistics().values()[1]).collect();
    assert!(ks_two_sample(&a, &b) < ks_critical_value(0.01, reps, reps));
}

#[test]
fn spacings_maximum_of_five_has_mean_five_sixths() {
    let reps = 100_000;
    let n = 5.0f64;
    let (direct, spacings) = spacings_equivalence_batch(5, reps, 5).unwrap();
    // Var U_(n) = n / ((n+1)^2 (n+2))
    let sigma = (n / ((n + 1.0).powi(2) * (n + 2.0)) / reps as f64).sqrt();
    for maxima in [
        direct.iter().map(|s| s.values()[4]).collect::<Vec<_>>(),
        spacings.iter().map(|s| s.order_statistics().values()[4]).collect(),
    ] {
        let mean = maxima.iter().sum::<f64>() / reps as f64;
        assert!((mean - 5.0 / 6.0).abs() <= 4.0 * sigma, "{mean}");
    }
}

proptest! {
    #[test]
    fn indicator_is_scale_invariant(
        raw in proptest::collection::vec(0.0f64..=1.0, 1..12),
        k in 3usize..6,
        scale in 0.0f64..=1.0,
    ) {
        prop_assume!(scale > 0.0);
        // powers of two scale exactly; other factors may flip exact ties
        let scale = 2f64.powi(-(scale * 20.0) as i32);
        let sample = StickSample::from_unsorted(raw.clone()).unwrap();
        let scaled = StickSample::from_unsorted(raw.iter().map(|x| x * scale).collect()).unwrap();
        prop_assert_eq!(no_kgon_indicator(&sample, k).unwrap(), no_kgon_indicator(&scaled, k).unwrap());
    }

    #[test]
    fn normalized_spacings_are_sorted_in_unit_interval(n in 1usize..20, seed in any::<u64>()) {
        let (direct, spacings) = spacings_equivalence_batch(n, 4, seed).unwrap();
        for (d, s) in direct.iter().zip(&spacings) {
            let stats = s.order_statistics();
            prop_assert_eq!(d.len(), n);
            prop_assert!(stats.values().windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(stats.values().iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}
