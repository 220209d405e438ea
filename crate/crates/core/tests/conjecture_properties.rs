use oblique_core::conjecture::{evaluate_sample, replay, SearchConfig, Stage, SummaryBuilder};
use oblique_core::states::RngSeed;
use proptest::prelude::*;

fn config(seed: u64, orthonormal_only: bool) -> SearchConfig {
    SearchConfig {
        samples_per_dims: 50,
        seed: RngSeed(seed),
        max_iterations: 60,
        orthonormal_only,
        ..SearchConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn records_replay_exactly(seed in any::<u64>(), index in 0u64..200) {
        let cfg = config(seed, false);
        for record in evaluate_sample(&cfg, index).unwrap() {
            let again = replay(&record, cfg.condition_cap).unwrap();
            prop_assert!((again - record.delta_i).abs() <= 1e-12);
        }
    }

    #[test]
    fn orthonormal_records_stay_above_the_floor(seed in any::<u64>(), index in 0u64..200) {
        let cfg = config(seed, true);
        let [start, optimized] = evaluate_sample(&cfg, index).unwrap();
        prop_assert_eq!(start.stage, Stage::Start);
        prop_assert!(optimized.delta_i <= start.delta_i);
        prop_assert!(optimized.delta_i >= -1e-7, "ΔI = {}", optimized.delta_i);
    }
}

#[test]
fn per_dims_minimum_never_increases() {
    let cfg = config(11, false);
    let mut builder = SummaryBuilder::new(cfg.threshold);
    let mut previous: std::collections::BTreeMap<Vec<usize>, f64> = Default::default();
    for index in 0..cfg.total_samples().min(120) {
        for record in evaluate_sample(&cfg, index).unwrap() {
            builder.push(&record);
        }
        for d in builder.summary().per_dims {
            let min = d.min.delta_i;
            if let Some(&prev) = previous.get(&d.dims) {
                assert!(min <= prev);
            }
            previous.insert(d.dims, min);
        }
    }
}
