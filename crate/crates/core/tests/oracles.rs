mod common;

use nneten::chaos::{orbit, sine_map_series, SineMapConfig};
use nneten::ref_entropy::*;
use proptest::prelude::*;

use common::{closed_form_svden2, naive_sampen, seeded_coarse_series};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sampen_matches_naive_counting(seed in any::<u64>(), m in 1usize..4) {
        let x = seeded_coarse_series(seed, m + 2, 40);
        let got = sample_entropy(&x, SampEnParams { m, r_factor: 0.2 }).unwrap();
        prop_assert_eq!(got, naive_sampen(&x, m, 0.2));
    }

    #[test]
    fn svden_matches_closed_form(x in prop::collection::vec(-10.0f64..10.0, 3..40)) {
        let h = svd_entropy(&x, SvdEnParams::default()).unwrap();
        prop_assert!((h - closed_form_svden2(&x)).abs() < 1e-12, "{} vs {}", h, closed_form_svden2(&x));
    }

    #[test]
    fn sampen_affine_invariant(scale in 0.1f64..10.0, shift in -5.0f64..5.0, neg in any::<bool>()) {
        let x = orbit(1.7551, 0.1, 1000, 200);
        let a = if neg { -scale } else { scale };
        let y: Vec<f64> = x.iter().map(|v| a * v + shift).collect();
        let p = SampEnParams::default();
        let (hx, hy) = (sample_entropy(&x, p).unwrap().unwrap(), sample_entropy(&y, p).unwrap().unwrap());
        prop_assert!((hx - hy).abs() <= 1e-12);
    }
}

/// Values from an independent floating-point implementation of the same
/// definition, on the first three default windows of each pair-B regime.
#[test]
fn pair_b_sample_entropy_reference_values() {
    let cases = [
        (1.7161, [0.520322579837056, 0.520322579837056, 0.520322579837056]),
        (1.7551, [0.6323751422178511, 0.47480968037783483, 0.5944686693006154]),
    ];
    for (r, want) in cases {
        let windows = sine_map_series(&SineMapConfig { series_count: 3, ..SineMapConfig::new(r) }).unwrap();
        for (x, w) in windows.iter().zip(want) {
            let h = sample_entropy(x, SampEnParams::default()).unwrap().unwrap();
            assert!((h - w).abs() < 1e-12, "r {r}: {h} vs {w}");
        }
    }
}
