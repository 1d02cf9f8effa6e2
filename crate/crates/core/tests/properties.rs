use std::f64::consts::PI;

use lgeu::lab::corpus::random_band;
use lgeu::lab::{check_multiplier_bound, CorpusField};
use lgeu::multiplier::{lp_project, velocity_spectral, LpKind};
use lgeu::spectral::{dft_forward, dft_inverse, gradient};
use lgeu::{Grid, RealField, SpectralField};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn real_field() -> impl Strategy<Value = RealField> {
    prop_oneof![Just(8usize), Just(16), Just(32)].prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * n)
            .prop_map(move |v| RealField::new(Grid::new(n).unwrap(), v).unwrap())
    })
}

fn band_field(n: usize, band: usize, seed: u64) -> SpectralField {
    random_band(Grid::new(n).unwrap(), band, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(f in real_field()) {
        let back = dft_inverse(&dft_forward(&f)).unwrap();
        let scale = f.max_abs().max(1.0);
        for (a, b) in f.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn plancherel(f in real_field()) {
        let physical: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * f.grid().cell_area();
        let spectral = 4.0 * PI * PI * dft_forward(&f).energy_sum();
        prop_assert!((physical - spectral).abs() <= 1e-11 * physical.max(1.0));
    }

    #[test]
    fn littlewood_paley_pieces_add_up(seed in any::<u64>(), j in 0i32..5) {
        let f = band_field(32, 12, seed);
        let n = 2f64.powi(j + 1);
        let low = lp_project(&f, n, LpKind::Leq).unwrap();
        let high = lp_project(&f, n, LpKind::Gt).unwrap();
        prop_assert!(max_diff(&low.add_scaled(1.0, &high), &f) <= 1e-14);
        let lower = lp_project(&f, n / 2.0, LpKind::Leq).unwrap();
        let piece = lp_project(&f, n, LpKind::At).unwrap();
        prop_assert!(max_diff(&lower.add_scaled(1.0, &piece), &low) <= 1e-14);
    }

    #[test]
    fn velocity_is_divergence_free(seed in any::<u64>(), gamma in 0.0f64..3.0) {
        let omega = band_field(32, 10, seed);
        let (u1, u2) = velocity_spectral(&omega, gamma).unwrap();
        let div = gradient(&u1).0.add_scaled(1.0, &gradient(&u2).1);
        prop_assert!(div.max_abs() <= 1e-13);
    }

    #[test]
    fn l2_multiplier_ratio_at_most_one(seed in any::<u64>(), gamma in 0.0f64..3.0) {
        let corpus = vec![CorpusField { id: "f".into(), field: band_field(64, 20, seed) }];
        let report = check_multiplier_bound(&corpus, gamma, &[1.0, 2.0, 4.0, 8.0, 16.0], 2.0).unwrap();
        prop_assert!(!report.rows.is_empty());
        prop_assert!(report.max_ratio <= 1.0, "max ratio {}", report.max_ratio);
    }
}
