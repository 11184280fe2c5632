mod common;

use cmwave_core::metrics::{normalized_correlation_db, DEFAULT_DB_FLOOR};
use cmwave_core::objective::{self, corr_penalty, f_lag, mismatch_e, AngleSet};
use cmwave_core::{synthesize_waveform, wrap_phase};
use common::{random_phase, random_scenario};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluators_are_nonnegative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scn = random_scenario(&mut rng);
        let phi = random_phase(&scn, &mut rng);
        let alpha = rng.gen_range(0.01..1.0) * scn.spec.alpha_max;
        prop_assert!(mismatch_e(alpha, &phi, &scn) >= -1e-12);
        prop_assert!(corr_penalty(&phi, &scn) >= -1e-12);
        for &lag in &scn.spec.lags {
            prop_assert!(f_lag(&phi, &scn, lag).unwrap() >= -1e-12);
        }
        for p in objective::beampattern(&phi, &scn, AngleSet::Beam) {
            prop_assert!(p >= -1e-12);
        }
    }

    #[test]
    fn zero_lag_self_correlation_is_real(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scn = random_scenario(&mut rng);
        let phi = random_phase(&scn, &mut rng);
        for i in 0..scn.spec.num_corr_angles() {
            let p = objective::correlation(&phi, &scn, i, i, 0).unwrap();
            prop_assert!(p.im.abs() < 1e-9 * p.norm().max(1e-300));
            prop_assert!(p.re >= 0.0);
        }
    }

    #[test]
    fn waveform_is_constant_modulus(seed in any::<u64>(), shift in -50.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scn = random_scenario(&mut rng);
        let raw = random_phase(&scn, &mut rng).into_inner() * 7.0 + shift;
        let x = synthesize_waveform(&wrap_phase(&raw).unwrap());
        for z in x.iter() {
            prop_assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_levels_ignore_global_phase(seed in any::<u64>(), rot in 0.0f64..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scn = random_scenario(&mut rng);
        let phi = random_phase(&scn, &mut rng);
        let turned = wrap_phase(&(phi.as_array() + rot)).unwrap();
        let a = normalized_correlation_db(&phi, &scn, DEFAULT_DB_FLOOR).unwrap();
        let b = normalized_correlation_db(&turned, &scn, DEFAULT_DB_FLOOR).unwrap();
        for (u, v) in a.entries.iter().zip(&b.entries) {
            // Rounding-level magnitudes carry no stable dB value.
            if u.value.norm() > 1e-9 {
                prop_assert!((u.level_db - v.level_db).abs() < 1e-12 * (1.0 + u.level_db.abs()) + 1e-10);
            }
        }
    }
}
