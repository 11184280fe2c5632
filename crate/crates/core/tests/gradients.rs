mod common;

use cmwave_core::objective::{f_lag, grad_f_lag, grad_h, mismatch_e};
use cmwave_core::oracle::{finite_diff_grad, DEFAULT_FD_STEP};
use cmwave_core::wrap_phase;
use common::{random_phase, random_scenario, rel_err};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-5;

#[test]
fn mismatch_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let scn = random_scenario(&mut rng);
        let phi = random_phase(&scn, &mut rng);
        let alpha = rng.gen_range(0.1..1.0) * scn.spec.alpha_max;
        let (ga, gphi) = grad_h(alpha, &phi, &scn);
        let fd = finite_diff_grad(
            |p| mismatch_e(alpha, &wrap_phase(p).unwrap(), &scn),
            phi.as_array(),
            DEFAULT_FD_STEP,
        )
        .unwrap();
        let err = rel_err(gphi.iter(), fd.iter(), 1e-6);
        assert!(err < TOL, "phase gradient relative error {err}");

        let h = DEFAULT_FD_STEP * alpha.max(1.0);
        let fd_alpha =
            (mismatch_e(alpha + h, &phi, &scn) - mismatch_e(alpha - h, &phi, &scn)) / (2.0 * h);
        let err = (ga - fd_alpha).abs() / fd_alpha.abs().max(1e-6);
        assert!(err < 1e-7, "alpha gradient relative error {err}");
    }
}

#[test]
fn lag_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..100 {
        let scn = random_scenario(&mut rng);
        let phi = random_phase(&scn, &mut rng);
        for &lag in &scn.spec.lags {
            let g = grad_f_lag(&phi, &scn, lag).unwrap();
            let fd = finite_diff_grad(
                |p| f_lag(&wrap_phase(p).unwrap(), &scn, lag).unwrap(),
                phi.as_array(),
                DEFAULT_FD_STEP,
            )
            .unwrap();
            let scale = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
            if scale < 1e-9 {
                assert!(g.iter().all(|v| v.abs() < 1e-6));
                continue;
            }
            let err = rel_err(g.iter(), fd.iter(), 1e-9);
            assert!(err < TOL, "lag {lag} gradient relative error {err}");
        }
    }
}

#[test]
fn lag_gradient_requires_lag_in_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let scn = random_scenario(&mut rng);
    let phi = random_phase(&scn, &mut rng);
    let missing = (0..scn.waveform_length()).find(|l| scn.spec.lag_index(*l).is_none());
    if let Some(lag) = missing {
        assert!(grad_f_lag(&phi, &scn, lag).is_err());
    }
}
