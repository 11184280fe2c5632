mod common;

use cmwave_core::model::circular_diff_matrix;
use cmwave_core::ndarray::Array2;
use cmwave_core::objective::grad_f_lag_of;
use cmwave_core::solver::{descent_slack, SBCD_STREAM};
use cmwave_core::variants::{sbcd_select, SbcdPolicy};
use cmwave_core::{
    synthesize_waveform, AgdPolicy, Algorithm, RhoMode, Solver, SolverConfig, SolverState,
    StopReason,
};
use common::desk_scenario;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sq(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum()
}

fn theory(seed: u64, iters: usize) -> SolverConfig {
    SolverConfig {
        rho_mode: RhoMode::Theory,
        max_iterations: iters,
        rng_seed: seed,
        record_lagrangian: true,
        ..Default::default()
    }
}

#[test]
fn dual_identity_and_dual_bound_every_iteration() {
    let scn = desk_scenario(3, 8);
    let mut solver = Solver::new(&scn, theory(1, 300)).unwrap();
    let ln = solver.lipschitz().lag;
    for _ in 0..300 {
        let prev: SolverState = solver.state().clone();
        solver.step().unwrap();
        let st = solver.state();
        let x = synthesize_waveform(&st.phi);
        let dphi = sq(&circular_diff_matrix(
            st.phi.as_array(),
            prev.phi.as_array(),
        ));
        for (l, &lag) in scn.spec.lags.iter().enumerate() {
            let g = grad_f_lag_of(x.view(), &scn, lag);
            let d = &st.offset_n[l];
            let cd = circular_diff_matrix(&st.phi_n[l], st.phi.as_array());
            assert!(d.iter().zip(cd.iter()).all(|(a, b)| (a - b).abs() < 1e-12));
            for ((lam, gi), di) in st.lambda_n[l].iter().zip(g.iter()).zip(d.iter()) {
                assert!((lam - (-gi - ln * di)).abs() < 1e-9);
            }
            let dlam = sq(&(&st.lambda_n[l] - &prev.lambda_n[l]));
            let dphin = sq(&circular_diff_matrix(&st.phi_n[l], &prev.phi_n[l]));
            let bound = 2.0 * ln * ln * (2.0 * dphin + 3.0 * dphi);
            assert!(dlam <= bound * (1.0 + 1e-9) + 1e-18, "{dlam} > {bound}");
        }
    }
}

#[test]
fn theory_mode_lagrangian_descends() {
    let scn = desk_scenario(3, 8);
    let out = Solver::new(&scn, theory(2, 500)).unwrap().run().unwrap();
    let mut prev = out.initial_lagrangian;
    for r in &out.trace {
        let l = r.lagrangian.unwrap();
        assert!(
            l <= prev + descent_slack(prev),
            "iteration {}: {l} > {prev}",
            r.k
        );
        assert!(l >= -1e-9);
        prev = l;
    }
    assert_eq!(out.descent_violations, 0);
}

#[test]
fn same_seed_same_trace_across_worker_counts() {
    let scn = desk_scenario(3, 8);
    let cfg = |threads| SolverConfig {
        rng_seed: 9,
        max_iterations: 200,
        threads: Some(threads),
        ..Default::default()
    };
    let a = Solver::new(&scn, cfg(1)).unwrap().run().unwrap();
    let b = Solver::new(&scn, cfg(4)).unwrap().run().unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.solution, b.solution);
}

#[test]
fn full_probability_block_selection_is_bit_exact() {
    let scn = desk_scenario(3, 8);
    let base = SolverConfig {
        rng_seed: 4,
        max_iterations: 300,
        record_lagrangian: true,
        ..Default::default()
    };
    let sbcd = SolverConfig {
        algorithm: Algorithm::Sbcd(SbcdPolicy::uniform(1.0, scn.num_lags())),
        ..base.clone()
    };
    let a = Solver::new(&scn, base).unwrap().run().unwrap();
    let b = cmwave_core::variants::run_sbcd(&scn, sbcd).unwrap();
    assert_eq!(a.trace.len(), b.trace.len());
    for (x, y) in a.trace.iter().zip(&b.trace) {
        assert_eq!(
            (
                x.e.to_bits(),
                x.pc.to_bits(),
                x.alpha.to_bits(),
                x.res_consensus.to_bits(),
                x.res_successive.to_bits()
            ),
            (
                y.e.to_bits(),
                y.pc.to_bits(),
                y.alpha.to_bits(),
                y.res_consensus.to_bits(),
                y.res_successive.to_bits()
            )
        );
        assert_eq!(
            x.lagrangian.map(f64::to_bits),
            y.lagrangian.map(f64::to_bits)
        );
    }
}

#[test]
fn zero_momentum_matches_base() {
    let scn = desk_scenario(3, 8);
    let base = SolverConfig {
        rng_seed: 5,
        max_iterations: 300,
        ..Default::default()
    };
    let agd = SolverConfig {
        algorithm: Algorithm::Agd(AgdPolicy { t: f64::INFINITY }),
        ..base.clone()
    };
    let a = Solver::new(&scn, base).unwrap().run().unwrap();
    let b = cmwave_core::variants::run_agd(&scn, agd).unwrap();
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + u.abs());
    for (x, y) in a.trace.iter().zip(&b.trace) {
        assert!(close(x.e, y.e) && close(x.pc, y.pc) && close(x.alpha, y.alpha));
        assert!(
            close(x.res_consensus, y.res_consensus) && close(x.res_successive, y.res_successive)
        );
        assert_eq!(y.gamma, Some(0.0));
    }
}

#[test]
fn momentum_schedule_is_recorded() {
    let scn = desk_scenario(3, 8);
    let cfg = SolverConfig {
        rng_seed: 6,
        max_iterations: 5,
        algorithm: Algorithm::Agd(AgdPolicy { t: 3.0 }),
        ..Default::default()
    };
    let out = Solver::new(&scn, cfg).unwrap().run().unwrap();
    let gammas: Vec<f64> = out.trace.iter().map(|r| r.gamma.unwrap()).collect();
    assert_eq!(gammas[0], 0.0);
    assert!((gammas[2] - 0.4).abs() < 1e-15);
}

#[test]
fn excluded_blocks_are_frozen() {
    let scn = desk_scenario(3, 8);
    let policy = SbcdPolicy::uniform(0.4, scn.num_lags());
    let cfg = SolverConfig {
        rng_seed: 7,
        max_iterations: 400,
        algorithm: Algorithm::Sbcd(policy.clone()),
        ..Default::default()
    };
    let mut solver = Solver::new(&scn, cfg).unwrap();
    let mut replay = ChaCha8Rng::seed_from_u64(7);
    replay.set_stream(SBCD_STREAM);
    for _ in 0..400 {
        let prev = solver.state().clone();
        let rec = solver.step().unwrap();
        let mask = sbcd_select(scn.num_lags(), &policy, &mut replay);
        assert_eq!(rec.active_lags, mask.iter().filter(|m| **m).count());
        let st = solver.state();
        for (l, _) in mask.iter().enumerate().filter(|(_, m)| !**m) {
            assert_eq!(st.phi_n[l], prev.phi_n[l]);
            assert_eq!(st.lambda_n[l], prev.lambda_n[l]);
        }
    }
}

/// Quantile of the chi-square distribution by the Wilson-Hilferty cube.
fn chi_square_quantile(df: f64, z: f64) -> f64 {
    let c = 2.0 / (9.0 * df);
    df * (1.0 - c + z * c.sqrt()).powi(3)
}

#[test]
fn subset_sizes_follow_binomial_law() {
    let lags = 17;
    let p = 0.25;
    let draws = 10_000;
    let policy = SbcdPolicy::uniform(p, lags);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut counts = vec![0usize; lags + 1];
    for _ in 0..draws {
        counts[sbcd_select(lags, &policy, &mut rng)
            .iter()
            .filter(|b| **b)
            .count()] += 1;
    }
    let mut pmf = vec![0.0; lags + 1];
    for (k, slot) in pmf.iter_mut().enumerate() {
        let mut c = 1.0;
        for i in 0..k {
            c = c * (lags - i) as f64 / (i + 1) as f64;
        }
        *slot = c * p.powi(k as i32) * (1.0 - p).powi((lags - k) as i32);
    }
    // Pool the upper tail until every bin expects at least five draws.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut exp, mut obs) = (0.0, 0.0);
    for k in 0..=lags {
        exp += pmf[k] * draws as f64;
        obs += counts[k] as f64;
        if exp >= 5.0 {
            bins.push((obs, exp));
            exp = 0.0;
            obs = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs;
        last.1 += exp;
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let critical = chi_square_quantile((bins.len() - 1) as f64, 3.0902);
    assert!(stat < critical, "chi-square {stat} above {critical}");
}

#[test]
fn block_selection_descends_in_expectation() {
    let scn = desk_scenario(3, 8);
    let iters = 200;
    let mut mean_drop = vec![0.0; iters];
    for seed in 0..20u64 {
        let cfg = SolverConfig {
            algorithm: Algorithm::Sbcd(SbcdPolicy::uniform(0.5, scn.num_lags())),
            ..theory(seed, iters)
        };
        let out = Solver::new(&scn, cfg).unwrap().run().unwrap();
        let mut prev = out.initial_lagrangian;
        for (k, r) in out.trace.iter().enumerate() {
            let l = r.lagrangian.unwrap();
            mean_drop[k] += (prev - l) / 20.0;
            prev = l;
        }
    }
    for (k, d) in mean_drop.iter().enumerate() {
        assert!(*d > 0.0, "iteration {}: mean decrease {d}", k + 1);
    }
}

#[test]
fn partial_block_selection_still_converges() {
    let scn = desk_scenario(4, 16);
    let cfg = SolverConfig {
        rng_seed: 0,
        max_iterations: 240_000,
        algorithm: Algorithm::Sbcd(SbcdPolicy::uniform(0.25, scn.num_lags())),
        ..Default::default()
    };
    let out = Solver::new(&scn, cfg).unwrap().run().unwrap();
    assert_eq!(
        out.stop_reason,
        StopReason::ResidualTolerance,
        "after {} iterations",
        out.trace.len()
    );
}
