//! Beampattern mismatch `e`, correlation penalty `Pc`, and their gradients.
//!
//! Every evaluation is matrix-free: beampattern values come from squared
//! norms of synthesized signals `s = X a`, and correlations are direct
//! shifted-overlap sums of those signals. Reductions over angles are split
//! into fixed-size chunks whose partial results are summed in chunk order,
//! so results are bit-identical for any worker count.

use ndarray::{s, Array2, ArrayView1, ArrayView2, Zip};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{synthesize_waveform, DesignSpec, LipschitzConstants, PhaseMatrix, Scenario};

/// Angles per parallel work item in beam-grid reductions.
const ANGLE_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleSet {
    Beam,
    Corr,
}

fn steering(scenario: &Scenario, set: AngleSet) -> &Array2<Complex64> {
    match set {
        AngleSet::Beam => &scenario.steering_beam,
        AngleSet::Corr => &scenario.steering_corr,
    }
}

/// Synthesized signals, one row per steering row: `out[a, i] = (X a_a)(i)`.
pub fn synthesized_signals(
    x: ArrayView2<Complex64>,
    steering: ArrayView2<Complex64>,
) -> Array2<Complex64> {
    steering.dot(&x.t())
}

/// `|X a_theta|^2` over one angle set.
pub fn beampattern(phi: &PhaseMatrix, scenario: &Scenario, set: AngleSet) -> Vec<f64> {
    let x = synthesize_waveform(phi);
    beampattern_of(x.view(), steering(scenario, set).view())
}

fn chunk_starts(rows: usize) -> Vec<usize> {
    (0..rows).step_by(ANGLE_CHUNK).collect()
}

fn angle_chunk(steering: ArrayView2<'_, Complex64>, start: usize) -> ArrayView2<'_, Complex64> {
    let end = (start + ANGLE_CHUNK).min(steering.nrows());
    steering.slice_move(s![start..end, ..])
}

pub fn beampattern_of(x: ArrayView2<Complex64>, steering: ArrayView2<Complex64>) -> Vec<f64> {
    let chunks: Vec<Vec<f64>> = chunk_starts(steering.nrows())
        .into_par_iter()
        .map(|start| {
            let a = angle_chunk(steering, start);
            synthesized_signals(x, a)
                .rows()
                .into_iter()
                .map(|s| s.iter().map(|z| z.norm_sqr()).sum())
                .collect()
        })
        .collect();
    chunks.concat()
}

/// `sum_t conj(si[t]) * sj[t + lag]`; zero when the overlap is empty.
#[inline]
pub fn overlap(si: ArrayView1<Complex64>, sj: ArrayView1<Complex64>, lag: usize) -> Complex64 {
    let n = si.len();
    if lag >= n {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..n - lag {
        acc += si[t].conj() * sj[t + lag];
    }
    acc
}

/// Spatial correlation `P_{theta_i, theta_j, lag}` between correlation angles.
pub fn correlation(
    phi: &PhaseMatrix,
    scenario: &Scenario,
    i: usize,
    j: usize,
    lag: usize,
) -> Result<Complex64> {
    let k = scenario.spec.num_corr_angles();
    if i >= k || j >= k {
        return Err(Error::Domain(format!(
            "correlation angle index ({i}, {j}) out of range for {k} angles"
        )));
    }
    let x = synthesize_waveform(phi);
    let s = synthesized_signals(x.view(), scenario.steering_corr.view());
    Ok(overlap(s.row(i), s.row(j), lag))
}

/// Squared-error weight of the `(i, j)` entry of the lag-`lag` correlation block.
#[inline]
pub fn pair_weight_sq(i: usize, j: usize, lag: usize, weight_ac: f64, weight_cc: f64) -> f64 {
    if i != j {
        weight_cc * weight_cc
    } else if lag == 0 {
        0.0
    } else {
        weight_ac * weight_ac
    }
}

/// Synthesized correlation-angle signals plus all pairwise correlations at
/// the requested lags.
#[derive(Debug, Clone)]
pub struct CorrelationCache {
    /// Row `a` is `X a_{theta_a}`.
    pub signals: Array2<Complex64>,
    pub lags: Vec<usize>,
    /// `values[l][[i, j]]` is the correlation at `lags[l]`.
    pub values: Vec<Array2<Complex64>>,
}

impl CorrelationCache {
    pub fn new(x: ArrayView2<Complex64>, scenario: &Scenario) -> Self {
        Self::for_lags(x, scenario, &scenario.spec.lags)
    }

    pub fn for_lags(x: ArrayView2<Complex64>, scenario: &Scenario, lags: &[usize]) -> Self {
        let signals = synthesized_signals(x, scenario.steering_corr.view());
        let values = lags
            .iter()
            .map(|&lag| correlation_block(signals.view(), lag))
            .collect();
        CorrelationCache {
            signals,
            lags: lags.to_vec(),
            values,
        }
    }
}

pub fn correlation_block(signals: ArrayView2<Complex64>, lag: usize) -> Array2<Complex64> {
    let k = signals.nrows();
    Array2::from_shape_fn((k, k), |(i, j)| {
        overlap(signals.row(i), signals.row(j), lag)
    })
}

/// `f_n = ||B_n||_F^2` from a precomputed correlation block.
pub fn f_from_block(
    block: ArrayView2<Complex64>,
    lag: usize,
    weight_ac: f64,
    weight_cc: f64,
) -> f64 {
    let mut acc = 0.0;
    for ((i, j), p) in block.indexed_iter() {
        let w2 = pair_weight_sq(i, j, lag, weight_ac, weight_cc);
        if w2 != 0.0 {
            acc += w2 * p.norm_sqr();
        }
    }
    acc
}

fn require_lag(scenario: &Scenario, lag: usize) -> Result<()> {
    if scenario.spec.lag_index(lag).is_none() {
        return Err(Error::Domain(format!(
            "lag {lag} is not in the lag set {:?}",
            scenario.spec.lags
        )));
    }
    Ok(())
}

/// Weighted correlation energy at one lag.
pub fn f_lag(phi: &PhaseMatrix, scenario: &Scenario, lag: usize) -> Result<f64> {
    require_lag(scenario, lag)?;
    let x = synthesize_waveform(phi);
    let cache = CorrelationCache::for_lags(x.view(), scenario, &[lag]);
    let spec = &scenario.spec;
    Ok(f_from_block(
        cache.values[0].view(),
        lag,
        spec.weight_ac,
        spec.weight_cc,
    ))
}

/// `Pc = sum_n f_n` over the lag set.
pub fn corr_penalty(phi: &PhaseMatrix, scenario: &Scenario) -> f64 {
    let x = synthesize_waveform(phi);
    corr_penalty_of(x.view(), scenario)
}

pub fn corr_penalty_of(x: ArrayView2<Complex64>, scenario: &Scenario) -> f64 {
    let spec = &scenario.spec;
    let cache = CorrelationCache::new(x, scenario);
    cache
        .lags
        .iter()
        .zip(&cache.values)
        .map(|(&lag, b)| f_from_block(b.view(), lag, spec.weight_ac, spec.weight_cc))
        .sum()
}

/// Gradient of `f_n` with respect to the phases, given the waveform and its
/// correlation-angle signals. Any lag is accepted; lags `>= N` give zero.
///
/// `dP_ab/dphi_{i,m}` has two terms: `j x_im a_b(m) conj(s_a(i - n))` from the
/// delayed factor and `-j conj(x_im) conj(a_a(m)) s_b(i + n)` from the
/// conjugated one.
pub fn grad_f_from_signals(
    x: ArrayView2<Complex64>,
    signals: ArrayView2<Complex64>,
    steering_corr: ArrayView2<Complex64>,
    block: ArrayView2<Complex64>,
    lag: usize,
    weight_ac: f64,
    weight_cc: f64,
) -> Array2<f64> {
    let (n_samples, n_ant) = x.dim();
    let k = signals.nrows();
    let mut grad = Array2::zeros((n_samples, n_ant));
    if lag >= n_samples {
        return grad;
    }
    let zero = Complex64::new(0.0, 0.0);

    // c_ab = 2 w_ab^2 conj(P_ab)
    let coef = Array2::from_shape_fn((k, k), |(a, b)| {
        2.0 * pair_weight_sq(a, b, lag, weight_ac, weight_cc) * block[[a, b]].conj()
    });
    if coef.iter().all(|c| *c == zero) {
        return grad;
    }

    // delayed[b, i] = sum_a c_ab conj(s_a(i - n)) for i >= n
    // advanced[a, i] = sum_b c_ab s_b(i + n) for i + n < N
    let mut delayed = Array2::<Complex64>::zeros((k, n_samples));
    let mut advanced = Array2::<Complex64>::zeros((k, n_samples));
    for a in 0..k {
        for b in 0..k {
            let c = coef[[a, b]];
            if c == zero {
                continue;
            }
            for i in lag..n_samples {
                delayed[[b, i]] += c * signals[[a, i - lag]].conj();
            }
            for i in 0..n_samples - lag {
                advanced[[a, i]] += c * signals[[b, i + lag]];
            }
        }
    }

    let j = Complex64::i();
    for i in 0..n_samples {
        for m in 0..n_ant {
            let mut fwd = zero;
            let mut bwd = zero;
            for a in 0..k {
                fwd += steering_corr[[a, m]] * delayed[[a, i]];
                bwd += steering_corr[[a, m]].conj() * advanced[[a, i]];
            }
            let xim = x[[i, m]];
            grad[[i, m]] = (j * (xim * fwd - xim.conj() * bwd)).re;
        }
    }
    grad
}

/// Gradient of `f_n` with respect to the phases.
pub fn grad_f_lag(phi: &PhaseMatrix, scenario: &Scenario, lag: usize) -> Result<Array2<f64>> {
    require_lag(scenario, lag)?;
    let x = synthesize_waveform(phi);
    Ok(grad_f_lag_of(x.view(), scenario, lag))
}

/// Unchecked variant of [`grad_f_lag`] on a synthesized waveform.
pub fn grad_f_lag_of(x: ArrayView2<Complex64>, scenario: &Scenario, lag: usize) -> Array2<f64> {
    let signals = synthesized_signals(x, scenario.steering_corr.view());
    let block = correlation_block(signals.view(), lag);
    let spec = &scenario.spec;
    grad_f_from_signals(
        x,
        signals.view(),
        scenario.steering_corr.view(),
        block.view(),
        lag,
        spec.weight_ac,
        spec.weight_cc,
    )
}

/// Mismatch value and gradients at one `(alpha, Phi)` point.
#[derive(Debug, Clone)]
pub struct MismatchEval {
    pub beampattern: Vec<f64>,
    pub e: f64,
    pub grad_alpha: f64,
    pub grad_phi: Array2<f64>,
}

struct ChunkPartial {
    beampattern: Vec<f64>,
    e: f64,
    weighted_power: f64,
    // sum over angles of w_theta(i) * a_theta(m)
    accum: Array2<Complex64>,
}

/// Evaluates `e(alpha, X)` with its gradients in one pass over the grid.
///
/// With `r = P_theta - alpha Pbar_theta`,
/// `de/dphi_{i,m} = sum_theta -4 r Im(conj(s_theta(i)) x_im a_theta(m))`
/// and `de/dalpha = 2 (p alpha - sum_theta Pbar_theta P_theta)`.
pub fn evaluate_mismatch(
    alpha: f64,
    x: ArrayView2<Complex64>,
    scenario: &Scenario,
) -> MismatchEval {
    let (n_samples, n_ant) = x.dim();
    let desired = &scenario.spec.desired_pattern;
    let steering = scenario.steering_beam.view();
    let partials: Vec<ChunkPartial> = chunk_starts(steering.nrows())
        .into_par_iter()
        .map(|offset| {
            let a = angle_chunk(steering, offset);
            let mut s = synthesized_signals(x, a);
            let mut part = ChunkPartial {
                beampattern: Vec::with_capacity(a.nrows()),
                e: 0.0,
                weighted_power: 0.0,
                accum: Array2::zeros((n_samples, n_ant)),
            };
            for (t, mut row) in s.rows_mut().into_iter().enumerate() {
                let power: f64 = row.iter().map(|z| z.norm_sqr()).sum();
                let target = desired[offset + t];
                let r = power - alpha * target;
                part.beampattern.push(power);
                part.e += r * r;
                part.weighted_power += target * power;
                // row becomes w(i) = -4 r conj(s(i))
                row.mapv_inplace(|z| z.conj() * (-4.0 * r));
            }
            // accum[i, m] = sum_t w_t(i) a_t(m)
            part.accum = s.t().dot(&a);
            part
        })
        .collect();

    let mut beampattern = Vec::with_capacity(desired.len());
    let mut e = 0.0;
    let mut weighted_power = 0.0;
    let mut accum = Array2::<Complex64>::zeros((n_samples, n_ant));
    for part in partials {
        beampattern.extend(part.beampattern);
        e += part.e;
        weighted_power += part.weighted_power;
        accum += &part.accum;
    }
    let mut grad_phi = Array2::zeros((n_samples, n_ant));
    Zip::from(&mut grad_phi)
        .and(&x)
        .and(&accum)
        .for_each(|g, &xim, &acc| *g = (xim * acc).im);
    MismatchEval {
        beampattern,
        e,
        grad_alpha: 2.0 * (scenario.p_scalar * alpha - weighted_power),
        grad_phi,
    }
}

/// Beampattern mismatch `e(alpha, X(Phi)) = sum_theta |alpha Pbar - P_theta|^2`.
pub fn mismatch_e(alpha: f64, phi: &PhaseMatrix, scenario: &Scenario) -> f64 {
    let x = synthesize_waveform(phi);
    mismatch_e_of(alpha, x.view(), scenario)
}

pub fn mismatch_e_of(alpha: f64, x: ArrayView2<Complex64>, scenario: &Scenario) -> f64 {
    beampattern_of(x, scenario.steering_beam.view())
        .iter()
        .zip(&scenario.spec.desired_pattern)
        .map(|(p, d)| {
            let r = alpha * d - p;
            r * r
        })
        .sum()
}

/// Gradient of the mismatch term: `(d/dalpha, d/dPhi)`.
pub fn grad_h(alpha: f64, phi: &PhaseMatrix, scenario: &Scenario) -> (f64, Array2<f64>) {
    let x = synthesize_waveform(phi);
    let eval = evaluate_mismatch(alpha, x.view(), scenario);
    (eval.grad_alpha, eval.grad_phi)
}

/// Gradient Lipschitz constants at equality of their certified bounds.
///
/// With zero correlation weights `f_n` vanishes identically and every
/// positive constant is valid; the weight is then taken as 1 so that the
/// per-lag constant stays positive.
pub fn lipschitz_constants(spec: &DesignSpec, p_scalar: f64) -> LipschitzConstants {
    let m = spec.num_antennas as f64;
    let n = spec.waveform_length as f64;
    let k = spec.num_corr_angles() as f64;
    let grid = spec.num_beam_angles() as f64;
    let p_max = spec.desired_max();
    let mut w_c = spec.weight_ac.max(spec.weight_cc);
    if w_c == 0.0 {
        w_c = 1.0;
    }
    LipschitzConstants {
        alpha: 2.0 * p_scalar,
        phi: 4.0 * (m - 1.0) * (spec.alpha_max * p_max + m * m * n + 2.0 * m - 2.0) * grid,
        lag: 2.0 * w_c * w_c * (2.0 * m - 1.0) * (m * m * n + 2.0 * m - 1.0) * k * k,
    }
}
