//! Brute-force reference evaluators used to cross-check the fast paths.
//!
//! Everything here materializes the dense objects the production code
//! avoids, so each entry point carries a hard size guard.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{synthesize_waveform, PhaseMatrix, Scenario};
use crate::objective::pair_weight_sq;

pub const MAX_ORACLE_ANTENNAS: usize = 6;
pub const MAX_ORACLE_LENGTH: usize = 64;
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Dense `(M^2 + 1) x (M^2 + 1)` form `[p q^H; q A]` of the mismatch term.
#[derive(Debug, Clone)]
pub struct ExplicitQ {
    pub num_antennas: usize,
    pub matrix: Array2<Complex64>,
}

fn guard_antennas(m: usize) -> Result<()> {
    if m > MAX_ORACLE_ANTENNAS {
        return Err(Error::Guard(format!(
            "explicit Q needs M <= {MAX_ORACLE_ANTENNAS}, got {m}"
        )));
    }
    Ok(())
}

fn guard_length(n: usize) -> Result<()> {
    if n > MAX_ORACLE_LENGTH {
        return Err(Error::Guard(format!(
            "direct correlation needs N <= {MAX_ORACLE_LENGTH}, got {n}"
        )));
    }
    Ok(())
}

/// Column-major `vec` of a square matrix.
fn vec_cols(a: &Array2<Complex64>) -> Array1<Complex64> {
    a.t().iter().copied().collect()
}

/// Assembles `p = sum Pbar^2`, `q = -sum Pbar a_tt`, `A = sum a_tt a_tt^H`
/// with `a_tt = vec(a a^H)`.
pub fn explicit_q(scenario: &Scenario) -> Result<ExplicitQ> {
    let m = scenario.num_antennas();
    guard_antennas(m)?;
    let d = m * m + 1;
    let mut q = Array2::<Complex64>::zeros((d, d));
    for (a, &target) in scenario
        .steering_beam
        .rows()
        .into_iter()
        .zip(&scenario.spec.desired_pattern)
    {
        let outer = Array2::from_shape_fn((m, m), |(i, j)| a[i] * a[j].conj());
        let att = vec_cols(&outer);
        q[[0, 0]] += Complex64::new(target * target, 0.0);
        for r in 0..m * m {
            q[[r + 1, 0]] -= att[r] * target;
            q[[0, r + 1]] -= att[r].conj() * target;
            for c in 0..m * m {
                q[[r + 1, c + 1]] += att[r] * att[c].conj();
            }
        }
    }
    Ok(ExplicitQ {
        num_antennas: m,
        matrix: q,
    })
}

/// `v = [alpha; vec(X^H X)]`.
pub fn stack_v(alpha: f64, phi: &PhaseMatrix) -> Array1<Complex64> {
    let x = synthesize_waveform(phi);
    let gram = x.t().mapv(|z| z.conj()).dot(&x);
    let mut v = vec![Complex64::new(alpha, 0.0)];
    v.extend(vec_cols(&gram));
    Array1::from(v)
}

/// The full complex quadratic form `v^H Q v`.
pub fn quadratic_form(alpha: f64, phi: &PhaseMatrix, q: &ExplicitQ) -> Result<Complex64> {
    if phi.num_antennas() != q.num_antennas {
        return Err(Error::Shape(format!(
            "phase matrix has {} antennas, Q was built for {}",
            phi.num_antennas(),
            q.num_antennas
        )));
    }
    let v = stack_v(alpha, phi);
    let qv = q.matrix.dot(&v);
    Ok(v.iter().zip(qv.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// Real part of [`quadratic_form`].
pub fn h_via_q(alpha: f64, phi: &PhaseMatrix, q: &ExplicitQ) -> Result<f64> {
    Ok(quadratic_form(alpha, phi, q)?.re)
}

/// Dense shift matrix with ones at `(t, t + lag)`; negative lags give the transpose.
pub fn shift_matrix(n: usize, lag: i64) -> Array2<f64> {
    Array2::from_shape_fn(
        (n, n),
        |(r, c)| {
            if c as i64 - r as i64 == lag {
                1.0
            } else {
                0.0
            }
        },
    )
}

/// `a_i^H X^H S_lag X a_j` with an explicit shift matrix, for signed lags.
pub fn correlation_direct_signed(
    phi: &PhaseMatrix,
    scenario: &Scenario,
    i: usize,
    j: usize,
    lag: i64,
) -> Result<Complex64> {
    let n = phi.waveform_length();
    guard_length(n)?;
    let k = scenario.spec.num_corr_angles();
    if i >= k || j >= k {
        return Err(Error::Domain(format!(
            "correlation angle index ({i}, {j}) out of range for {k} angles"
        )));
    }
    let x = synthesize_waveform(phi);
    let si = x.dot(&scenario.steering_corr.row(i));
    let sj = x.dot(&scenario.steering_corr.row(j));
    let shifted = shift_matrix(n, lag)
        .mapv(|v| Complex64::new(v, 0.0))
        .dot(&sj);
    Ok(si
        .iter()
        .zip(shifted.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

pub fn correlation_direct(
    phi: &PhaseMatrix,
    scenario: &Scenario,
    i: usize,
    j: usize,
    lag: usize,
) -> Result<Complex64> {
    correlation_direct_signed(phi, scenario, i, j, lag as i64)
}

/// Weighted block `B_n` assembled from direct correlations.
pub fn b_matrix_direct(
    phi: &PhaseMatrix,
    scenario: &Scenario,
    lag: usize,
) -> Result<Array2<Complex64>> {
    let k = scenario.spec.num_corr_angles();
    let spec = &scenario.spec;
    let mut b = Array2::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            let w = pair_weight_sq(i, j, lag, spec.weight_ac, spec.weight_cc).sqrt();
            b[[i, j]] = correlation_direct(phi, scenario, i, j, lag)? * w;
        }
    }
    Ok(b)
}

/// `||B_n||_F^2` from the direct assembly.
pub fn f_lag_direct(phi: &PhaseMatrix, scenario: &Scenario, lag: usize) -> Result<f64> {
    Ok(b_matrix_direct(phi, scenario, lag)?
        .iter()
        .map(|z| z.norm_sqr())
        .sum())
}

/// `a^H (X^H X) a` with the Gram matrix formed explicitly.
pub fn beampattern_explicit(phi: &PhaseMatrix, scenario: &Scenario) -> Result<Vec<f64>> {
    guard_antennas(phi.num_antennas())?;
    let x = synthesize_waveform(phi);
    let gram = x.t().mapv(|z| z.conj()).dot(&x);
    Ok(scenario
        .steering_beam
        .rows()
        .into_iter()
        .map(|a| {
            let ga = gram.dot(&a);
            a.iter()
                .zip(ga.iter())
                .map(|(u, v)| u.conj() * v)
                .sum::<Complex64>()
                .re
        })
        .collect())
}

/// Central finite differences of `f` at `point`, one coordinate at a time.
pub fn finite_diff_grad<F>(mut f: F, point: &Array2<f64>, step: f64) -> Result<Array2<f64>>
where
    F: FnMut(&Array2<f64>) -> f64,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let mut grad = Array2::zeros(point.raw_dim());
    let mut probe = point.clone();
    for idx in ndarray::indices(point.raw_dim()) {
        let x0 = probe[idx];
        probe[idx] = x0 + step;
        let up = f(&probe);
        probe[idx] = x0 - step;
        let down = f(&probe);
        probe[idx] = x0;
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::NonFinite(format!(
                "function value at coordinate {idx:?}"
            )));
        }
        grad[idx] = (up - down) / (2.0 * step);
    }
    Ok(grad)
}
