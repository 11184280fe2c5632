//! Problem definition: array geometry, desired beampattern, correlation
//! targets, and the phase parameterization of constant-modulus waveforms.

use std::f64::consts::{PI, TAU};

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::objective;

/// Lower end of the feasible scaling interval, relative to `alpha_max`.
pub const ALPHA_MIN_RATIO: f64 = 1e-8;

/// Full statement of a waveform design problem.
///
/// Angles are in degrees. Lags are sample delays at which auto- and
/// cross-correlations are penalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub num_antennas: usize,
    pub waveform_length: usize,
    pub beam_grid: Vec<f64>,
    pub desired_pattern: Vec<f64>,
    pub corr_angles: Vec<f64>,
    pub lags: Vec<usize>,
    pub weight_ac: f64,
    pub weight_cc: f64,
    pub alpha_max: f64,
}

impl DesignSpec {
    /// Two-mainlobe design: unit power within `halfwidth` degrees of each
    /// center, zero elsewhere, with correlations suppressed at the centers.
    pub fn mainlobes(
        num_antennas: usize,
        waveform_length: usize,
        grid_step_deg: f64,
        centers: &[f64],
        halfwidth: f64,
        lags: Vec<usize>,
    ) -> Result<Self> {
        let beam_grid = uniform_grid(grid_step_deg)?;
        let bands: Vec<(f64, f64)> = centers
            .iter()
            .map(|c| (c - halfwidth, c + halfwidth))
            .collect();
        let desired_pattern = band_pattern(&beam_grid, &bands);
        let p_max = desired_pattern.iter().cloned().fold(0.0, f64::max);
        let spec = DesignSpec {
            num_antennas,
            waveform_length,
            beam_grid,
            desired_pattern,
            corr_angles: centers.to_vec(),
            lags,
            weight_ac: 10.0,
            weight_cc: 10.0,
            alpha_max: default_alpha_max(num_antennas, waveform_length, p_max),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn num_beam_angles(&self) -> usize {
        self.beam_grid.len()
    }

    pub fn num_corr_angles(&self) -> usize {
        self.corr_angles.len()
    }

    pub fn desired_max(&self) -> f64 {
        self.desired_pattern.iter().cloned().fold(0.0, f64::max)
    }

    pub fn lag_index(&self, lag: usize) -> Option<usize> {
        self.lags.binary_search(&lag).ok()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_antennas < 2 {
            return Err(Error::invalid("num_antennas", "must be at least 2"));
        }
        if self.waveform_length < 2 {
            return Err(Error::invalid("waveform_length", "must be at least 2"));
        }
        if self.beam_grid.is_empty() {
            return Err(Error::invalid("beam_grid", "must not be empty"));
        }
        if let Some(bad) = self.beam_grid.iter().find(|t| !angle_in_range(**t)) {
            return Err(Error::invalid(
                "beam_grid",
                format!("angle {bad} outside the open interval (-90, 90)"),
            ));
        }
        if self.beam_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("beam_grid", "must be strictly increasing"));
        }
        if self.beam_grid.len() > 2 {
            let step = self.beam_grid[1] - self.beam_grid[0];
            let uneven = self
                .beam_grid
                .windows(2)
                .any(|w| ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs().max(1.0));
            if uneven {
                return Err(Error::invalid("beam_grid", "spacing must be uniform"));
            }
        }
        if self.desired_pattern.len() != self.beam_grid.len() {
            return Err(Error::invalid(
                "desired_pattern",
                format!(
                    "has {} entries but beam_grid has {}",
                    self.desired_pattern.len(),
                    self.beam_grid.len()
                ),
            ));
        }
        if self
            .desired_pattern
            .iter()
            .any(|p| !p.is_finite() || *p < 0.0)
        {
            return Err(Error::invalid(
                "desired_pattern",
                "entries must be finite and nonnegative",
            ));
        }
        if !self.desired_pattern.iter().any(|p| *p > 0.0) {
            return Err(Error::invalid(
                "desired_pattern",
                "at least one entry must be positive",
            ));
        }
        if self.corr_angles.is_empty() {
            return Err(Error::invalid(
                "corr_angles",
                "must contain at least one angle",
            ));
        }
        if let Some(bad) = self.corr_angles.iter().find(|t| !angle_in_range(**t)) {
            return Err(Error::invalid(
                "corr_angles",
                format!("angle {bad} outside the open interval (-90, 90)"),
            ));
        }
        if self.lags.is_empty() {
            return Err(Error::invalid("lags", "must contain at least one lag"));
        }
        if self.lags.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "lags",
                "must be unique and sorted ascending",
            ));
        }
        let max_lag = *self.lags.last().unwrap();
        if max_lag >= self.waveform_length {
            return Err(Error::invalid(
                "lags",
                format!(
                    "lag {max_lag} exceeds the bound N-1 = {}",
                    self.waveform_length - 1
                ),
            ));
        }
        for (field, w) in [("weight_ac", self.weight_ac), ("weight_cc", self.weight_cc)] {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(field, "must be finite and nonnegative"));
            }
        }
        if !self.alpha_max.is_finite() || self.alpha_max <= 0.0 {
            return Err(Error::invalid("alpha_max", "must be finite and positive"));
        }
        Ok(())
    }
}

/// Upper bound on the beampattern scale that the optimum never reaches:
/// beampattern values are at most `N * M^2`.
pub fn default_alpha_max(num_antennas: usize, waveform_length: usize, desired_max: f64) -> f64 {
    let m = num_antennas as f64;
    2.0 * waveform_length as f64 * m * m / desired_max
}

/// Angles `k * step` strictly inside (-90, 90), ascending.
pub fn uniform_grid(step_deg: f64) -> Result<Vec<f64>> {
    if !step_deg.is_finite() || step_deg <= 0.0 || step_deg >= 90.0 {
        return Err(Error::invalid("grid_step_deg", "must lie in (0, 90)"));
    }
    let kmax = (90.0 / step_deg - 1e-9).floor() as i64;
    Ok((-kmax..=kmax).map(|k| k as f64 * step_deg).collect())
}

/// Indicator pattern: 1 on the closed bands, 0 elsewhere.
pub fn band_pattern(grid: &[f64], bands: &[(f64, f64)]) -> Vec<f64> {
    const EDGE: f64 = 1e-9;
    grid.iter()
        .map(|&t| {
            let inside = bands
                .iter()
                .any(|&(lo, hi)| t >= lo - EDGE && t <= hi + EDGE);
            if inside {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

fn angle_in_range(theta: f64) -> bool {
    theta.is_finite() && theta > -90.0 && theta < 90.0
}

/// Real N x M phase matrix with every entry in `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix(Array2<f64>);

impl PhaseMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|v| !(0.0..TAU).contains(*v)) {
            return Err(Error::Domain(format!("phase {bad} outside [0, 2pi)")));
        }
        Ok(PhaseMatrix(entries))
    }

    pub fn zeros(waveform_length: usize, num_antennas: usize) -> Self {
        PhaseMatrix(Array2::zeros((waveform_length, num_antennas)))
    }

    /// I.i.d. uniform phases on `[0, 2pi)`, drawn row-major.
    pub fn random<R: Rng + ?Sized>(
        waveform_length: usize,
        num_antennas: usize,
        rng: &mut R,
    ) -> Self {
        let entries =
            Array2::from_shape_fn((waveform_length, num_antennas), |_| rng.gen_range(0.0..TAU));
        PhaseMatrix(entries)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    pub fn waveform_length(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_antennas(&self) -> usize {
        self.0.ncols()
    }

    /// Wraps in place; the caller guarantees finite entries.
    pub(crate) fn from_raw_wrapping(mut raw: Array2<f64>) -> Self {
        raw.mapv_inplace(wrap_scalar);
        PhaseMatrix(raw)
    }
}

#[inline]
fn wrap_scalar(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly 2pi
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces each entry modulo 2pi into `[0, 2pi)`.
pub fn wrap_phase(raw: &Array2<f64>) -> Result<PhaseMatrix> {
    if let Some(bad) = raw.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("phase entry {bad}")));
    }
    Ok(PhaseMatrix::from_raw_wrapping(raw.clone()))
}

/// Signed difference `a - b` taken on the circle, in `[-pi, pi]`.
///
/// Returns `a - b` untouched whenever it already lies in that interval.
#[inline]
pub fn circular_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() <= PI {
        d
    } else {
        d - TAU * (d / TAU).round()
    }
}

pub fn circular_diff_matrix(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let mut out = a.clone();
    out.zip_mut_with(b, |x, &y| *x = circular_diff(*x, y));
    out
}

/// Projection onto `[ALPHA_MIN_RATIO * alpha_max, alpha_max]`.
pub fn project_alpha(x: f64, alpha_max: f64) -> f64 {
    x.clamp(ALPHA_MIN_RATIO * alpha_max, alpha_max)
}

/// ULA steering vector with half-wavelength spacing: element `m` is
/// `exp(j * pi * m * sin theta)`.
pub fn steering_vector(theta_deg: f64, num_antennas: usize) -> Result<Array1<Complex64>> {
    if !angle_in_range(theta_deg) {
        return Err(Error::Domain(format!(
            "steering angle {theta_deg} outside (-90, 90)"
        )));
    }
    if num_antennas == 0 {
        return Err(Error::Domain("antenna count must be positive".into()));
    }
    let phase_step = PI * theta_deg.to_radians().sin();
    Ok(Array1::from_shape_fn(num_antennas, |m| {
        Complex64::from_polar(1.0, phase_step * m as f64)
    }))
}

/// `x[i, m] = exp(j * phi[i, m])`.
pub fn synthesize_waveform(phi: &PhaseMatrix) -> Array2<Complex64> {
    phi.as_array().mapv(|p| Complex64::from_polar(1.0, p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzConstants {
    /// Scaling-factor gradient constant.
    pub alpha: f64,
    /// Phase gradient constant of the mismatch term.
    pub phi: f64,
    /// Per-lag correlation gradient constant, shared by all lags.
    pub lag: f64,
}

impl LipschitzConstants {
    pub fn scaled(&self, factor: f64) -> Self {
        LipschitzConstants {
            alpha: self.alpha * factor,
            phi: self.phi * factor,
            lag: self.lag * factor,
        }
    }
}

/// Immutable precomputed problem data.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: DesignSpec,
    /// One row per beam-grid angle.
    pub steering_beam: Array2<Complex64>,
    /// One row per correlation angle.
    pub steering_corr: Array2<Complex64>,
    /// Sum of squared desired-pattern values.
    pub p_scalar: f64,
    pub lipschitz: LipschitzConstants,
}

impl Scenario {
    pub fn new(spec: DesignSpec) -> Result<Self> {
        spec.validate()?;
        let m = spec.num_antennas;
        let steering_beam = steering_rows(&spec.beam_grid, m)?;
        let steering_corr = steering_rows(&spec.corr_angles, m)?;
        let p_scalar: f64 = spec.desired_pattern.iter().map(|p| p * p).sum();
        let lipschitz = objective::lipschitz_constants(&spec, p_scalar);
        Ok(Scenario {
            spec,
            steering_beam,
            steering_corr,
            p_scalar,
            lipschitz,
        })
    }

    pub fn num_antennas(&self) -> usize {
        self.spec.num_antennas
    }

    pub fn waveform_length(&self) -> usize {
        self.spec.waveform_length
    }

    pub fn num_lags(&self) -> usize {
        self.spec.lags.len()
    }
}

/// Alias for [`Scenario::new`].
pub fn build_scenario(spec: DesignSpec) -> Result<Scenario> {
    Scenario::new(spec)
}

fn steering_rows(angles: &[f64], num_antennas: usize) -> Result<Array2<Complex64>> {
    let mut out = Array2::zeros((angles.len(), num_antennas));
    for (mut row, &theta) in out.rows_mut().into_iter().zip(angles) {
        row.assign(&steering_vector(theta, num_antennas)?);
    }
    Ok(out)
}
