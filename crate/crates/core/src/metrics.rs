//! Post-hoc reports: normalized correlation levels, beampattern samples,
//! and the split of the objective into its two terms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{synthesize_waveform, PhaseMatrix, Scenario};
use crate::objective::{self, AngleSet, CorrelationCache};

pub const DEFAULT_DB_FLOOR: f64 = -300.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEntry {
    pub theta_i: f64,
    pub theta_j: f64,
    pub lag: usize,
    pub value: Complex64,
    pub level_db: f64,
}

/// Correlation levels for every ordered angle pair and every lag in the set,
/// ordered by `(i, j, lag)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub entries: Vec<CorrelationEntry>,
}

impl CorrelationReport {
    pub fn get(
        &self,
        i: usize,
        j: usize,
        lag_index: usize,
        num_lags: usize,
        k: usize,
    ) -> &CorrelationEntry {
        &self.entries[(i * k + j) * num_lags + lag_index]
    }
}

/// `C = 10 log10(|P_ij,n| / max(|P_ii,0|, |P_jj,0|))`, with exact zeros
/// reported as `floor_db`.
pub fn normalized_correlation_db(
    phi: &PhaseMatrix,
    scenario: &Scenario,
    floor_db: f64,
) -> Result<CorrelationReport> {
    let x = synthesize_waveform(phi);
    let cache = CorrelationCache::new(x.view(), scenario);
    let k = scenario.spec.num_corr_angles();
    let energy: Vec<f64> = cache
        .signals
        .rows()
        .into_iter()
        .map(|s| s.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let angles = &scenario.spec.corr_angles;
    let mut entries = Vec::with_capacity(k * k * cache.lags.len());
    for i in 0..k {
        for j in 0..k {
            let norm = energy[i].max(energy[j]);
            if norm <= 0.0 {
                return Err(Error::Domain(format!(
                    "zero normalizer for angle pair ({}, {})",
                    angles[i], angles[j]
                )));
            }
            for (l, &lag) in cache.lags.iter().enumerate() {
                let value = cache.values[l][[i, j]];
                let level_db = level_db(value.norm(), norm, floor_db);
                entries.push(CorrelationEntry {
                    theta_i: angles[i],
                    theta_j: angles[j],
                    lag,
                    value,
                    level_db,
                });
            }
        }
    }
    Ok(CorrelationReport { entries })
}

/// `10 log10(magnitude / normalizer)`, clamped below at `floor_db`.
pub fn level_db(magnitude: f64, normalizer: f64, floor_db: f64) -> f64 {
    if magnitude == 0.0 {
        floor_db
    } else {
        (10.0 * (magnitude / normalizer).log10()).max(floor_db)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeampatternTrace {
    pub theta_deg: Vec<f64>,
    pub power: Vec<f64>,
    /// `10 log10(P / max P)`, floored like the correlation report.
    pub power_db: Vec<f64>,
}

pub fn beampattern_trace(phi: &PhaseMatrix, scenario: &Scenario) -> BeampatternTrace {
    let power = objective::beampattern(phi, scenario, AngleSet::Beam);
    let peak = power.iter().cloned().fold(0.0, f64::max);
    let power_db = power
        .iter()
        .map(|&p| {
            if peak <= 0.0 {
                DEFAULT_DB_FLOOR
            } else {
                level_db(p, peak, DEFAULT_DB_FLOOR)
            }
        })
        .collect();
    BeampatternTrace {
        theta_deg: scenario.spec.beam_grid.clone(),
        power,
        power_db,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveDecomposition {
    pub e: f64,
    pub pc: f64,
    pub total: f64,
}

pub fn objective_decomposition(
    alpha: f64,
    phi: &PhaseMatrix,
    scenario: &Scenario,
) -> ObjectiveDecomposition {
    let x = synthesize_waveform(phi);
    let e = objective::mismatch_e_of(alpha, x.view(), scenario);
    let pc = objective::corr_penalty_of(x.view(), scenario);
    ObjectiveDecomposition {
        e,
        pc,
        total: e + pc,
    }
}
