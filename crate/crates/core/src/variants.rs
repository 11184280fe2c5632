//! Randomized lag-block selection and momentum extrapolation of the lag
//! iterates, both layered over the base solver loop.

use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{circular_diff_matrix, Scenario};
use crate::solver::{run, Algorithm, RunOutput, SolverConfig};

/// Each lag block is updated with its own probability in an iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SbcdPolicy {
    /// One probability per lag, in lag-set order.
    pub probabilities: Vec<f64>,
    pub p_min: f64,
}

impl SbcdPolicy {
    /// The same probability for every one of `num_lags` lags.
    pub fn uniform(fraction: f64, num_lags: usize) -> Self {
        SbcdPolicy {
            probabilities: vec![fraction; num_lags],
            p_min: fraction,
        }
    }

    pub fn validate(&self, num_lags: usize) -> Result<()> {
        if self.probabilities.len() != num_lags {
            return Err(Error::invalid(
                "sbcd_fraction",
                format!(
                    "{} probabilities for {num_lags} lags",
                    self.probabilities.len()
                ),
            ));
        }
        if !(self.p_min > 0.0 && self.p_min <= 1.0) {
            return Err(Error::invalid(
                "sbcd_fraction",
                format!("lower bound must lie in (0, 1], got {}", self.p_min),
            ));
        }
        if let Some(p) = self
            .probabilities
            .iter()
            .find(|p| !(**p >= self.p_min && **p <= 1.0))
        {
            return Err(Error::invalid(
                "sbcd_fraction",
                format!("probability {p} outside [{}, 1]", self.p_min),
            ));
        }
        Ok(())
    }
}

/// Independent Bernoulli draw per lag; `true` marks an updated block.
///
/// One uniform variate is consumed per lag regardless of the outcome, so the
/// generator advances identically for every policy.
pub fn sbcd_select<R: Rng + ?Sized>(
    num_lags: usize,
    policy: &SbcdPolicy,
    rng: &mut R,
) -> Vec<bool> {
    (0..num_lags)
        .map(|l| rng.gen::<f64>() < policy.probabilities[l])
        .collect()
}

/// Extrapolation weight schedule `gamma_k = (k - 1) / (k + t - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgdPolicy {
    pub t: f64,
}

impl Default for AgdPolicy {
    fn default() -> Self {
        AgdPolicy { t: 3.0 }
    }
}

impl AgdPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.t.is_nan() || self.t < 3.0 {
            return Err(Error::invalid(
                "agd_t",
                format!("must be at least 3, got {}", self.t),
            ));
        }
        Ok(())
    }

    /// `t = inf` disables momentum.
    pub fn gamma(&self, k: usize) -> f64 {
        if self.t.is_infinite() {
            return 0.0;
        }
        let k = k as f64;
        (k - 1.0) / (k + self.t - 1.0)
    }
}

/// `hat_next + gamma (hat_next - hat_prev)`, with the difference taken on the circle.
pub fn agd_extrapolate(hat_next: &Array2<f64>, hat_prev: &Array2<f64>, gamma: f64) -> Array2<f64> {
    let mut out = hat_next.clone();
    out.scaled_add(gamma, &circular_diff_matrix(hat_next, hat_prev));
    out
}

fn require(config: &SolverConfig, want: &str) -> Result<()> {
    if config.algorithm.name() != want {
        return Err(Error::invalid(
            "algorithm",
            format!("expected {want}, got {}", config.algorithm.name()),
        ));
    }
    Ok(())
}

pub fn run_sbcd(scenario: &Scenario, config: SolverConfig) -> Result<RunOutput> {
    require(&config, "sbcd")?;
    run(scenario, config)
}

pub fn run_agd(scenario: &Scenario, config: SolverConfig) -> Result<RunOutput> {
    require(&config, "agd")?;
    run(scenario, config)
}

/// Convenience constructor for a block-selection run with a uniform fraction.
pub fn sbcd_config(base: SolverConfig, fraction: f64, num_lags: usize) -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::Sbcd(SbcdPolicy::uniform(fraction, num_lags)),
        ..base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_probability_selects_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let policy = SbcdPolicy::uniform(1.0, 17);
        for _ in 0..1000 {
            assert!(sbcd_select(17, &policy, &mut rng).iter().all(|b| *b));
        }
    }

    #[test]
    fn same_seed_same_subsets() {
        let policy = SbcdPolicy::uniform(0.25, 17);
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert_eq!(
                sbcd_select(17, &policy, &mut a),
                sbcd_select(17, &policy, &mut b)
            );
        }
    }

    #[test]
    fn mean_subset_size_quarter() {
        let policy = SbcdPolicy::uniform(0.25, 17);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 10_000;
        let total: usize = (0..draws)
            .map(|_| {
                sbcd_select(17, &policy, &mut rng)
                    .iter()
                    .filter(|b| **b)
                    .count()
            })
            .sum();
        let mean = total as f64 / draws as f64;
        let sigma = (17.0f64 * 0.25 * 0.75 / draws as f64).sqrt();
        assert!((mean - 4.25).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn policy_validation() {
        assert!(SbcdPolicy::uniform(0.0, 3).validate(3).is_err());
        assert!(SbcdPolicy::uniform(1.5, 3).validate(3).is_err());
        assert!(SbcdPolicy::uniform(0.5, 3).validate(4).is_err());
        assert!(SbcdPolicy::uniform(0.5, 3).validate(3).is_ok());
        assert!(AgdPolicy { t: 2.5 }.validate().is_err());
        assert!(AgdPolicy { t: f64::NAN }.validate().is_err());
        assert!(AgdPolicy { t: f64::INFINITY }.validate().is_ok());
    }

    #[test]
    fn gamma_schedule() {
        let p = AgdPolicy { t: 3.0 };
        assert_eq!(p.gamma(1), 0.0);
        assert!((p.gamma(3) - 0.4).abs() < 1e-15);
        for k in 1..1000 {
            let g = p.gamma(k);
            assert!((0.0..1.0).contains(&g));
        }
        assert_eq!(AgdPolicy { t: f64::INFINITY }.gamma(50), 0.0);
    }

    #[test]
    fn extrapolation_cases() {
        let a = Array2::from_elem((2, 3), 1.0);
        let b = Array2::from_elem((2, 3), 0.5);
        assert_eq!(agd_extrapolate(&a, &b, 0.0), a);
        assert_eq!(agd_extrapolate(&a, &a, 0.7), a);
        assert!(agd_extrapolate(&a, &b, 0.4)
            .iter()
            .all(|v| (v - 1.2).abs() < 1e-15));
    }
}
