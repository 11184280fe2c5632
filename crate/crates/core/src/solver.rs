//! Consensus ADMM over the per-lag splitting of the correlation penalty.
//!
//! The consensus phase `Phi` carries the `[0, 2pi)` box; one unconstrained
//! copy `Phi_n` and one multiplier `Lambda_n` exist per lag. Each iteration
//! takes a majorized step in `(alpha, Phi)` from a single snapshot, then
//! updates every lag block independently against the new `Phi`.
//!
//! Phase differences between a wrapped and an unwrapped variable are taken
//! on the circle (see [`crate::model::circular_diff`]). Every term of the iteration is
//! invariant under shifting a phase entry by `2pi`, so this only removes
//! spurious `2pi` jumps after a wrap and never changes the algebra.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::ObjectiveDecomposition;
use crate::model::{
    circular_diff_matrix, project_alpha, synthesize_waveform, LipschitzConstants, PhaseMatrix,
    Scenario,
};
use crate::objective::{self, evaluate_mismatch, MismatchEval};
use crate::variants::{sbcd_select, AgdPolicy, SbcdPolicy};

/// Fallback threshold for the gradient-based penalty.
const RHO_FLOOR: f64 = 1e-12;
/// Penalty multiple of `L_n` that certifies sufficient descent.
pub const THEORY_RHO_FACTOR: f64 = 9.0;
/// The block-selection generator uses this stream of the run seed.
pub const SBCD_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMode {
    /// `rho_n = 9 L_n`.
    Theory,
    /// `rho_n = max |grad f_n(Phi^1)|`, falling back to `9 L_n` when that vanishes.
    Practical,
}

/// Starting multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualInit {
    /// [`DualInit::Gradient`] under [`RhoMode::Theory`], where the descent
    /// certificate applies, and [`DualInit::Zero`] otherwise.
    Auto,
    /// `Lambda_n^1 = -grad f_n(Phi^1)`: with `Phi_n^1 = Phi^1` this satisfies
    /// the multiplier identity already at `k = 1`, so the descent bound
    /// covers the first iteration too.
    Gradient,
    /// `Lambda_n^1 = 0`. The first iteration is then outside the descent bound.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Admm,
    Sbcd(SbcdPolicy),
    Agd(AgdPolicy),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Admm => "admm",
            Algorithm::Sbcd(_) => "sbcd",
            Algorithm::Agd(_) => "agd",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub rho_mode: RhoMode,
    pub tol_residual: f64,
    pub max_iterations: usize,
    pub rng_seed: u64,
    pub lipschitz_scale: f64,
    pub record_lagrangian: bool,
    pub dual_init: DualInit,
    pub algorithm: Algorithm,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rho_mode: RhoMode::Practical,
            tol_residual: 1e-4,
            max_iterations: 60_000,
            rng_seed: 0,
            lipschitz_scale: 1.0,
            record_lagrangian: false,
            dual_init: DualInit::Auto,
            algorithm: Algorithm::Admm,
            threads: None,
        }
    }
}

impl SolverConfig {
    /// The multiplier start actually used, with [`DualInit::Auto`] resolved.
    pub fn resolved_dual_init(&self) -> DualInit {
        match (self.dual_init, self.rho_mode) {
            (DualInit::Auto, RhoMode::Theory) => DualInit::Gradient,
            (DualInit::Auto, RhoMode::Practical) => DualInit::Zero,
            (d, _) => d,
        }
    }

    pub fn validate(&self, num_lags: usize) -> Result<()> {
        if !(self.tol_residual > 0.0 && self.tol_residual.is_finite()) {
            return Err(Error::invalid(
                "tol_residual",
                format!("must be positive and finite, got {}", self.tol_residual),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be at least 1"));
        }
        if !(self.lipschitz_scale > 0.0 && self.lipschitz_scale.is_finite()) {
            return Err(Error::invalid(
                "lipschitz_scale",
                format!("must be positive and finite, got {}", self.lipschitz_scale),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        match &self.algorithm {
            Algorithm::Admm => Ok(()),
            Algorithm::Sbcd(p) => p.validate(num_lags),
            Algorithm::Agd(p) => p.validate(),
        }
    }
}

/// Mutable iterate. Lag-indexed vectors follow the order of the lag set.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub alpha: f64,
    pub phi: PhaseMatrix,
    pub phi_n: Vec<Array2<f64>>,
    /// `Phi_n - Phi` on the circle. Carried next to `phi_n` so that the
    /// multiplier update never subtracts two nearby phases.
    pub offset_n: Vec<Array2<f64>>,
    pub lambda_n: Vec<Array2<f64>>,
    pub rho_n: Vec<f64>,
    /// Index of the current iterate; the initial point is `k = 1`.
    pub k: usize,
    /// Previous un-extrapolated lag iterates, present for the momentum variant.
    pub phi_n_hat: Option<Vec<Array2<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Iteration number; the record describes iterate `k + 1`.
    pub k: usize,
    pub e: f64,
    pub pc: f64,
    pub objective: f64,
    pub alpha: f64,
    pub res_consensus: f64,
    pub res_successive: f64,
    pub lagrangian: Option<f64>,
    pub gamma: Option<f64>,
    pub active_lags: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ResidualTolerance,
    IterationCap,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::ResidualTolerance => "residual-tolerance",
            StopReason::IterationCap => "iteration-cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub alpha: f64,
    pub phi: PhaseMatrix,
    pub waveform: Array2<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub solution: Solution,
    pub trace: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    pub initial: ObjectiveDecomposition,
    pub initial_lagrangian: f64,
    pub rho_n: Vec<f64>,
    pub lipschitz: LipschitzConstants,
    /// Iterations whose recorded Lagrangian rose above the float slack.
    pub descent_violations: usize,
}

/// Float slack for the monotone-Lagrangian audit.
pub fn descent_slack(value: f64) -> f64 {
    1e-9 * (1.0 + value.abs())
}

fn frob(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(u, v)| u * v).sum()
}

/// Effective Lipschitz constants after the configured scale.
pub fn effective_lipschitz(scenario: &Scenario, config: &SolverConfig) -> LipschitzConstants {
    scenario.lipschitz.scaled(config.lipschitz_scale)
}

/// Per-lag penalties for the given mode, from the lag gradients at `Phi^1`.
pub fn select_rho(
    lipschitz: &LipschitzConstants,
    mode: RhoMode,
    lag_grads: &[Array2<f64>],
) -> Vec<f64> {
    let theory = THEORY_RHO_FACTOR * lipschitz.lag;
    lag_grads
        .iter()
        .map(|g| match mode {
            RhoMode::Theory => theory,
            RhoMode::Practical => {
                let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if peak < RHO_FLOOR {
                    theory
                } else {
                    peak
                }
            }
        })
        .collect()
}

fn lag_gradients(scenario: &Scenario, phi: &PhaseMatrix) -> Vec<Array2<f64>> {
    let x = synthesize_waveform(phi);
    scenario
        .spec
        .lags
        .par_iter()
        .map(|&lag| objective::grad_f_lag_of(x.view(), scenario, lag))
        .collect()
}

/// Seeded random `Phi^1`, `Phi_n^1 = Phi^1`, multipliers per
/// [`DualInit`], and the least-squares scale `alpha^1`.
pub fn init_state(scenario: &Scenario, config: &SolverConfig) -> SolverState {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let phi = PhaseMatrix::random(
        scenario.waveform_length(),
        scenario.num_antennas(),
        &mut rng,
    );
    let lipschitz = effective_lipschitz(scenario, config);
    let grads = lag_gradients(scenario, &phi);
    let rho_n = select_rho(&lipschitz, config.rho_mode, &grads);
    let alpha = least_squares_alpha(scenario, &phi);
    let lags = scenario.num_lags();
    let phi_n = vec![phi.as_array().clone(); lags];
    let offset_n = vec![Array2::zeros(phi.as_array().raw_dim()); lags];
    let lambda_n = match config.resolved_dual_init() {
        DualInit::Gradient => grads.into_iter().map(|g| -g).collect(),
        _ => vec![Array2::zeros(phi.as_array().raw_dim()); lags],
    };
    let phi_n_hat = match config.algorithm {
        Algorithm::Agd(_) => Some(phi_n.clone()),
        _ => None,
    };
    SolverState {
        alpha,
        phi_n,
        offset_n,
        lambda_n,
        rho_n,
        k: 1,
        phi_n_hat,
        phi,
    }
}

/// `project_alpha(sum Pbar P(Phi) / p)`.
pub fn least_squares_alpha(scenario: &Scenario, phi: &PhaseMatrix) -> f64 {
    let power = objective::beampattern(phi, scenario, objective::AngleSet::Beam);
    let cross: f64 = power
        .iter()
        .zip(&scenario.spec.desired_pattern)
        .map(|(p, d)| p * d)
        .sum();
    project_alpha(cross / scenario.p_scalar, scenario.spec.alpha_max)
}

/// Majorized step in `(alpha, Phi)` from the gradients at the current snapshot.
pub fn update_alpha_phi(
    state: &SolverState,
    grad_alpha: f64,
    grad_phi: &Array2<f64>,
    lipschitz: &LipschitzConstants,
    alpha_max: f64,
) -> (f64, PhaseMatrix) {
    let alpha = project_alpha(state.alpha - grad_alpha / lipschitz.alpha, alpha_max);
    let phi = state.phi.as_array();
    let mut pull = -grad_phi;
    let mut denom = lipschitz.phi;
    for ((offset, lam), &rho) in state.offset_n.iter().zip(&state.lambda_n).zip(&state.rho_n) {
        pull += lam;
        pull.scaled_add(rho, offset);
        denom += rho;
    }
    pull /= denom;
    pull += phi;
    (alpha, PhaseMatrix::from_raw_wrapping(pull))
}

/// Consensus offset of the lag minimizer,
/// `Phi_n - Phi = -(grad f_n(Phi) + Lambda_n) / (rho_n + L_n)`.
pub fn lag_offset(
    grad_f: &Array2<f64>,
    lambda: &Array2<f64>,
    rho: f64,
    lag_lipschitz: f64,
) -> Array2<f64> {
    -(grad_f + lambda) / (rho + lag_lipschitz)
}

/// `Phi_n = Phi - (grad f_n(Phi) + Lambda_n) / (rho_n + L_n)`, left unwrapped.
pub fn update_phi_n(
    phi_next: &PhaseMatrix,
    grad_f: &Array2<f64>,
    lambda: &Array2<f64>,
    rho: f64,
    lag_lipschitz: f64,
) -> Array2<f64> {
    phi_next.as_array() + &lag_offset(grad_f, lambda, rho, lag_lipschitz)
}

/// `Lambda_n + rho_n (Phi_n - Phi)`, given the offset `Phi_n - Phi`.
pub fn update_lambda_n(lambda: &Array2<f64>, offset_next: &Array2<f64>, rho: f64) -> Array2<f64> {
    let mut out = lambda.clone();
    out.scaled_add(rho, offset_next);
    out
}

/// `(sum_n ||Phi_n' - Phi'||_F, sum_n ||Phi_n' - Phi_n||_F)`.
pub fn residuals(
    offset_next: &[Array2<f64>],
    phi_n_next: &[Array2<f64>],
    phi_n_prev: &[Array2<f64>],
) -> (f64, f64) {
    let consensus = offset_next.iter().map(frob).sum();
    let successive = phi_n_next
        .iter()
        .zip(phi_n_prev)
        .map(|(a, b)| frob(&circular_diff_matrix(a, b)))
        .sum();
    (consensus, successive)
}

fn lag_lagrangian_term(
    scenario: &Scenario,
    lag: usize,
    phi_n: &Array2<f64>,
    offset: &Array2<f64>,
    lambda: &Array2<f64>,
    rho: f64,
) -> f64 {
    let spec = &scenario.spec;
    let xn = phi_n.mapv(|p| Complex64::from_polar(1.0, p));
    let signals = objective::synthesized_signals(xn.view(), scenario.steering_corr.view());
    let block = objective::correlation_block(signals.view(), lag);
    let f = objective::f_from_block(block.view(), lag, spec.weight_ac, spec.weight_cc);
    f + dot(lambda, offset) + 0.5 * rho * dot(offset, offset)
}

/// `h(alpha, Phi) + sum_n [f_n(Phi_n) + <Lambda_n, Phi_n - Phi> + rho_n/2 ||Phi_n - Phi||^2]`.
pub fn augmented_lagrangian(state: &SolverState, scenario: &Scenario) -> f64 {
    let e = objective::mismatch_e(state.alpha, &state.phi, scenario);
    e + lagrangian_lag_terms(state, scenario)
}

fn lagrangian_lag_terms(state: &SolverState, scenario: &Scenario) -> f64 {
    let terms: Vec<f64> = scenario
        .spec
        .lags
        .par_iter()
        .enumerate()
        .map(|(l, &lag)| {
            lag_lagrangian_term(
                scenario,
                lag,
                &state.phi_n[l],
                &state.offset_n[l],
                &state.lambda_n[l],
                state.rho_n[l],
            )
        })
        .collect();
    terms.iter().sum()
}

struct LagOutcome {
    f: f64,
    update: Option<LagUpdate>,
}

struct LagUpdate {
    phi_n: Array2<f64>,
    offset: Array2<f64>,
    lambda: Array2<f64>,
    hat: Option<Array2<f64>>,
}

fn non_finite(iteration: usize, what: &str) -> Error {
    Error::Diverged {
        iteration,
        what: what.to_string(),
    }
}

/// Stepwise driver. Holds the scenario, the current iterate, and the
/// mismatch evaluation at that iterate so each gradient is computed once.
pub struct Solver<'a> {
    scenario: &'a Scenario,
    config: SolverConfig,
    lipschitz: LipschitzConstants,
    state: SolverState,
    current: MismatchEval,
    block_rng: ChaCha8Rng,
    pool: Arc<rayon::ThreadPool>,
    last_lagrangian: Option<f64>,
    descent_violations: usize,
}

impl<'a> Solver<'a> {
    pub fn new(scenario: &'a Scenario, config: SolverConfig) -> Result<Self> {
        scenario.spec.validate()?;
        config.validate(scenario.num_lags())?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::invalid("threads", e.to_string()))?;
        let pool = Arc::new(pool);
        let lipschitz = effective_lipschitz(scenario, &config);
        let state = pool.install(|| init_state(scenario, &config));
        let x = synthesize_waveform(&state.phi);
        let current = pool.install(|| evaluate_mismatch(state.alpha, x.view(), scenario));
        let mut block_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        block_rng.set_stream(SBCD_STREAM);
        let mut solver = Solver {
            scenario,
            config,
            lipschitz,
            state,
            current,
            block_rng,
            pool,
            last_lagrangian: None,
            descent_violations: 0,
        };
        if solver.config.record_lagrangian {
            solver.last_lagrangian = Some(solver.lagrangian());
        }
        Ok(solver)
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn lipschitz(&self) -> &LipschitzConstants {
        &self.lipschitz
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    pub fn descent_violations(&self) -> usize {
        self.descent_violations
    }

    /// Objective split at the current iterate.
    pub fn decomposition(&self) -> ObjectiveDecomposition {
        let x = synthesize_waveform(&self.state.phi);
        let pc = self
            .pool
            .install(|| objective::corr_penalty_of(x.view(), self.scenario));
        ObjectiveDecomposition {
            e: self.current.e,
            pc,
            total: self.current.e + pc,
        }
    }

    /// Augmented Lagrangian at the current iterate.
    pub fn lagrangian(&self) -> f64 {
        self.current.e
            + self
                .pool
                .install(|| lagrangian_lag_terms(&self.state, self.scenario))
    }

    /// One full iteration; returns its diagnostics.
    pub fn step(&mut self) -> Result<IterationRecord> {
        let pool = Arc::clone(&self.pool);
        pool.install(|| self.step_inner())
    }

    fn step_inner(&mut self) -> Result<IterationRecord> {
        let k = self.state.k;
        let scenario = self.scenario;
        let spec = &scenario.spec;
        if !self.current.grad_alpha.is_finite()
            || self.current.grad_phi.iter().any(|g| !g.is_finite())
        {
            return Err(non_finite(k, "mismatch gradient"));
        }

        let (alpha, phi) = update_alpha_phi(
            &self.state,
            self.current.grad_alpha,
            &self.current.grad_phi,
            &self.lipschitz,
            spec.alpha_max,
        );
        if !alpha.is_finite() || phi.as_array().iter().any(|p| !p.is_finite()) {
            return Err(non_finite(k, "consensus phase update"));
        }

        let active: Vec<bool> = match &self.config.algorithm {
            Algorithm::Sbcd(policy) => {
                sbcd_select(scenario.num_lags(), policy, &mut self.block_rng)
            }
            _ => vec![true; scenario.num_lags()],
        };
        let gamma = match &self.config.algorithm {
            Algorithm::Agd(policy) => Some(policy.gamma(k)),
            _ => None,
        };

        let x = synthesize_waveform(&phi);
        let signals = objective::synthesized_signals(x.view(), scenario.steering_corr.view());
        let lag_l = self.lipschitz.lag;
        let state = &self.state;
        let outcomes: Vec<LagOutcome> = spec
            .lags
            .par_iter()
            .enumerate()
            .map(|(l, &lag)| {
                let block = objective::correlation_block(signals.view(), lag);
                let f = objective::f_from_block(block.view(), lag, spec.weight_ac, spec.weight_cc);
                if !active[l] {
                    return LagOutcome { f, update: None };
                }
                let grad = objective::grad_f_from_signals(
                    x.view(),
                    signals.view(),
                    scenario.steering_corr.view(),
                    block.view(),
                    lag,
                    spec.weight_ac,
                    spec.weight_cc,
                );
                let mut offset = lag_offset(&grad, &state.lambda_n[l], state.rho_n[l], lag_l);
                let minimizer = phi.as_array() + &offset;
                let (phi_n, hat) = match (gamma, &state.phi_n_hat) {
                    (Some(g), Some(prev)) => {
                        let push = circular_diff_matrix(&minimizer, &prev[l]) * g;
                        offset += &push;
                        (&minimizer + &push, Some(minimizer))
                    }
                    _ => (minimizer, None),
                };
                let lambda = update_lambda_n(&state.lambda_n[l], &offset, state.rho_n[l]);
                LagOutcome {
                    f,
                    update: Some(LagUpdate {
                        phi_n,
                        offset,
                        lambda,
                        hat,
                    }),
                }
            })
            .collect();

        let mut pc = 0.0;
        let mut phi_n = Vec::with_capacity(outcomes.len());
        let mut offset_n = Vec::with_capacity(outcomes.len());
        let mut lambda_n = Vec::with_capacity(outcomes.len());
        let mut hats = self.state.phi_n_hat.clone();
        for (l, outcome) in outcomes.into_iter().enumerate() {
            pc += outcome.f;
            match outcome.update {
                Some(u) => {
                    phi_n.push(u.phi_n);
                    offset_n.push(u.offset);
                    lambda_n.push(u.lambda);
                    if let (Some(h), Some(hs)) = (u.hat, hats.as_mut()) {
                        hs[l] = h;
                    }
                }
                None => {
                    offset_n.push(circular_diff_matrix(&self.state.phi_n[l], phi.as_array()));
                    phi_n.push(self.state.phi_n[l].clone());
                    lambda_n.push(self.state.lambda_n[l].clone());
                }
            }
        }
        let (res_consensus, res_successive) = residuals(&offset_n, &phi_n, &self.state.phi_n);
        if !pc.is_finite() || !res_consensus.is_finite() || !res_successive.is_finite() {
            return Err(non_finite(k, "lag block update"));
        }

        let eval = evaluate_mismatch(alpha, x.view(), scenario);
        if !eval.e.is_finite() {
            return Err(non_finite(k, "beampattern mismatch"));
        }

        self.state = SolverState {
            alpha,
            phi,
            phi_n,
            offset_n,
            lambda_n,
            rho_n: std::mem::take(&mut self.state.rho_n),
            k: k + 1,
            phi_n_hat: hats,
        };
        self.current = eval;

        let lagrangian = if self.config.record_lagrangian {
            let value = self.current.e + lagrangian_lag_terms(&self.state, scenario);
            if !value.is_finite() {
                return Err(non_finite(k, "augmented Lagrangian"));
            }
            if let Some(prev) = self.last_lagrangian {
                if value > prev + descent_slack(prev) {
                    self.descent_violations += 1;
                    log::warn!(
                        "iteration {k}: augmented Lagrangian rose from {prev:e} to {value:e}"
                    );
                }
            }
            self.last_lagrangian = Some(value);
            Some(value)
        } else {
            None
        };

        Ok(IterationRecord {
            k,
            e: self.current.e,
            pc,
            objective: self.current.e + pc,
            alpha,
            res_consensus,
            res_successive,
            lagrangian,
            gamma,
            active_lags: active.iter().filter(|a| **a).count(),
        })
    }

    fn solution(&self) -> Solution {
        Solution {
            alpha: self.state.alpha,
            phi: self.state.phi.clone(),
            waveform: synthesize_waveform(&self.state.phi),
        }
    }

    /// Runs to termination, collecting the trace.
    pub fn run(self) -> Result<RunOutput> {
        self.run_with(|_| Ok(()))
    }

    /// Runs to termination, handing each record to `observer` as it is produced.
    pub fn run_with<F>(mut self, mut observer: F) -> Result<RunOutput>
    where
        F: FnMut(&IterationRecord) -> Result<()>,
    {
        let initial = self.decomposition();
        let initial_lagrangian = self.last_lagrangian.unwrap_or_else(|| self.lagrangian());
        let tol = self.config.tol_residual;
        let mut trace = Vec::new();
        let mut stop_reason = StopReason::IterationCap;
        for _ in 0..self.config.max_iterations {
            let record = self.step()?;
            observer(&record)?;
            let done = record.res_consensus < tol && record.res_successive < tol;
            trace.push(record);
            if done {
                stop_reason = StopReason::ResidualTolerance;
                break;
            }
        }
        log::info!(
            "{} stopped after {} iterations ({})",
            self.config.algorithm.name(),
            trace.len(),
            stop_reason.as_str()
        );
        Ok(RunOutput {
            solution: self.solution(),
            trace,
            stop_reason,
            initial,
            initial_lagrangian,
            rho_n: self.state.rho_n.clone(),
            lipschitz: self.lipschitz,
            descent_violations: self.descent_violations,
        })
    }
}

/// Builds a solver and runs it to termination.
pub fn run(scenario: &Scenario, config: SolverConfig) -> Result<RunOutput> {
    Solver::new(scenario, config)?.run()
}
