//! Constant-modulus probing waveform design for collocated MIMO radar.
//!
//! The design problem matches a desired transmit beampattern while
//! suppressing spatial auto- and cross-correlation sidelobes at a set of
//! angles and lags. Waveform entries are parameterized by phase so the
//! constant-modulus constraint holds by construction, and the resulting
//! quartic problem is solved with a consensus ADMM whose per-lag blocks
//! run in parallel.
//!
//! Module map:
//! - [`model`]: problem data, steering vectors, phase projections.
//! - [`objective`]: beampattern mismatch, correlation penalty, gradients,
//!   Lipschitz constants.
//! - [`solver`]: the consensus ADMM iteration.
//! - [`variants`]: randomized block selection and momentum extrapolation.
//! - [`metrics`]: post-hoc beampattern and correlation reports.
//! - [`oracle`]: brute-force reference evaluators for testing.

pub mod error;
pub mod metrics;
pub mod model;
pub mod objective;
pub mod oracle;
pub mod solver;
pub mod variants;

pub use error::{Error, Result};
pub use model::{
    project_alpha, steering_vector, synthesize_waveform, wrap_phase, DesignSpec,
    LipschitzConstants, PhaseMatrix, Scenario,
};
pub use solver::{
    Algorithm, DualInit, IterationRecord, RhoMode, RunOutput, Solver, SolverConfig, SolverState,
    StopReason,
};
pub use variants::{AgdPolicy, SbcdPolicy};

pub use ndarray;
pub use num_complex::Complex64;
