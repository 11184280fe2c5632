//! Shared fixtures for the benchmarks: representative scenarios and random
//! phase points at a fixed seed.

use cmwave_core::{DesignSpec, PhaseMatrix, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two mainlobes at -40 and 30 degrees, 10 degrees wide each side.
pub fn two_lobe_scenario(
    num_antennas: usize,
    waveform_length: usize,
    grid_step_deg: f64,
    max_lag: usize,
) -> Scenario {
    let spec = DesignSpec::mainlobes(
        num_antennas,
        waveform_length,
        grid_step_deg,
        &[-40.0, 30.0],
        10.0,
        (0..=max_lag).collect(),
    )
    .expect("fixture spec is valid");
    Scenario::new(spec).expect("fixture scenario builds")
}

pub fn random_phase(scenario: &Scenario, seed: u64) -> PhaseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PhaseMatrix::random(
        scenario.waveform_length(),
        scenario.num_antennas(),
        &mut rng,
    )
}

/// Named sizes covered by the benchmark groups.
pub fn sizes() -> Vec<(&'static str, Scenario)> {
    vec![
        ("m4_n16_step1", two_lobe_scenario(4, 16, 1.0, 4)),
        ("m8_n32_step1", two_lobe_scenario(8, 32, 1.0, 4)),
        ("m8_n128_step0.1", two_lobe_scenario(8, 128, 0.1, 16)),
    ]
}
