#![allow(dead_code)]

use cmwave_core::{DesignSpec, PhaseMatrix, Scenario};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Small random design: M in {2,3,4}, N in {4,8}, K in {1,2}, up to four lags.
pub fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let m = rng.gen_range(2..=4);
    let n = if rng.gen_bool(0.5) { 4 } else { 8 };
    let k = rng.gen_range(1..=2);
    let step = [5.0, 7.5, 10.0, 15.0][rng.gen_range(0..4)];
    let start: f64 = -60.0 + rng.gen_range(0.0..10.0);
    let fit = ((89.0 - start) / step) as usize;
    let count = rng.gen_range(4..=12).min(fit);
    let beam_grid: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
    let mut desired_pattern: Vec<f64> = (0..count)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rng.gen_range(0.0..2.0)
            } else {
                0.0
            }
        })
        .collect();
    desired_pattern[rng.gen_range(0..count)] = 1.0;
    let corr_angles: Vec<f64> = (0..k).map(|_| rng.gen_range(-70.0..70.0)).collect();
    let mut lags: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).take(4).collect();
    if lags.is_empty() {
        lags.push(rng.gen_range(0..n));
    }
    let spec = DesignSpec {
        num_antennas: m,
        waveform_length: n,
        beam_grid,
        desired_pattern,
        corr_angles,
        lags,
        weight_ac: rng.gen_range(0.1..3.0),
        weight_cc: rng.gen_range(0.1..3.0),
        alpha_max: 2.0 * (n * m * m) as f64,
    };
    Scenario::new(spec).expect("random spec is valid")
}

pub fn random_phase(scn: &Scenario, rng: &mut ChaCha8Rng) -> PhaseMatrix {
    PhaseMatrix::random(scn.waveform_length(), scn.num_antennas(), rng)
}

/// `||a - b|| / max(||b||, floor)` over flattened entries.
pub fn rel_err<'a>(
    a: impl IntoIterator<Item = &'a f64>,
    b: impl IntoIterator<Item = &'a f64>,
    floor: f64,
) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.into_iter().zip(b) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    num.sqrt() / den.sqrt().max(floor)
}

/// Two-lobe design at -40 and 30 degrees on a 1 degree grid, lags 0..=4.
pub fn desk_scenario(m: usize, n: usize) -> Scenario {
    let spec = DesignSpec::mainlobes(m, n, 1.0, &[-40.0, 30.0], 10.0, (0..=4).collect())
        .expect("desk spec is valid");
    Scenario::new(spec).expect("desk scenario builds")
}
