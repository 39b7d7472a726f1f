#![allow(dead_code)]

use ness_core::{ComplexMatrix, DensityMatrix, ModelParams, Temperature};
use ness_core::presets::{coupled_qubits_params, oscillator_params, two_level_params};
use ness_core::models::OscillatorParams;
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn temp(x: f64) -> Temperature {
    Temperature::new(x).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// `G G† / Tr(G G†)` for a random `G`; full rank with probability one.
pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let g = random_matrix(rng, n, n);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::from_approximate(&m.scale_real(1.0 / tr)).unwrap()
}

/// The three example systems with their standard rates, at `(t1, t2)`.
/// The oscillator is truncated to `cutoff` levels.
pub fn zoo(t1: f64, t2: f64, cutoff: usize) -> Vec<ModelParams> {
    vec![
        ModelParams::TwoLevel(two_level_params()),
        ModelParams::CoupledQubits(coupled_qubits_params()),
        ModelParams::Oscillator(OscillatorParams { cutoff, ..oscillator_params() }),
    ]
    .into_iter()
    .map(|p| p.with_temperatures(temp(t1), temp(t2)))
    .collect()
}
