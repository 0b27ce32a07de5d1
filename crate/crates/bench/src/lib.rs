//! Shared fixtures for the criterion benchmarks.

use awave_core::numerics::{Boundary, EvolutionConfig, GridSpec};
use awave_core::waves::{psi, Branch};
use awave_core::{ComplexField, EllipticModulus, OptionSpec, WaveFamily, WaveParams};

/// At-the-money one-year option with a dividend yield.
pub fn option() -> OptionSpec {
    OptionSpec::new(100.0, 100.0, 0.05, 0.3, 1.0, 0.04).expect("valid constants")
}

/// Evenly spaced arguments for elliptic-function sweeps.
pub fn arguments(n: usize) -> Vec<f64> {
    (0..n).map(|j| -10.0 + 20.0 * j as f64 / n as f64).collect()
}

/// Sech soliton on a periodic grid of `n` points, with a 1 s horizon at dt = 0.01.
pub fn soliton(n: usize) -> (ComplexField, GridSpec, EvolutionConfig) {
    let grid = GridSpec::new(-40.0, 40.0, n, Boundary::Periodic).expect("valid grid");
    let p = WaveParams::new(1.2, EllipticModulus::ONE, 1.0, 1.0, Branch::Plus).expect("valid params");
    let init = ComplexField::sample(grid.uniform(), 0.0, |s| psi(WaveFamily::Sech, s, 0.0, &p)).expect("finite field");
    (init, grid, EvolutionConfig::constant(0.01, 1.0, 1.0, 1.0, usize::MAX))
}
