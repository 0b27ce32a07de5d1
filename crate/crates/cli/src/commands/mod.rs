pub mod bs_price;
pub mod fit;
pub mod hebb;
pub mod manakov;
pub mod residual;
pub mod wave_surface;

use awave_core::waves::{Branch, WaveFamily, WaveParams};
use awave_core::EllipticModulus;

use crate::cli::{BranchArg, Range, Solution};

pub enum Outcome {
    Pass,
    CheckFailed(String),
}

/// Flag combinations the parser cannot reject on its own; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn family(s: Solution) -> WaveFamily {
    match s {
        Solution::Sn => WaveFamily::Sn,
        Solution::Tanh => WaveFamily::Tanh,
        Solution::Cn => WaveFamily::Cn,
        Solution::Sech => WaveFamily::Sech,
    }
}

pub fn wave_params(k: f64, m: f64, sigma: f64, beta: f64, branch: BranchArg) -> anyhow::Result<WaveParams> {
    let branch = match branch {
        BranchArg::Plus => Branch::Plus,
        BranchArg::Minus => Branch::Minus,
    };
    Ok(WaveParams::new(k, EllipticModulus::new(m)?, sigma, beta, branch)?)
}

/// Evenly spaced values over `range`; one value when the range is a point.
pub fn axis(range: Range, n: usize) -> anyhow::Result<Vec<f64>> {
    if range.is_point() {
        return Ok(vec![range.lo]);
    }
    if n < 2 {
        return Err(usage(format!("need at least 2 points for the range {}:{}", range.lo, range.hi)));
    }
    Ok((0..n)
        .map(|j| range.lo + (range.hi - range.lo) * j as f64 / (n - 1) as f64)
        .collect())
}
