//! Strang split-step Fourier integration of
//!
//! ```text
//! i ψ_t + ½σ ψ_ss + β|ψ|²ψ = 0
//! ```
//!
//! and of its two-component form with the shared intensity `|σ|² + |ψ|²`.
//!
//! One step of size `dt` is a half-step of the nonlinear phase rotation
//! `ψ ← ψ·e^{iβ|ψ|²dt/2}` (exact, since it leaves `|ψ|` unchanged), a full
//! linear step `ψ̂ ← ψ̂·e^{−i½σκ²dt}` in Fourier space, and another nonlinear
//! half-step. The scheme is second order in `dt`, unitary for real
//! coefficients, and preserves `h Σ|ψ_j|²` up to rounding.
//!
//! The grid `s_j = s_min + j·h`, `h = (s_max − s_min)/(n − 1)`, is treated as
//! one period of length `n·h` for the periodic boundary. The reflecting
//! boundary mirrors the samples into an even sequence of length `2n − 2`
//! (zero normal derivative at both ends) before transforming.
//!
//! Time-dependent dispersion is piecewise constant per step. A spatially
//! varying potential `β(s)` enters the nonlinear substep pointwise. The
//! Hebbian potential `β(t) = r Σ wᵢgᵢ(t)` is frozen over each step and the
//! weights advance with [`hebbian_coupled_step`] after it.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};
use crate::fit::{beta_eval, MarketPotential};
use crate::manakov::{beta_adaptive, gaussian_kernels};
use crate::waves::{ComplexField, UniformGrid};

/// Abort once `max|ψ|` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e6;
/// Largest nonlinear phase `|β|·max|ψ|²·dt` accepted for one step, in radians.
pub const MAX_NONLINEAR_PHASE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Reflecting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    pub fn new(s_min: f64, s_max: f64, n: usize, boundary: Boundary) -> Result<Self> {
        check(n >= Self::MIN_POINTS, "n", n as f64, "integrator grid needs at least 16 points")?;
        UniformGrid::new(s_min, s_max, n)?;
        Ok(Self {
            s_min,
            s_max,
            n,
            boundary,
        })
    }

    pub fn uniform(&self) -> UniformGrid {
        UniformGrid {
            s_min: self.s_min,
            s_max: self.s_max,
            n: self.n,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.uniform().spacing()
    }
}

/// Dispersion coefficient `σ` in `½σψ_ss`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Dispersion {
    Constant(f64),
    /// Value for step `j` is `path[j]`; needs at least as many entries as steps.
    Path(Vec<f64>),
}

impl Dispersion {
    fn at_step(&self, j: usize) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Path(path) => path[j],
        }
    }
}

/// How the Hebbian forcing `|σ||ψ|` is reduced from fields to a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldReduction {
    /// `|σ|`, `|ψ|` at the grid point maximizing `|σ|² + |ψ|²`.
    Peak,
    /// `|σ|`, `|ψ|` replaced by their L² norms over the grid.
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HebbianPotential {
    pub rate: f64,
    pub learning_rate: f64,
    pub widths: Vec<f64>,
    pub initial_weights: Vec<f64>,
    pub reduction: FieldReduction,
}

/// Nonlinearity coefficient `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    Constant(f64),
    /// `β(s)` from the erf-sum potential.
    Market(MarketPotential),
    /// `β(t) = r Σ wᵢ gᵢ(t)` with weights driven by the fields.
    Hebbian(HebbianPotential),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_end: f64,
    pub dispersion: Dispersion,
    pub potential: Potential,
    /// Snapshot cadence in steps. The initial and final states are always kept.
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn constant(dt: f64, t_end: f64, sigma: f64, beta: f64, record_every: usize) -> Self {
        Self {
            dt,
            t_end,
            dispersion: Dispersion::Constant(sigma),
            potential: Potential::Constant(beta),
            record_every,
        }
    }

    /// Number of steps; `t_end` must be an integer multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        check(self.dt > 0.0 && self.dt.is_finite(), "dt", self.dt, "must be finite and > 0")?;
        check(self.t_end > 0.0 && self.t_end.is_finite(), "t_end", self.t_end, "must be finite and > 0")?;
        let steps = (self.t_end / self.dt).round();
        check(
            steps >= 1.0 && (steps * self.dt - self.t_end).abs() <= 1e-9 * self.t_end,
            "t_end",
            self.t_end,
            "must be a positive integer multiple of dt",
        )?;
        Ok(steps as usize)
    }

    fn validate(&self, steps: usize) -> Result<()> {
        check(self.record_every >= 1, "record_every", self.record_every as f64, "must be >= 1")?;
        match &self.dispersion {
            Dispersion::Constant(v) => check(v.is_finite(), "sigma", *v, "must be finite")?,
            Dispersion::Path(path) => {
                if path.len() < steps {
                    return Err(Error::LengthMismatch {
                        what: "dispersion path vs steps",
                        left: path.len(),
                        right: steps,
                    });
                }
                if let Some(bad) = path.iter().find(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter {
                        name: "sigma",
                        value: *bad,
                        reason: "dispersion path must be finite",
                    });
                }
            }
        }
        match &self.potential {
            Potential::Constant(b) => check(b.is_finite(), "beta", *b, "must be finite")?,
            Potential::Market(_) => {}
            Potential::Hebbian(h) => {
                if h.widths.len() != h.initial_weights.len() {
                    return Err(Error::LengthMismatch {
                        what: "kernel widths vs initial weights",
                        left: h.widths.len(),
                        right: h.initial_weights.len(),
                    });
                }
                for &w in &h.widths {
                    check(w != 0.0 && w.is_finite(), "width", w, "must be finite and nonzero")?;
                }
            }
        }
        Ok(())
    }
}

/// Snapshot of both components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledSnapshot {
    pub sigma: ComplexField,
    pub psi: ComplexField,
    /// Hebbian weights at this instant; empty for other potentials.
    pub weights: Vec<f64>,
}

/// Trapezoid-rule `∫|ψ|² ds`.
pub fn mass(field: &ComplexField) -> f64 {
    let v = field.values();
    let h = field.grid().spacing();
    let interior: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    h * (interior - 0.5 * (v[0].norm_sqr() + v[v.len() - 1].norm_sqr()))
}

struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
    scratch: Vec<Complex64>,
    buffer: Vec<Complex64>,
    boundary: Boundary,
    n: usize,
}

impl Spectral {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.n;
        let len = match grid.boundary {
            Boundary::Periodic => n,
            Boundary::Reflecting => 2 * n - 2,
        };
        let h = grid.spacing();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        let base = 2.0 * std::f64::consts::PI / (len as f64 * h);
        let wavenumbers = (0..len)
            .map(|j| {
                let m = if j <= len / 2 { j as f64 } else { j as f64 - len as f64 };
                base * m
            })
            .collect();
        Self {
            forward,
            inverse,
            wavenumbers,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            buffer: vec![Complex64::new(0.0, 0.0); len],
            boundary: grid.boundary,
            n,
        }
    }

    fn linear_factors(&self, sigma: f64, dt: f64) -> Vec<Complex64> {
        self.wavenumbers
            .iter()
            .map(|k| Complex64::from_polar(1.0, -0.5 * sigma * k * k * dt))
            .collect()
    }

    fn apply(&mut self, field: &mut [Complex64], factors: &[Complex64]) {
        let n = self.n;
        self.buffer[..n].copy_from_slice(field);
        if self.boundary == Boundary::Reflecting {
            for j in 1..n - 1 {
                self.buffer[2 * n - 2 - j] = field[j];
            }
        }
        self.forward.process_with_scratch(&mut self.buffer, &mut self.scratch);
        let norm = 1.0 / self.buffer.len() as f64;
        for (b, f) in self.buffer.iter_mut().zip(factors) {
            *b *= f * norm;
        }
        self.inverse.process_with_scratch(&mut self.buffer, &mut self.scratch);
        field.copy_from_slice(&self.buffer[..n]);
    }
}

fn reduce(sigma: &[Complex64], psi: &[Complex64], h: f64, reduction: FieldReduction) -> f64 {
    match reduction {
        FieldReduction::Peak => {
            let (j, _) = sigma
                .iter()
                .zip(psi)
                .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (j, v)| if v > best.1 { (j, v) } else { best });
            sigma[j].norm() * psi[j].norm()
        }
        FieldReduction::L2 => {
            let l2 = |f: &[Complex64]| (h * f.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
            l2(sigma) * l2(psi)
        }
    }
}

/// Advances `ẇᵢ = −wᵢ + c·F·gᵢ(τ)` from `t` to `t + dt` with classical RK4.
/// The forcing `F = |σ||ψ|` is reduced from the fields once and held over the
/// step; the kernels `gᵢ(τ) = e^{−τ²/(2σᵢ)}` are evaluated exactly.
#[allow(clippy::too_many_arguments)]
pub fn hebbian_coupled_step(
    sigma: &ComplexField,
    psi: &ComplexField,
    weights: &[f64],
    widths: &[f64],
    learning_rate: f64,
    t: f64,
    dt: f64,
    reduction: FieldReduction,
) -> Result<Vec<f64>> {
    if sigma.values().len() != psi.values().len() {
        return Err(Error::LengthMismatch {
            what: "sigma vs psi samples",
            left: sigma.values().len(),
            right: psi.values().len(),
        });
    }
    let forcing = reduce(sigma.values(), psi.values(), sigma.grid().spacing(), reduction);
    hebbian_step_with_forcing(weights, widths, learning_rate, forcing, t, dt)
}

/// [`hebbian_coupled_step`] with the forcing supplied directly.
pub fn hebbian_step_with_forcing(
    weights: &[f64],
    widths: &[f64],
    learning_rate: f64,
    forcing: f64,
    t: f64,
    dt: f64,
) -> Result<Vec<f64>> {
    if weights.len() != widths.len() {
        return Err(Error::LengthMismatch {
            what: "weights vs kernel widths",
            left: weights.len(),
            right: widths.len(),
        });
    }
    let drive = learning_rate * forcing;
    Ok(weights
        .iter()
        .zip(widths)
        .map(|(&w, &width)| {
            let g = |tau: f64| (-tau * tau / (2.0 * width)).exp();
            let f = |tau: f64, w: f64| -w + drive * g(tau);
            let k1 = f(t, w);
            let k2 = f(t + 0.5 * dt, w + 0.5 * dt * k1);
            let k3 = f(t + 0.5 * dt, w + 0.5 * dt * k2);
            let k4 = f(t + dt, w + dt * k3);
            w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        })
        .collect())
}

enum BetaProfile {
    Scalar(f64),
    Spatial(Vec<f64>),
}

impl BetaProfile {
    fn at(&self, j: usize) -> f64 {
        match self {
            Self::Scalar(b) => *b,
            Self::Spatial(v) => v[j],
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Self::Scalar(b) => b.abs(),
            Self::Spatial(v) => v.iter().fold(0.0, |m, b| m.max(b.abs())),
        }
    }
}

fn rotate(fields: &mut [&mut Vec<Complex64>], beta: &BetaProfile, tau: f64) {
    let n = fields[0].len();
    for j in 0..n {
        let intensity: f64 = fields.iter().map(|f| f[j].norm_sqr()).sum();
        let rot = Complex64::from_polar(1.0, beta.at(j) * intensity * tau);
        for f in fields.iter_mut() {
            f[j] *= rot;
        }
    }
}

fn check_field_grid(field: &ComplexField, grid: &GridSpec) -> Result<()> {
    if field.grid() != grid.uniform() {
        return Err(Error::InvalidParameter {
            name: "initial",
            value: field.grid().n as f64,
            reason: "initial field must be sampled on the integration grid",
        });
    }
    Ok(())
}

fn run(components: Vec<ComplexField>, grid: &GridSpec, cfg: &EvolutionConfig) -> Result<Vec<CoupledSnapshot>> {
    let steps = cfg.steps()?;
    cfg.validate(steps)?;
    for c in &components {
        check_field_grid(c, grid)?;
    }
    let uniform = grid.uniform();
    let h = grid.spacing();
    let t0 = components[0].time();
    let mut fields: Vec<Vec<Complex64>> = components.iter().map(|c| c.values().to_vec()).collect();
    let initial_max = fields
        .iter()
        .flat_map(|f| f.iter())
        .fold(0.0f64, |m, z| m.max(z.norm()));
    let limit = BLOW_UP_FACTOR * initial_max;

    let mut weights = match &cfg.potential {
        Potential::Hebbian(hp) => hp.initial_weights.clone(),
        _ => Vec::new(),
    };
    let beta_at = |t: f64, weights: &[f64]| -> Result<BetaProfile> {
        Ok(match &cfg.potential {
            Potential::Constant(b) => BetaProfile::Scalar(*b),
            Potential::Market(pot) => BetaProfile::Spatial(uniform.points().map(|s| beta_eval(s, pot)).collect()),
            Potential::Hebbian(hp) => BetaProfile::Scalar(beta_adaptive(hp.rate, weights, &gaussian_kernels(&hp.widths, t))?),
        })
    };

    let intensity_max = |fields: &[Vec<Complex64>]| -> f64 {
        (0..fields[0].len())
            .map(|j| fields.iter().map(|f| f[j].norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let beta0 = beta_at(t0, &weights)?;
    let phase0 = beta0.max_abs() * intensity_max(&fields) * cfg.dt;
    check(
        phase0 <= MAX_NONLINEAR_PHASE,
        "dt",
        cfg.dt,
        "nonlinear phase per step exceeds 1 rad; reduce dt",
    )?;

    let snapshot = |fields: &[Vec<Complex64>], t: f64, weights: &[f64]| -> CoupledSnapshot {
        let mut it = fields.iter().map(|f| ComplexField::from_parts_unchecked(uniform, t, f.clone()));
        let sigma = it.next().expect("at least one component");
        let psi = it.next().unwrap_or_else(|| ComplexField::zeros(uniform, t));
        CoupledSnapshot {
            sigma,
            psi,
            weights: weights.to_vec(),
        }
    };

    let mut spectral = Spectral::new(grid);
    let mut factors = match cfg.dispersion {
        Dispersion::Constant(sigma) => Some(spectral.linear_factors(sigma, cfg.dt)),
        Dispersion::Path(_) => None,
    };
    let mut out = vec![snapshot(&fields, t0, &weights)];
    let static_beta = match cfg.potential {
        Potential::Hebbian(_) => None,
        _ => Some(beta0),
    };

    for j in 0..steps {
        let t = t0 + j as f64 * cfg.dt;
        let dynamic_beta;
        let beta = match &static_beta {
            Some(b) => b,
            None => {
                dynamic_beta = beta_at(t, &weights)?;
                &dynamic_beta
            }
        };
        {
            let mut refs: Vec<&mut Vec<Complex64>> = fields.iter_mut().collect();
            rotate(&mut refs, beta, 0.5 * cfg.dt);
        }
        if let Dispersion::Path(_) = cfg.dispersion {
            factors = Some(spectral.linear_factors(cfg.dispersion.at_step(j), cfg.dt));
        }
        let lin = factors.as_ref().expect("set above");
        for f in fields.iter_mut() {
            spectral.apply(f, lin);
        }
        {
            let mut refs: Vec<&mut Vec<Complex64>> = fields.iter_mut().collect();
            rotate(&mut refs, beta, 0.5 * cfg.dt);
        }

        if let Potential::Hebbian(hp) = &cfg.potential {
            let zero;
            let second = match fields.get(1) {
                Some(f) => f.as_slice(),
                None => {
                    zero = fields[0].clone();
                    zero.as_slice()
                }
            };
            let forcing = reduce(&fields[0], second, h, hp.reduction);
            weights = hebbian_step_with_forcing(&weights, &hp.widths, hp.learning_rate, forcing, t, cfg.dt)?;
        }

        let t_next = t0 + (j + 1) as f64 * cfg.dt;
        let max_now = fields
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0f64, |m, z| if z.is_finite() { m.max(z.norm()) } else { f64::INFINITY });
        if !max_now.is_finite() || (initial_max > 0.0 && max_now > limit) {
            return Err(Error::Unstable {
                t: t_next,
                amplitude: max_now,
                limit,
            });
        }
        if (j + 1) % cfg.record_every == 0 || j + 1 == steps {
            out.push(snapshot(&fields, t_next, &weights));
        }
    }
    Ok(out)
}

/// Integrates one field. With a Hebbian potential the forcing is `|ψ|·|ψ|`.
pub fn evolve_single(initial: &ComplexField, grid: &GridSpec, cfg: &EvolutionConfig) -> Result<Vec<ComplexField>> {
    Ok(run(vec![initial.clone()], grid, cfg)?
        .into_iter()
        .map(|snap| snap.sigma)
        .collect())
}

/// Integrates the two-component system; both fields rotate with the shared
/// intensity `|σ|² + |ψ|²`.
pub fn evolve_coupled(
    initial_sigma: &ComplexField,
    initial_psi: &ComplexField,
    grid: &GridSpec,
    cfg: &EvolutionConfig,
) -> Result<Vec<CoupledSnapshot>> {
    if initial_sigma.time() != initial_psi.time() {
        return Err(Error::InvalidParameter {
            name: "time",
            value: initial_psi.time(),
            reason: "both components must start at the same time",
        });
    }
    run(vec![initial_sigma.clone(), initial_psi.clone()], grid, cfg)
}

/// `√(h Σ|a_j − b_j|²)`.
pub fn l2_distance(a: &ComplexField, b: &ComplexField) -> f64 {
    let h = a.grid().spacing();
    (h * a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>())
    .sqrt()
}
