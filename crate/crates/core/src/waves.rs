//! Closed-form traveling-wave solutions of the cubic NLS
//!
//! ```text
//! i ψ_t + ½σ ψ_ss + β|ψ|²ψ = 0
//! ```
//!
//! in the form `ψ = A·f(ξ)·e^{iθ}` with `ξ = s − σkt`, `θ = ks − ωt` and
//! `f ∈ {sn, tanh, cn, sech}`. The amplitude is taken from the principal
//! complex square root, so for the "wrong" sign of `σ/β` it is imaginary and
//! the field is still well defined, it just stops being a solution: `|A|²`
//! then differs in sign from `A²` and the cubic term no longer balances the
//! dispersion. The sn/tanh family solves the equation for `σ/β < 0`, the
//! cn/sech family for `σ/β > 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check, Error, Result};
use crate::special::{jacobi_sncndn, EllipticModulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveFamily {
    Sn,
    Tanh,
    Cn,
    Sech,
}

impl WaveFamily {
    pub const ALL: [WaveFamily; 4] = [Self::Sn, Self::Tanh, Self::Cn, Self::Sech];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sn => "sn",
            Self::Tanh => "tanh",
            Self::Cn => "cn",
            Self::Sech => "sech",
        }
    }

    fn oscillator(self) -> OscillatorFamily {
        match self {
            Self::Sn | Self::Tanh => OscillatorFamily::Sn,
            Self::Cn | Self::Sech => OscillatorFamily::Cn,
        }
    }

    /// Tanh and sech pin the modulus at 1.
    fn effective_modulus(self, m: EllipticModulus) -> EllipticModulus {
        match self {
            Self::Sn | Self::Cn => m,
            Self::Tanh | Self::Sech => EllipticModulus::ONE,
        }
    }
}

impl std::str::FromStr for WaveFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown solution `{s}` (expected sn, tanh, cn or sech)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OscillatorFamily {
    Sn,
    Cn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }
}

/// Coefficients of the envelope expansion `φ = a₀ + a₁ f(ξ)` and the
/// σ-scaled frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorCoefficients {
    pub a0: f64,
    pub a1: Complex64,
    pub omega: f64,
}

/// Amplitude and frequency that make `a₁ f(ξ) e^{i(ks − ωt)}` balance the
/// NLS: `a₁ = m√(−σ/β)`, `ω = ½σ(1 + m² + k²)` for sn and `a₁ = m√(σ/β)`,
/// `ω = ½σ(1 − 2m² + k²)` for cn.
pub fn oscillator_coefficients(
    sigma: f64,
    beta: f64,
    m: EllipticModulus,
    k: f64,
    family: OscillatorFamily,
) -> Result<OscillatorCoefficients> {
    check(beta != 0.0 && beta.is_finite(), "beta", beta, "must be finite and nonzero")?;
    let m = m.value();
    let (radicand, omega) = match family {
        OscillatorFamily::Sn => (-sigma / beta, 0.5 * sigma * (1.0 + m * m + k * k)),
        OscillatorFamily::Cn => (sigma / beta, 0.5 * sigma * (1.0 - 2.0 * m * m + k * k)),
    };
    Ok(OscillatorCoefficients {
        a0: 0.0,
        a1: m * Complex64::new(radicand, 0.0).sqrt(),
        omega,
    })
}

/// Parameters shared by the four solution families. The frequency is not
/// stored: it follows from the family via [`WaveParams::frequency`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    wave_number: f64,
    modulus: EllipticModulus,
    volatility: f64,
    potential: f64,
    branch: Branch,
}

impl WaveParams {
    pub fn new(
        wave_number: f64,
        modulus: EllipticModulus,
        volatility: f64,
        potential: f64,
        branch: Branch,
    ) -> Result<Self> {
        check(wave_number.is_finite(), "wave_number", wave_number, "must be finite")?;
        check(volatility > 0.0 && volatility.is_finite(), "volatility", volatility, "must be finite and > 0")?;
        check(potential != 0.0 && potential.is_finite(), "potential", potential, "must be finite and nonzero")?;
        Ok(Self {
            wave_number,
            modulus,
            volatility,
            potential,
            branch,
        })
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }
    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }
    pub fn volatility(&self) -> f64 {
        self.volatility
    }
    pub fn potential(&self) -> f64 {
        self.potential
    }
    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn with_branch(self, branch: Branch) -> Self {
        Self { branch, ..self }
    }

    pub fn with_modulus(self, modulus: EllipticModulus) -> Self {
        Self { modulus, ..self }
    }

    pub fn coefficients(&self, family: WaveFamily) -> OscillatorCoefficients {
        oscillator_coefficients(
            self.volatility,
            self.potential,
            family.effective_modulus(self.modulus),
            self.wave_number,
            family.oscillator(),
        )
        .expect("potential validated at construction")
    }

    pub fn frequency(&self, family: WaveFamily) -> f64 {
        self.coefficients(family).omega
    }

    /// Signed amplitude `±a₁`.
    pub fn amplitude(&self, family: WaveFamily) -> Complex64 {
        self.branch.sign() * self.coefficients(family).a1
    }
}

/// Envelope profile `f(ξ)` with its first two derivatives.
fn envelope(family: WaveFamily, xi: f64, m: EllipticModulus) -> (f64, f64, f64) {
    match family {
        WaveFamily::Sn => {
            let (sn, cn, dn) = jacobi_sncndn(xi, m);
            let k2 = m.value() * m.value();
            (sn, cn * dn, -sn * dn * dn - k2 * sn * cn * cn)
        }
        WaveFamily::Cn => {
            let (sn, cn, dn) = jacobi_sncndn(xi, m);
            let k2 = m.value() * m.value();
            (cn, -sn * dn, -cn * dn * dn + k2 * sn * sn * cn)
        }
        WaveFamily::Tanh => {
            let th = xi.tanh();
            let sech2 = 1.0 - th * th;
            (th, sech2, -2.0 * th * sech2)
        }
        WaveFamily::Sech => {
            let sech = 1.0 / xi.cosh();
            let th = xi.tanh();
            (sech, -sech * th, sech * (1.0 - 2.0 * sech * sech))
        }
    }
}

/// Value and analytic derivatives of one solution at `(s, t)`.
pub fn evaluate(family: WaveFamily, s: f64, t: f64, p: &WaveParams) -> Derivatives {
    let k = p.wave_number;
    let sigma = p.volatility;
    let coeffs = p.coefficients(family);
    let amp = p.branch.sign() * coeffs.a1;
    let xi = s - sigma * k * t;
    let (f, f1, f2) = envelope(family, xi, family.effective_modulus(p.modulus));
    let phase = Complex64::from_polar(1.0, k * s - coeffs.omega * t);
    let i = Complex64::i();
    Derivatives {
        value: amp * f * phase,
        dt: amp * (-sigma * k * f1 - i * coeffs.omega * f) * phase,
        dss: amp * (f2 + 2.0 * i * k * f1 - k * k * f) * phase,
    }
}

pub fn psi(family: WaveFamily, s: f64, t: f64, p: &WaveParams) -> Complex64 {
    evaluate(family, s, t, p).value
}

/// `±m√(−σ/β) sn(ξ, m) e^{i[ks − ½σt(1 + m² + k²)]}`
pub fn psi_sn(s: f64, t: f64, p: &WaveParams) -> Complex64 {
    psi(WaveFamily::Sn, s, t, p)
}

/// `±√(−σ/β) tanh(ξ) e^{i[ks − ½σt(2 + k²)]}`
pub fn psi_tanh(s: f64, t: f64, p: &WaveParams) -> Complex64 {
    psi(WaveFamily::Tanh, s, t, p)
}

/// `±m√(σ/β) cn(ξ, m) e^{i[ks − ½σt(1 − 2m² + k²)]}`
pub fn psi_cn(s: f64, t: f64, p: &WaveParams) -> Complex64 {
    psi(WaveFamily::Cn, s, t, p)
}

/// `±√(σ/β) sech(ξ) e^{i[ks − ½σt(k² − 1)]}`
pub fn psi_sech(s: f64, t: f64, p: &WaveParams) -> Complex64 {
    psi(WaveFamily::Sech, s, t, p)
}

/// Uniform grid `s_min + j·h`, `h = (s_max − s_min)/(n − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
}

impl UniformGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        check(s_min.is_finite() && s_max.is_finite(), "s_min", s_min, "bounds must be finite")?;
        check(s_max > s_min, "s_max", s_max, "must exceed s_min")?;
        check(n >= Self::MIN_POINTS, "n", n as f64, "grid needs at least 8 points")?;
        Ok(Self { s_min, s_max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }
}

/// Complex samples on a uniform grid at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexField {
    grid: UniformGrid,
    time: f64,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: UniformGrid, time: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::LengthMismatch {
                what: "field values vs grid points",
                left: values.len(),
                right: grid.n,
            });
        }
        check(time.is_finite(), "time", time, "must be finite")?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "values",
                value: bad.norm(),
                reason: "field samples must be finite",
            });
        }
        Ok(Self { grid, time, values })
    }

    pub fn sample<F: Fn(f64) -> Complex64>(grid: UniformGrid, time: f64, f: F) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, time, values)
    }

    pub fn zeros(grid: UniformGrid, time: f64) -> Self {
        Self {
            grid,
            time,
            values: vec![Complex64::new(0.0, 0.0); grid.n],
        }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.norm()))
    }

    // Callers keep values finite.
    pub(crate) fn from_parts_unchecked(grid: UniformGrid, time: f64, values: Vec<Complex64>) -> Self {
        Self { grid, time, values }
    }
}

/// Probability density `|ψ|²` at each grid point.
pub fn pdf(field: &ComplexField) -> Vec<f64> {
    field.values.iter().map(|v| v.norm_sqr()).collect()
}

/// Field value with `∂_t` and `∂_ss` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: Complex64,
    pub dt: Complex64,
    pub dss: Complex64,
}

/// Anything that can be evaluated at `(s, t)`. Implementors that know their
/// derivatives in closed form override [`WaveSampler::derivatives`].
pub trait WaveSampler {
    fn value(&self, s: f64, t: f64) -> Complex64;

    fn derivatives(&self, _s: f64, _t: f64) -> Option<Derivatives> {
        None
    }
}

/// One of the four closed-form families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticWave {
    pub family: WaveFamily,
    pub params: WaveParams,
}

impl WaveSampler for AnalyticWave {
    fn value(&self, s: f64, t: f64) -> Complex64 {
        psi(self.family, s, t, &self.params)
    }

    fn derivatives(&self, s: f64, t: f64) -> Option<Derivatives> {
        Some(evaluate(self.family, s, t, &self.params))
    }
}

/// Wraps a closure; only finite-difference residuals are available.
pub struct FnSampler<F>(pub F);

impl<F: Fn(f64, f64) -> Complex64> WaveSampler for FnSampler<F> {
    fn value(&self, s: f64, t: f64) -> Complex64 {
        (self.0)(s, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DerivativeMode {
    Analytic,
    /// Central differences with steps `h_s`, `h_t`; error `O(h_s² + h_t²)`.
    FiniteDifference { h_s: f64, h_t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorm {
    pub max: f64,
    pub rms: f64,
    pub points: usize,
}

/// `|i ψ_t + ½σ ψ_ss + β|ψ|²ψ|` reduced to max and RMS over `points`.
pub fn nls_residual<S: WaveSampler + ?Sized>(
    sampler: &S,
    sigma: f64,
    beta: f64,
    points: &[(f64, f64)],
    mode: DerivativeMode,
) -> Result<ResidualNorm> {
    let mut max = 0.0f64;
    let mut sum_sq = 0.0;
    for &(s, t) in points {
        let d = match mode {
            DerivativeMode::Analytic => sampler
                .derivatives(s, t)
                .ok_or(Error::DerivativeModeUnavailable)?,
            DerivativeMode::FiniteDifference { h_s, h_t } => finite_difference(sampler, s, t, h_s, h_t)?,
        };
        let r = (Complex64::i() * d.dt + 0.5 * sigma * d.dss + beta * d.value.norm_sqr() * d.value).norm();
        max = max.max(r);
        sum_sq += r * r;
    }
    let rms = if points.is_empty() {
        0.0
    } else {
        (sum_sq / points.len() as f64).sqrt()
    };
    Ok(ResidualNorm {
        max,
        rms,
        points: points.len(),
    })
}

fn finite_difference<S: WaveSampler + ?Sized>(sampler: &S, s: f64, t: f64, h_s: f64, h_t: f64) -> Result<Derivatives> {
    check(h_s > 0.0 && h_s.is_finite(), "h_s", h_s, "must be finite and > 0")?;
    check(h_t > 0.0 && h_t.is_finite(), "h_t", h_t, "must be finite and > 0")?;
    let value = sampler.value(s, t);
    Ok(Derivatives {
        value,
        dt: (sampler.value(s, t + h_t) - sampler.value(s, t - h_t)) / (2.0 * h_t),
        dss: (sampler.value(s + h_s, t) - 2.0 * value + sampler.value(s - h_s, t)) / (h_s * h_s),
    })
}

/// `n_s × n_t` tensor lattice, endpoints included.
pub fn residual_lattice(s_range: (f64, f64), t_range: (f64, f64), n_s: usize, n_t: usize) -> Vec<(f64, f64)> {
    let axis = |(lo, hi): (f64, f64), n: usize| -> Vec<f64> {
        if n <= 1 {
            return vec![lo];
        }
        (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
    };
    let ss = axis(s_range, n_s);
    let ts = axis(t_range, n_t);
    ts.iter()
        .flat_map(|&t| ss.iter().map(move |&s| (s, t)))
        .collect()
}

/// The default 21×21 lattice over `[−7, 18] × [0, 5]`.
pub fn default_residual_points() -> Vec<(f64, f64)> {
    residual_lattice((-7.0, 18.0), (0.0, 5.0), 21, 21)
}
