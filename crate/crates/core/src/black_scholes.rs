//! European Black–Scholes prices and sensitivities with a continuous dividend
//! yield, plus the seeded path generators that drive the stochastic scenarios.
//!
//! `theta` is the derivative with respect to time to maturity `T`, so it is
//! usually positive for a call; flip the sign for the calendar-time convention.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{check, Result};
use crate::random::Stream;
use crate::special::erfc_real;

/// Maturities below this are priced at intrinsic value.
pub const INTRINSIC_MATURITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    spot: f64,
    strike: f64,
    rate: f64,
    volatility: f64,
    maturity: f64,
    dividend_yield: f64,
}

impl OptionSpec {
    pub fn new(
        spot: f64,
        strike: f64,
        rate: f64,
        volatility: f64,
        maturity: f64,
        dividend_yield: f64,
    ) -> Result<Self> {
        check(spot >= 0.0 && spot.is_finite(), "spot", spot, "must be finite and >= 0")?;
        check(strike > 0.0 && strike.is_finite(), "strike", strike, "must be finite and > 0")?;
        check(rate.is_finite(), "rate", rate, "must be finite")?;
        check(volatility > 0.0 && volatility.is_finite(), "volatility", volatility, "must be finite and > 0")?;
        check(maturity > 0.0 && maturity.is_finite(), "maturity", maturity, "must be finite and > 0")?;
        check(
            dividend_yield >= 0.0 && dividend_yield.is_finite(),
            "dividend_yield",
            dividend_yield,
            "must be finite and >= 0",
        )?;
        Ok(Self {
            spot,
            strike,
            rate,
            volatility,
            maturity,
            dividend_yield,
        })
    }

    pub fn spot(&self) -> f64 {
        self.spot
    }
    pub fn strike(&self) -> f64 {
        self.strike
    }
    pub fn rate(&self) -> f64 {
        self.rate
    }
    pub fn volatility(&self) -> f64 {
        self.volatility
    }
    pub fn maturity(&self) -> f64 {
        self.maturity
    }
    pub fn dividend_yield(&self) -> f64 {
        self.dividend_yield
    }

    pub fn with_spot(self, spot: f64) -> Result<Self> {
        Self::new(spot, self.strike, self.rate, self.volatility, self.maturity, self.dividend_yield)
    }
    pub fn with_rate(self, rate: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, rate, self.volatility, self.maturity, self.dividend_yield)
    }
    pub fn with_volatility(self, volatility: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, self.rate, volatility, self.maturity, self.dividend_yield)
    }
    pub fn with_maturity(self, maturity: f64) -> Result<Self> {
        Self::new(self.spot, self.strike, self.rate, self.volatility, maturity, self.dividend_yield)
    }

    /// `(d₁, d₂)`; `-inf` for both at zero spot.
    pub fn d1_d2(&self) -> (f64, f64) {
        let vol_sqrt_t = self.volatility * self.maturity.sqrt();
        let drift = self.rate - self.dividend_yield + 0.5 * self.volatility * self.volatility;
        let d1 = ((self.spot / self.strike).ln() + self.maturity * drift) / vol_sqrt_t;
        (d1, d1 - vol_sqrt_t)
    }

    fn discounts(&self) -> (f64, f64) {
        (
            (-self.dividend_yield * self.maturity).exp(),
            (-self.rate * self.maturity).exp(),
        )
    }
}

/// Standard normal CDF `½(1 + erf(λ/√2))`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc_real(-x / SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn price_call(opt: &OptionSpec) -> f64 {
    if opt.maturity < INTRINSIC_MATURITY {
        return (opt.spot - opt.strike).max(0.0);
    }
    let (d1, d2) = opt.d1_d2();
    let (div, disc) = opt.discounts();
    opt.spot * normal_cdf(d1) * div - opt.strike * normal_cdf(d2) * disc
}

pub fn price_put(opt: &OptionSpec) -> f64 {
    if opt.maturity < INTRINSIC_MATURITY {
        return (opt.strike - opt.spot).max(0.0);
    }
    let (d1, d2) = opt.d1_d2();
    let (div, disc) = opt.discounts();
    opt.strike * normal_cdf(-d2) * disc - opt.spot * normal_cdf(-d1) * div
}

pub fn price(opt: &OptionSpec, kind: OptionKind) -> f64 {
    match kind {
        OptionKind::Call => price_call(opt),
        OptionKind::Put => price_put(opt),
    }
}

/// First and second order sensitivities of one option.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Greeks {
    /// `∂u/∂s`
    pub delta: f64,
    /// `∂u/∂r`
    pub rho: f64,
    /// `∂u/∂σ`
    pub vega: f64,
    /// `∂u/∂T`
    pub theta: f64,
    /// `∂²u/∂s²`
    pub gamma: f64,
}

pub fn greeks(opt: &OptionSpec, kind: OptionKind) -> Greeks {
    let sign = match kind {
        OptionKind::Call => 1.0,
        OptionKind::Put => -1.0,
    };
    if opt.maturity < INTRINSIC_MATURITY {
        let in_the_money = sign * (opt.spot - opt.strike) > 0.0;
        return Greeks {
            delta: if in_the_money { sign } else { 0.0 },
            rho: 0.0,
            vega: 0.0,
            theta: 0.0,
            gamma: 0.0,
        };
    }
    let (d1, d2) = opt.d1_d2();
    let (div, disc) = opt.discounts();
    let sqrt_t = opt.maturity.sqrt();
    let n1 = normal_cdf(sign * d1);
    let n2 = normal_cdf(sign * d2);
    // s·e^{−δT}·n(d₁) = k·e^{−rT}·n(d₂), the standard simplification
    let density = opt.spot * div * normal_pdf(d1);
    let gamma = if opt.spot > 0.0 {
        density / (opt.spot * opt.spot * opt.volatility * sqrt_t)
    } else {
        0.0
    };
    Greeks {
        delta: sign * div * n1,
        rho: sign * opt.strike * opt.maturity * disc * n2,
        vega: density * sqrt_t,
        theta: -sign * opt.dividend_yield * opt.spot * div * n1
            + sign * opt.rate * opt.strike * disc * n2
            + density * opt.volatility / (2.0 * sqrt_t),
        gamma,
    }
}

/// A sampled scalar path. `times` share the unit of the generator's time
/// argument (years for GBM, step index for the volatility walk).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

/// Geometric Brownian motion sampled exactly on a uniform grid:
/// `s(t) = s₀ exp((μ − ½σ²)t + σW(t))` with `W` accumulated from seeded
/// standard normal increments. `steps + 1` samples, the first at `t = 0`.
pub fn simulate_gbm(
    s0: f64,
    mu: f64,
    sigma: f64,
    horizon: f64,
    steps: usize,
    seed: u64,
) -> Result<PricePath> {
    check(s0 >= 0.0 && s0.is_finite(), "s0", s0, "must be finite and >= 0")?;
    check(mu.is_finite(), "mu", mu, "must be finite")?;
    check(sigma >= 0.0 && sigma.is_finite(), "sigma", sigma, "must be finite and >= 0")?;
    check(horizon > 0.0 && horizon.is_finite(), "horizon", horizon, "must be finite and > 0")?;
    check(steps >= 1, "steps", steps as f64, "must be >= 1")?;

    let dt = horizon / steps as f64;
    let sqrt_dt = dt.sqrt();
    let drift = mu - 0.5 * sigma * sigma;
    let mut stream = Stream::new(seed);
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut brownian = 0.0;
    times.push(0.0);
    values.push(s0);
    for i in 1..=steps {
        brownian += sqrt_dt * stream.normal();
        let t = i as f64 * dt;
        times.push(t);
        values.push(s0 * (drift * t + sigma * brownian).exp());
    }
    Ok(PricePath { times, values, seed })
}

/// Gaussian random walk `σ_{j+1} = σ_j + step_size·Z_j`, reflected back into
/// `[σ_min, σ_max]` after every step. Times are step indices `0..=steps`.
pub fn volatility_random_walk(
    sigma0: f64,
    step_size: f64,
    steps: usize,
    bounds: (f64, f64),
    seed: u64,
) -> Result<PricePath> {
    let (lo, hi) = bounds;
    check(lo > 0.0 && lo.is_finite(), "sigma_min", lo, "must be finite and > 0")?;
    check(hi >= lo && hi.is_finite(), "sigma_max", hi, "must be finite and >= sigma_min")?;
    check((lo..=hi).contains(&sigma0), "sigma0", sigma0, "must lie within the bounds")?;
    check(step_size >= 0.0 && step_size.is_finite(), "step_size", step_size, "must be finite and >= 0")?;

    let mut stream = Stream::new(seed);
    let mut values = Vec::with_capacity(steps + 1);
    let mut sigma = sigma0;
    values.push(sigma);
    for _ in 0..steps {
        sigma = reflect(sigma + step_size * stream.normal(), lo, hi);
        values.push(sigma);
    }
    Ok(PricePath {
        times: (0..=steps).map(|j| j as f64).collect(),
        values,
        seed,
    })
}

// Folds x into [lo, hi] by repeated mirror reflection.
fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width == 0.0 {
        return lo;
    }
    let y = (x - lo).rem_euclid(2.0 * width);
    let folded = if y > width { 2.0 * width - y } else { y };
    (lo + folded).clamp(lo, hi)
}
