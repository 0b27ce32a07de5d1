//! Calibration of the adaptive shock-wave density against option curves.
//!
//! The potential is `β(s) = r Σᵢ w1ⁱ erf(w2ⁱ s / w3ⁱ)`. The shock model is
//! `|σ/β(s)| tanh²(s − kTσ)` and the mixed model replaces `tanh` by
//! `d₁ tanh + d₂ sech` of the same argument. Fitting uses Levenberg–Marquardt
//! with Marquardt's diagonal scaling.
//!
//! Parameter layout for both models:
//!
//! ```text
//! [σ, k, T, w1¹, w2¹, w3¹, …, w1ⁿ, w2ⁿ, w3ⁿ]            shock
//! [σ, k, T, w1¹, w2¹, w3¹, …, w1ⁿ, w2ⁿ, w3ⁿ, d₁, d₂]    mixed
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::black_scholes::{price, OptionKind, OptionSpec};
use crate::error::{check, Error, Result};
use crate::random::Stream;
use crate::special::erf_real;

/// Rate used for the potential in every fit.
pub const DEFAULT_RATE: f64 = 0.05;
/// Spot window sampled for fit targets.
pub const FIT_WINDOW: (f64, f64) = (50.0, 150.0);
pub const FIT_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketPotential {
    rate: f64,
    terms: Vec<[f64; 3]>,
}

impl MarketPotential {
    pub fn new(rate: f64, terms: Vec<[f64; 3]>) -> Result<Self> {
        check(rate.is_finite(), "rate", rate, "must be finite")?;
        check(!terms.is_empty(), "terms", 0.0, "at least one weight triple is required")?;
        for t in &terms {
            check(t[2] != 0.0, "w3", t[2], "kernel scale must be nonzero")?;
            check(t.iter().all(|v| v.is_finite()), "w", t[0], "weights must be finite")?;
        }
        Ok(Self { rate, terms })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn terms(&self) -> &[[f64; 3]] {
        &self.terms
    }

    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn with_rate(&self, rate: f64) -> Self {
        Self {
            rate,
            terms: self.terms.clone(),
        }
    }
}

fn erf_sum(s: f64, flat_terms: &[f64]) -> f64 {
    flat_terms
        .chunks_exact(3)
        .map(|w| w[0] * erf_real(w[1] * s / w[2]))
        .sum()
}

/// `β(s) = r Σᵢ w1ⁱ erf(w2ⁱ s / w3ⁱ)`.
pub fn beta_eval(s: f64, pot: &MarketPotential) -> f64 {
    pot.rate * pot.terms.iter().map(|w| w[0] * erf_real(w[1] * s / w[2])).sum::<f64>()
}

/// `|σ/β| tanh²(s − ktσ)`.
pub fn shock_pdf(s: f64, sigma: f64, beta: f64, k: f64, t: f64) -> f64 {
    let th = (s - k * t * sigma).tanh();
    (sigma / beta).abs() * th * th
}

/// `|σ/β| (d₁ tanh(s − ktσ) + d₂ sech(s − ktσ))²`.
pub fn mixed_pdf(s: f64, sigma: f64, beta: f64, k: f64, t: f64, d1: f64, d2: f64) -> f64 {
    let x = s - k * t * sigma;
    let mix = d1 * x.tanh() + d2 / x.cosh();
    (sigma / beta).abs() * mix * mix
}

/// A scalar curve `y = f(s; p)` with a fixed number of parameters.
pub trait CurveModel {
    fn n_params(&self) -> usize;
    fn eval(&self, s: f64, params: &[f64]) -> f64;
}

/// Shock density with an `n_terms` potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockModel {
    pub rate: f64,
    pub n_terms: usize,
}

impl CurveModel for ShockModel {
    fn n_params(&self) -> usize {
        3 + 3 * self.n_terms
    }

    fn eval(&self, s: f64, p: &[f64]) -> f64 {
        let beta = self.rate * erf_sum(s, &p[3..3 + 3 * self.n_terms]);
        shock_pdf(s, p[0], beta, p[1], p[2])
    }
}

/// Tanh–sech mixture with an `n_terms` potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedModel {
    pub rate: f64,
    pub n_terms: usize,
}

impl CurveModel for MixedModel {
    fn n_params(&self) -> usize {
        5 + 3 * self.n_terms
    }

    fn eval(&self, s: f64, p: &[f64]) -> f64 {
        let w_end = 3 + 3 * self.n_terms;
        let beta = self.rate * erf_sum(s, &p[3..w_end]);
        mixed_pdf(s, p[0], beta, p[1], p[2], p[w_end], p[w_end + 1])
    }
}

/// Potential embedded in a fitted parameter vector.
pub fn potential_from_params(rate: f64, n_terms: usize, params: &[f64]) -> Result<MarketPotential> {
    if params.len() < 3 + 3 * n_terms {
        return Err(Error::LengthMismatch {
            what: "parameter vector vs potential terms",
            left: params.len(),
            right: 3 + 3 * n_terms,
        });
    }
    let terms = params[3..3 + 3 * n_terms]
        .chunks_exact(3)
        .map(|w| [w[0], w[1], w[2]])
        .collect();
    MarketPotential::new(rate, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop once an accepted step improves the loss by less than this fraction.
    pub tol: f64,
    pub lambda_init: f64,
    pub lambda_up: f64,
    pub lambda_down: f64,
    /// Giving up threshold for the damping inside one iteration.
    pub lambda_max: f64,
    /// Relative central-difference step; absolute when the parameter is zero.
    pub jacobian_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-12,
            lambda_init: 1e-3,
            lambda_up: 10.0,
            lambda_down: 0.1,
            lambda_max: 1e16,
            jacobian_step: 1e-6,
        }
    }
}

/// Outcome of [`lm_fit`]. `loss_trace[0]` is the initial mean squared error,
/// followed by one entry per iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Vec<f64>,
    pub rmse: f64,
    pub iterations: usize,
    pub loss_trace: Vec<f64>,
    pub converged: bool,
}

fn mse<M: CurveModel + ?Sized>(model: &M, s: &[f64], y: &[f64], p: &[f64], out: &mut [f64]) -> f64 {
    let mut sum = 0.0;
    for ((r, &si), &yi) in out.iter_mut().zip(s).zip(y) {
        *r = model.eval(si, p) - yi;
        sum += *r * *r;
    }
    sum / s.len() as f64
}

fn jacobian<M: CurveModel + ?Sized>(model: &M, s: &[f64], p: &[f64], rel_step: f64) -> DMatrix<f64> {
    let mut jac = DMatrix::zeros(s.len(), p.len());
    let mut probe = p.to_vec();
    for j in 0..p.len() {
        let h = if p[j] == 0.0 { rel_step } else { rel_step * p[j].abs() };
        probe[j] = p[j] + h;
        let plus: Vec<f64> = s.iter().map(|&si| model.eval(si, &probe)).collect();
        probe[j] = p[j] - h;
        for (i, &si) in s.iter().enumerate() {
            jac[(i, j)] = (plus[i] - model.eval(si, &probe)) / (2.0 * h);
        }
        probe[j] = p[j];
    }
    jac
}

fn solve_damped(a: &DMatrix<f64>, g: &DVector<f64>, scale: &[f64], lambda: f64) -> Option<DVector<f64>> {
    let mut m = a.clone();
    for (j, d) in scale.iter().enumerate() {
        m[(j, j)] += lambda * d;
    }
    let rhs = -g;
    if let Some(chol) = m.clone().cholesky() {
        return Some(chol.solve(&rhs));
    }
    m.lu().solve(&rhs)
}

/// Damped Gauss–Newton minimization of the mean squared error between
/// `model(s_i; p)` and `y_i`.
///
/// Each iteration builds a central-difference Jacobian, then solves
/// `(JᵀJ + λ·diag(JᵀJ)) δ = −Jᵀr`, multiplying `λ` by `lambda_up` until the
/// step lowers the loss and by `lambda_down` once it does. Accepted steps
/// never raise the loss. If `λ` passes `lambda_max` without an accepted step
/// the fit stops with `converged = false`.
pub fn lm_fit<M: CurveModel + ?Sized>(
    model: &M,
    s: &[f64],
    y: &[f64],
    init: &[f64],
    opts: &LmOptions,
) -> Result<FitResult> {
    if s.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "sample abscissae vs values",
            left: s.len(),
            right: y.len(),
        });
    }
    if init.len() != model.n_params() {
        return Err(Error::LengthMismatch {
            what: "initial parameters vs model",
            left: init.len(),
            right: model.n_params(),
        });
    }
    check(
        s.len() >= init.len(),
        "samples",
        s.len() as f64,
        "need at least as many samples as parameters",
    )?;

    let mut p = init.to_vec();
    let mut resid = vec![0.0; s.len()];
    let mut loss = mse(model, s, y, &p, &mut resid);
    check(loss.is_finite(), "init", loss, "model is not finite at the initial parameters")?;
    let mut trace = vec![loss];
    let mut lambda = opts.lambda_init;
    let mut converged = loss == 0.0;
    let mut iterations = 0;
    let mut trial_resid = vec![0.0; s.len()];

    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let jac = jacobian(model, s, &p, opts.jacobian_step);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&resid);
        let max_diag = a.diagonal().iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let scale: Vec<f64> = a.diagonal().iter().map(|d| d.max(1e-12 * max_diag)).collect();

        let mut accepted = false;
        while lambda <= opts.lambda_max {
            if let Some(step) = solve_damped(&a, &g, &scale, lambda) {
                let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let trial_loss = mse(model, s, y, &trial, &mut trial_resid);
                if trial_loss.is_finite() && trial_loss < loss {
                    let improvement = (loss - trial_loss) / loss;
                    p = trial;
                    std::mem::swap(&mut resid, &mut trial_resid);
                    loss = trial_loss;
                    lambda = (lambda * opts.lambda_down).max(1e-15);
                    accepted = true;
                    converged = improvement < opts.tol || loss == 0.0;
                    break;
                }
            }
            lambda *= opts.lambda_up;
        }
        trace.push(loss);
        if !accepted {
            break;
        }
    }

    Ok(FitResult {
        params: p,
        rmse: loss.sqrt(),
        iterations,
        loss_trace: trace,
        converged,
    })
}

/// Black–Scholes quantities the fitted scalings are expressed against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceScales {
    pub sigma: f64,
    pub strike: f64,
    pub maturity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRatios {
    pub sigma_ratio: f64,
    pub k_ratio: f64,
    pub t_ratio: f64,
}

/// Fitted `(σ, k, T)` divided by their Black–Scholes counterparts. Signs are
/// reported as fitted.
pub fn fit_scalings(result: &FitResult, reference: &ReferenceScales) -> Result<ScalingRatios> {
    if result.params.len() < 3 {
        return Err(Error::LengthMismatch {
            what: "fit parameters vs (sigma, k, T)",
            left: result.params.len(),
            right: 3,
        });
    }
    Ok(ScalingRatios {
        sigma_ratio: result.params[0] / reference.sigma,
        k_ratio: result.params[1] / reference.strike,
        t_ratio: result.params[2] / reference.maturity,
    })
}

/// Prices of one option kind over `n` evenly spaced spots. `template` supplies
/// everything but the spot.
pub fn bs_curve(
    kind: OptionKind,
    template: &OptionSpec,
    s_range: (f64, f64),
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check(n >= 1, "n", n as f64, "must be >= 1")?;
    let spots: Vec<f64> = if n == 1 {
        vec![s_range.0]
    } else {
        (0..n)
            .map(|j| s_range.0 + (s_range.1 - s_range.0) * j as f64 / (n - 1) as f64)
            .collect()
    };
    let values = spots
        .iter()
        .map(|&s| template.with_spot(s).map(|o| price(&o, kind)))
        .collect::<Result<Vec<_>>>()?;
    Ok((spots, values))
}

/// Recipe for a deterministic starting point.
///
/// Kernel rates `αᵢ` are log-spaced over `rate_range` and jittered by
/// `exp(U(−jitter, jitter))` from the seeded stream. With `w2ⁱ = 100αᵢ` and
/// `w3ⁱ = 100`, the amplitudes `w1` solve the linear least-squares problem
/// `r·yⱼ·Σᵢ w1ⁱ erf(αᵢ sⱼ)/σ₀ ≈ 1`, i.e. `σ₀/β(s)` matches the target away
/// from the kink. `σ = σ₀`, `k = 1` and `T = kink/σ₀` put the kink at `kink`.
/// The mixed model additionally starts from `(d₁, d₂) = mix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuredInit {
    pub sigma0: f64,
    pub kink: f64,
    pub rate_range: (f64, f64),
    pub jitter: f64,
    pub seed: u64,
}

impl StructuredInit {
    /// Call fits: kink at the origin, below the sampled window.
    pub fn call(seed: u64) -> Self {
        Self {
            sigma0: 0.3,
            kink: 0.0,
            rate_range: (0.004, 0.06),
            jitter: 0.1,
            seed,
        }
    }

    /// Put fits with the shock model: kink at the strike.
    pub fn put_shock(strike: f64, seed: u64) -> Self {
        Self {
            kink: strike,
            ..Self::call(seed)
        }
    }

    /// Put fits with the mixed model: junction at `s = 40`, below the window.
    pub fn put_mixed(seed: u64) -> Self {
        Self {
            kink: 40.0,
            ..Self::call(seed)
        }
    }

    pub fn build(&self, rate: f64, n_terms: usize, s: &[f64], y: &[f64], mix: Option<(f64, f64)>) -> Result<Vec<f64>> {
        check(n_terms >= 1, "n_terms", n_terms as f64, "must be >= 1")?;
        check(self.sigma0 != 0.0, "sigma0", self.sigma0, "must be nonzero")?;
        if s.len() != y.len() {
            return Err(Error::LengthMismatch {
                what: "sample abscissae vs values",
                left: s.len(),
                right: y.len(),
            });
        }
        let mut stream = Stream::new(self.seed);
        let (lo, hi) = self.rate_range;
        let alphas: Vec<f64> = (0..n_terms)
            .map(|i| {
                let frac = if n_terms == 1 { 0.0 } else { i as f64 / (n_terms - 1) as f64 };
                let base = lo * (hi / lo).powf(frac);
                base * stream.uniform(-self.jitter, self.jitter).exp()
            })
            .collect();

        let design = DMatrix::from_fn(s.len(), n_terms, |j, i| {
            rate * y[j] * erf_real(alphas[i] * s[j]) / self.sigma0
        });
        let ones = DVector::from_element(s.len(), 1.0);
        let w1 = design
            .svd(true, true)
            .solve(&ones, 1e-14)
            .map_err(|_| Error::InvalidParameter {
                name: "init",
                value: f64::NAN,
                reason: "least-squares amplitude solve failed",
            })?;

        let mut params = vec![self.sigma0, 1.0, self.kink / self.sigma0];
        for i in 0..n_terms {
            params.extend_from_slice(&[w1[i], 100.0 * alphas[i], 100.0]);
        }
        if let Some((d1, d2)) = mix {
            params.extend_from_slice(&[d1, d2]);
        }
        Ok(params)
    }
}

/// Which density a calibration fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Shock,
    Mixed,
}

/// Target curve, fitted curve and fit outcome of one calibration run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub spots: Vec<f64>,
    pub target: Vec<f64>,
    pub fitted: Vec<f64>,
    pub result: FitResult,
}

impl Calibration {
    /// RMSE as a fraction of the largest target value.
    pub fn relative_rmse(&self) -> f64 {
        self.result.rmse / self.target.iter().cloned().fold(0.0, f64::max)
    }
}

/// Seeded starting parameters used by [`calibrate`]. Calls use
/// [`StructuredInit::call`]; puts use [`StructuredInit::put_shock`] at
/// `strike` for the shock model and [`StructuredInit::put_mixed`] for the
/// mixed model. The mixed model starts from `(d₁, d₂) = (1, 0)` for calls and
/// `(1, 1)` for puts.
pub fn default_start(
    kind: OptionKind,
    model: ModelKind,
    n_terms: usize,
    strike: f64,
    seed: u64,
    spots: &[f64],
    target: &[f64],
) -> Result<Vec<f64>> {
    let init = match kind {
        OptionKind::Call => StructuredInit::call(seed),
        OptionKind::Put => match model {
            ModelKind::Shock => StructuredInit::put_shock(strike, seed),
            ModelKind::Mixed => StructuredInit::put_mixed(seed),
        },
    };
    let mix = match (model, kind) {
        (ModelKind::Shock, _) => None,
        (ModelKind::Mixed, OptionKind::Call) => Some((1.0, 0.0)),
        (ModelKind::Mixed, OptionKind::Put) => Some((1.0, 1.0)),
    };
    init.build(DEFAULT_RATE, n_terms, spots, target, mix)
}

/// The shock or mixed model with the default rate.
pub fn model_for(model: ModelKind, n_terms: usize) -> Box<dyn CurveModel> {
    match model {
        ModelKind::Shock => Box::new(ShockModel { rate: DEFAULT_RATE, n_terms }),
        ModelKind::Mixed => Box::new(MixedModel { rate: DEFAULT_RATE, n_terms }),
    }
}

/// Fits `model` to the Black–Scholes curve of `kind` sampled at
/// [`FIT_POINTS`] spots over [`FIT_WINDOW`], starting from
/// [`default_start`].
pub fn calibrate(
    kind: OptionKind,
    model: ModelKind,
    n_terms: usize,
    template: &OptionSpec,
    seed: u64,
    opts: &LmOptions,
) -> Result<Calibration> {
    let (spots, target) = bs_curve(kind, template, FIT_WINDOW, FIT_POINTS)?;
    let p0 = default_start(kind, model, n_terms, template.strike(), seed, &spots, &target)?;
    let m = model_for(model, n_terms);
    let result = lm_fit(m.as_ref(), &spots, &target, &p0, opts)?;
    let fitted = spots.iter().map(|&s| m.eval(s, &result.params)).collect();
    Ok(Calibration {
        spots,
        target,
        fitted,
        result,
    })
}

/// Spec of the reference curves: `σ = 0.3`, `r = 0.05`, strike 100,
/// dividend yield 0.04, one year to maturity.
pub fn reference_template() -> OptionSpec {
    OptionSpec::new(100.0, 100.0, DEFAULT_RATE, 0.3, 1.0, 0.04).expect("valid constants")
}

/// Abscissae of strict interior local minima of `v` that lie in `[lo, hi]`.
pub fn interior_minima(s: &[f64], v: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i] < v[i - 1] && v[i] <= v[i + 1] && (lo..=hi).contains(&s[i]))
        .map(|i| s[i])
        .collect()
}

/// Sensitivities of `φ(s) = |√(−σ/r) tanh(s − ktσ)|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlsGreeks {
    pub delta: f64,
    pub gamma: f64,
    pub vega: f64,
    pub rho: f64,
    pub theta: f64,
}

/// Derivative of `|z|` along `z`: `z̄/|z|`, and 0 at the origin. For real `z`
/// this is `sign(z)`.
pub fn abs_prime(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.conj() / n
    }
}

/// Closed-form Greeks of the shock density with `β = r`, evaluated in complex
/// arithmetic and returned as real parts. The second derivative of `|·|` is
/// taken as 0. On the kink line `s = ktσ` every Greek carrying `abs′(0)` is 0.
pub fn nls_greeks(s: f64, sigma: f64, r: f64, k: f64, t: f64) -> Result<NlsGreeks> {
    check(r != 0.0 && r.is_finite(), "r", r, "must be finite and nonzero")?;
    let x = s - k * t * sigma;
    let th = x.tanh();
    let sech2 = 1.0 - th * th;
    let root = Complex64::new(-sigma / r, 0.0).sqrt();
    let root3 = root * root * root;
    let abs_root = (sigma / r).abs().sqrt();
    let d1 = abs_prime(root * th);
    let d2 = Complex64::new(0.0, 0.0);

    let delta = 2.0 * root * abs_root * sech2 * th.abs() * d1;
    // sech⁴·sinh(2x) written as sech²·2tanh to stay finite for large |x|
    let gamma = -(2.0 * sech2 / r)
        * (sigma * d1 * d1 * sech2 + abs_root * th.abs() * (sigma * d2 * sech2 + r * root * 2.0 * th * d1));
    let vega = root * abs_root * th.abs() * (th - 2.0 * k * t * sigma * sech2) * d1 / sigma;
    let rho = root3 * abs_root * th * th.abs() * d1 / sigma;
    let theta = 2.0 * k * r * root3 * abs_root * sech2 * th.abs() * d1;
    Ok(NlsGreeks {
        delta: delta.re,
        gamma: gamma.re,
        vega: vega.re,
        rho: rho.re,
        theta: theta.re,
    })
}
