#[allow(dead_code)]
mod support;

use awave_core::fit::{
    fit_scalings, interior_minima, lm_fit, nls_greeks, potential_from_params, shock_pdf, CurveModel, LmOptions,
    ReferenceScales, ShockModel,
};
use support::{normal_equations, TestRng};

struct Linear;

impl CurveModel for Linear {
    fn n_params(&self) -> usize {
        3
    }
    fn eval(&self, s: f64, p: &[f64]) -> f64 {
        p[0] + p[1] * s + p[2] * s.sin()
    }
}

#[test]
fn linear_model_matches_normal_equations() {
    let mut rng = TestRng::new(5);
    let s: Vec<f64> = (0..80).map(|j| 0.1 * j as f64).collect();
    let y: Vec<f64> = s.iter().map(|&x| 1.5 - 0.3 * x + 2.0 * x.sin() + rng.uniform(-0.2, 0.2)).collect();
    let rows: Vec<Vec<f64>> = s.iter().map(|&x| vec![1.0, x, x.sin()]).collect();
    let oracle = normal_equations(&rows, &y);
    let fit = lm_fit(&Linear, &s, &y, &[0.0, 0.0, 0.0], &LmOptions::default()).unwrap();
    assert!(fit.converged);
    for (a, b) in fit.params.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8 * b.abs().max(1.0), "{:?} vs {oracle:?}", fit.params);
    }
}

#[test]
fn loss_trace_never_increases() {
    let s: Vec<f64> = (0..50).map(|j| j as f64 / 10.0).collect();
    let y: Vec<f64> = s.iter().map(|&x| 3.0 * x.sin() + 0.5).collect();
    let fit = lm_fit(&Linear, &s, &y, &[10.0, -4.0, 0.0], &LmOptions::default()).unwrap();
    assert_eq!(fit.loss_trace.len(), fit.iterations + 1);
    assert!(fit.loss_trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(fit.rmse < 1e-10);
}

#[test]
fn shock_model_recovers_its_own_curve() {
    let model = ShockModel { rate: 0.05, n_terms: 2 };
    let truth = [0.3, 1.0, 30.0, 1.0, 2.0, 100.0, 0.5, 0.8, 100.0];
    let s: Vec<f64> = (0..201).map(|j| 50.0 + 0.5 * j as f64).collect();
    let y: Vec<f64> = s.iter().map(|&x| model.eval(x, &truth)).collect();
    let init: Vec<f64> = truth.iter().enumerate().map(|(i, v)| v * if i % 2 == 0 { 1.04 } else { 0.97 }).collect();
    let fit = lm_fit(&model, &s, &y, &init, &LmOptions::default()).unwrap();
    assert!(fit.rmse < 1e-6, "rmse {}", fit.rmse);

    let pot = potential_from_params(0.05, 2, &fit.params).unwrap();
    assert_eq!(pot.n(), 2);
    let ratios = fit_scalings(&fit, &ReferenceScales { sigma: 0.3, strike: 100.0, maturity: 1.0 }).unwrap();
    assert_eq!(ratios.sigma_ratio, fit.params[0] / 0.3);
}

#[test]
fn interior_minima_finds_strict_dips_in_window() {
    let s: Vec<f64> = (0..11).map(|j| j as f64).collect();
    let v = [5.0, 4.0, 3.0, 4.0, 5.0, 5.0, 2.0, 6.0, 7.0, 1.0, 3.0];
    assert_eq!(interior_minima(&s, &v, 0.0, 10.0), vec![2.0, 6.0, 9.0]);
    assert_eq!(interior_minima(&s, &v, 5.0, 8.0), vec![6.0]);
}

// Richardson-extrapolated central differences, O(h⁴).
fn rich1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * c(0.5 * h) - c(h)) / 3.0
}

fn rich2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * c(0.5 * h) - c(h)) / 3.0
}

fn nls_greek_points(seed: u64, n: usize) -> Vec<(f64, f64, f64, f64, f64)> {
    let mut rng = TestRng::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let sign = |rng: &mut TestRng| if rng.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let sigma = sign(&mut rng) * rng.uniform(0.1, 1.0);
        let r = sign(&mut rng) * rng.uniform(0.02, 0.1);
        let k = rng.uniform(0.5, 2.0);
        let t = rng.uniform(0.0, 2.0);
        let x = rng.uniform(-5.0, 5.0);
        if x.abs() < 0.01 {
            continue;
        }
        out.push((x + k * t * sigma, sigma, r, k, t));
    }
    out
}

#[test]
fn nls_greeks_match_finite_differences() {
    for (s, sigma, r, k, t) in nls_greek_points(41, 100) {
        let g = nls_greeks(s, sigma, r, k, t).unwrap();
        let h = 1e-3;
        let checks = [
            ("delta", g.delta, rich1(|x| shock_pdf(x, sigma, r, k, t), s, h)),
            ("gamma", g.gamma, rich2(|x| shock_pdf(x, sigma, r, k, t), s, 1e-2)),
            ("vega", g.vega, rich1(|x| shock_pdf(s, x, r, k, t), sigma, 1e-3 * sigma.abs())),
            ("rho", g.rho, rich1(|x| shock_pdf(s, sigma, x, k, t), r, 1e-3 * r.abs())),
            ("theta", g.theta, rich1(|x| shock_pdf(s, sigma, r, k, x), t, h)),
        ];
        let scale = (sigma / r).abs();
        for (name, exact, fd) in checks {
            let tol = 1e-6 * exact.abs().max(1e-3 * scale);
            assert!((exact - fd).abs() <= tol, "{name} at {:?}: {exact} vs {fd}", (s, sigma, r, k, t));
        }
        assert!((g.theta / g.delta + k * sigma).abs() < 1e-10 * k * sigma.abs() || g.delta == 0.0);
    }
}
