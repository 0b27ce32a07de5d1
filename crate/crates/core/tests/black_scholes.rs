#[allow(dead_code)]
mod support;

use awave_core::black_scholes::{
    greeks, price, price_call, price_put, simulate_gbm, volatility_random_walk, OptionKind, OptionSpec,
};
use support::{lognormal_call, lognormal_put, TestRng};

fn random_spec(rng: &mut TestRng) -> OptionSpec {
    OptionSpec::new(
        rng.uniform(50.0, 150.0),
        rng.uniform(70.0, 130.0),
        rng.uniform(0.0, 0.08),
        rng.uniform(0.1, 0.6),
        rng.uniform(0.2, 2.0),
        rng.uniform(0.0, 0.05),
    )
    .unwrap()
}

// Richardson-extrapolated central differences, O(h⁴).
fn d1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * c(0.5 * h) - c(h)) / 3.0
}

fn d2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * c(0.5 * h) - c(h)) / 3.0
}

fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}

#[test]
fn put_call_parity_on_random_specs() {
    let mut rng = TestRng::new(11);
    for _ in 0..50 {
        let o = random_spec(&mut rng);
        let lhs = price_call(&o) - price_put(&o);
        let rhs = o.spot() * (-o.dividend_yield() * o.maturity()).exp() - o.strike() * (-o.rate() * o.maturity()).exp();
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }
}

#[test]
fn prices_match_lognormal_quadrature() {
    let template = OptionSpec::new(100.0, 100.0, 0.05, 0.3, 1.0, 0.04).unwrap();
    for j in 0..=40 {
        let s = 50.0 + 2.5 * j as f64;
        let o = template.with_spot(s).unwrap();
        let call = lognormal_call(s, 100.0, 0.05, 0.3, 1.0, 0.04);
        let put = lognormal_put(s, 100.0, 0.05, 0.3, 1.0, 0.04);
        assert!((price_call(&o) - call).abs() < 1e-8, "call at {s}");
        assert!((price_put(&o) - put).abs() < 1e-8, "put at {s}");
    }
}

#[test]
fn greeks_match_finite_differences() {
    let mut rng = TestRng::new(23);
    for _ in 0..50 {
        let o = random_spec(&mut rng);
        for kind in [OptionKind::Call, OptionKind::Put] {
            let g = greeks(&o, kind);
            // steps scaled to the log-spot standard deviation
            let hs = 0.02 * o.volatility() * o.maturity().sqrt() * o.spot();
            let delta = d1(|x| price(&o.with_spot(x).unwrap(), kind), o.spot(), hs);
            let gamma = d2(|x| price(&o.with_spot(x).unwrap(), kind), o.spot(), hs);
            let vega = d1(|x| price(&o.with_volatility(x).unwrap(), kind), o.volatility(), 1e-3);
            let rho = d1(|x| price(&o.with_rate(x).unwrap(), kind), o.rate(), 1e-3);
            let theta = d1(|x| price(&o.with_maturity(x).unwrap(), kind), o.maturity(), 1e-2 * o.maturity());
            for (name, exact, fd) in [
                ("delta", g.delta, delta),
                ("gamma", g.gamma, gamma),
                ("vega", g.vega, vega),
                ("rho", g.rho, rho),
                ("theta", g.theta, theta),
            ] {
                assert!(close(exact, fd, 1e-6, 1e-3), "{kind:?} {name}: {exact} vs {fd} at {o:?}");
            }
        }
    }
}

#[test]
fn gbm_sample_mean_tracks_drift() {
    let (s0, mu, sigma, horizon) = (100.0, 0.05, 0.2, 1.0);
    let n = 100_000;
    let finals: Vec<f64> = (0..n)
        .map(|seed| *simulate_gbm(s0, mu, sigma, horizon, 4, seed).unwrap().values.last().unwrap())
        .collect();
    let mean = finals.iter().sum::<f64>() / n as f64;
    let expected = s0 * (mu * horizon).exp();
    let sd = expected * ((sigma * sigma * horizon).exp() - 1.0).sqrt();
    let se = sd / (n as f64).sqrt();
    assert!((mean - expected).abs() < 5.0 * se, "{mean} vs {expected} (se {se})");

    let log_returns: Vec<f64> = finals.iter().map(|v| (v / s0).ln()).collect();
    let m = log_returns.iter().sum::<f64>() / n as f64;
    let var = log_returns.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((m - (mu - 0.5 * sigma * sigma) * horizon).abs() < 5.0 * sigma / (n as f64).sqrt());
    assert!((var / (sigma * sigma * horizon) - 1.0).abs() < 0.02);
}

#[test]
fn gbm_without_volatility_is_deterministic() {
    let path = simulate_gbm(80.0, 0.03, 0.0, 2.0, 10, 5).unwrap();
    for (t, v) in path.times.iter().zip(&path.values) {
        assert!((v - 80.0 * (0.03 * t).exp()).abs() < 1e-12);
    }
}

#[test]
fn walk_increments_have_step_variance() {
    let step = 0.01;
    let path = volatility_random_walk(0.5, step, 20_000, (1e-3, 1e3), 9).unwrap();
    let inc: Vec<f64> = path.values.windows(2).map(|w| w[1] - w[0]).collect();
    let m = inc.iter().sum::<f64>() / inc.len() as f64;
    let var = inc.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (inc.len() - 1) as f64;
    assert!((var / (step * step) - 1.0).abs() < 0.05, "{var}");
}
