use anyhow::Result;
use awave_core::black_scholes::{greeks, price_call, price_put, OptionKind, OptionSpec};

use super::{usage, Outcome};
use crate::cli::BsPriceArgs;
use crate::output::{emit, Csv, Meta};

pub fn run(a: &BsPriceArgs) -> Result<Outcome> {
    if a.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    if !(a.s_min <= a.s_max) {
        return Err(usage("--s-min must not exceed --s-max"));
    }
    let template = OptionSpec::new(a.s_min, a.strike, a.rate, a.vol, a.maturity, a.div)?;
    let meta = Meta::new("bs-price", a.common.seed);
    let mut csv = Csv::new(
        &meta,
        &[],
        &[
            "spot", "call", "put", "call_delta", "call_gamma", "call_vega", "call_rho", "call_theta", "put_delta",
            "put_gamma", "put_vega", "put_rho", "put_theta",
        ],
    );
    for j in 0..a.n {
        let s = if a.n == 1 {
            a.s_min
        } else {
            a.s_min + (a.s_max - a.s_min) * j as f64 / (a.n - 1) as f64
        };
        let o = template.with_spot(s)?;
        let c = greeks(&o, OptionKind::Call);
        let p = greeks(&o, OptionKind::Put);
        csv.row(&[
            s,
            price_call(&o),
            price_put(&o),
            c.delta,
            c.gamma,
            c.vega,
            c.rho,
            c.theta,
            p.delta,
            p.gamma,
            p.vega,
            p.rho,
            p.theta,
        ]);
    }
    emit(a.common.out.as_deref(), &csv.finish())?;
    Ok(Outcome::Pass)
}
