use anyhow::Result;
use awave_core::black_scholes::volatility_random_walk;
use awave_core::waves::psi;

use super::{axis, family, wave_params, Outcome};
use crate::cli::WaveSurfaceArgs;
use crate::output::{emit, Csv, Meta};

pub fn run(a: &WaveSurfaceArgs) -> Result<Outcome> {
    let w = &a.wave;
    let fam = family(w.solution);
    let base = wave_params(w.k, w.m, w.sigma, w.beta, w.branch)?;
    let ss = axis(a.s, a.ns)?;
    let ts = axis(a.t, a.nt)?;
    let sigmas: Vec<f64> = if a.stochastic_vol {
        volatility_random_walk(w.sigma, a.vol_step, ts.len() - 1, (a.vol_bounds.lo, a.vol_bounds.hi), a.common.seed)?.values
    } else {
        vec![w.sigma; ts.len()]
    };

    let meta = Meta::new("wave-surface", a.common.seed);
    let extra = [
        ("solution", fam.name().to_string()),
        ("omega", format!("{}", base.frequency(fam))),
    ];
    let mut csv = Csv::new(&meta, &extra, &["s", "t", "sigma", "re", "im", "density"]);
    for (&t, &sigma) in ts.iter().zip(&sigmas) {
        let p = wave_params(w.k, w.m, sigma, w.beta, w.branch)?;
        for &s in &ss {
            let v = psi(fam, s, t, &p);
            csv.row(&[s, t, sigma, v.re, v.im, v.norm_sqr()]);
        }
    }
    emit(a.common.out.as_deref(), &csv.finish())?;
    Ok(Outcome::Pass)
}
