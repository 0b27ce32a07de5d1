use anyhow::Result;
use awave_core::manakov::{beta_adaptive, gaussian_kernels, hebbian_closed_form, HebbConfig};
use awave_core::numerics::hebbian_step_with_forcing;
use awave_core::random::Stream;

use super::{usage, Outcome};
use crate::cli::HebbArgs;
use crate::output::{emit, Csv, Meta};

/// Kernel widths are drawn from (−1, 1) with |σᵢ| below this rejected.
const MIN_WIDTH: f64 = 0.25;

fn seeded_setup(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut stream = Stream::new(seed);
    let mut widths = Vec::with_capacity(n);
    while widths.len() < n {
        let w = stream.uniform(-1.0, 1.0);
        if w.abs() >= MIN_WIDTH {
            widths.push(w);
        }
    }
    let weights = (0..n).map(|_| stream.uniform(-1.0, 1.0)).collect();
    (widths, weights)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ")
}

pub fn run(a: &HebbArgs) -> Result<Outcome> {
    if a.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    if a.record_every == 0 {
        return Err(usage("--record-every must be >= 1"));
    }
    if !(a.dt > 0.0 && a.t_end > 0.0) {
        return Err(usage("--dt and --t-end must be > 0"));
    }
    let steps = (a.t_end / a.dt).round();
    if steps < 1.0 || (steps * a.dt - a.t_end).abs() > 1e-9 * a.t_end {
        return Err(usage("--t-end must be an integer multiple of --dt"));
    }
    let steps = steps as usize;
    let (widths, w0) = seeded_setup(a.n, a.common.seed);
    let cfg = HebbConfig::new(a.c, widths.clone(), w0.clone(), a.forcing)?;

    let meta = Meta::new("hebb", a.common.seed);
    let extra = [("widths", join(&widths)), ("initial_weights", join(&w0))];
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((1..=a.n).map(|i| format!("closed_{i}")));
    header.extend((1..=a.n).map(|i| format!("numeric_{i}")));
    header.extend(["beta_closed".into(), "beta_numeric".into(), "divergence".into()]);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&meta, &extra, &header_refs);

    let mut numeric = w0;
    let mut worst = 0.0f64;
    for j in 0..=steps {
        let t = j as f64 * a.dt;
        if j > 0 {
            numeric = hebbian_step_with_forcing(&numeric, &widths, a.c, a.forcing, t - a.dt, a.dt)?;
        }
        if j % a.record_every == 0 || j == steps {
            let closed = hebbian_closed_form(&cfg, t)?;
            let kernels = gaussian_kernels(&widths, t);
            // absolute below unit magnitude, relative above
            let divergence = closed
                .iter()
                .zip(&numeric)
                .map(|(c, n)| (c - n).abs() / c.abs().max(1.0))
                .fold(0.0, f64::max);
            worst = worst.max(divergence);
            let mut row = vec![t];
            row.extend(&closed);
            row.extend(&numeric);
            row.push(beta_adaptive(a.r, &closed, &kernels)?);
            row.push(beta_adaptive(a.r, &numeric, &kernels)?);
            row.push(divergence);
            csv.row(&row);
        }
    }
    emit(a.common.out.as_deref(), &csv.finish())?;
    Ok(if worst <= a.tol {
        Outcome::Pass
    } else {
        Outcome::CheckFailed(format!("closed form and numeric weights diverge by {worst:e}"))
    })
}
