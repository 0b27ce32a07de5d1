use std::collections::HashMap;
use std::path::Path;

use anyhow::{Context, Result};
use awave_core::waves::{nls_residual, residual_lattice, AnalyticWave, DerivativeMode, ResidualNorm};
use awave_core::Complex64;
use serde::Serialize;

use super::{family, usage, wave_params, Outcome};
use crate::cli::{ModeArg, ResidualArgs};
use crate::output::{emit, json, read_csv, Meta};

#[derive(Serialize)]
struct Grid {
    s_min: f64,
    s_max: f64,
    n_s: usize,
    t_min: f64,
    t_max: f64,
    n_t: usize,
}

#[derive(Serialize)]
struct Report {
    source: String,
    mode: &'static str,
    h_s: Option<f64>,
    h_t: Option<f64>,
    sigma: f64,
    beta: f64,
    grid: Grid,
    max: f64,
    rms: f64,
    points: usize,
    tol: f64,
    pass: bool,
}

pub fn run(a: &ResidualArgs) -> Result<Outcome> {
    let report = match (&a.solution, &a.file) {
        (Some(sol), None) => closed_form(a, *sol)?,
        (None, Some(path)) => from_file(a, path)?,
        _ => return Err(usage("give exactly one of --solution or --file")),
    };
    let pass = report.pass;
    let summary = format!("max residual {:e} vs tol {:e}", report.max, report.tol);
    emit(a.common.out.as_deref(), &json(&Meta::new("residual", a.common.seed), &report)?)?;
    Ok(if pass { Outcome::Pass } else { Outcome::CheckFailed(summary) })
}

fn closed_form(a: &ResidualArgs, sol: crate::cli::Solution) -> Result<Report> {
    let k = a.k.ok_or_else(|| usage("--k is required with --solution"))?;
    let fam = family(sol);
    let params = wave_params(k, a.m, a.sigma, a.beta, a.branch)?;
    let wave = AnalyticWave { family: fam, params };
    let points = residual_lattice((a.s.lo, a.s.hi), (a.t.lo, a.t.hi), a.ns, a.nt);
    let (mode, name, h) = match a.mode.unwrap_or(ModeArg::Analytic) {
        ModeArg::Analytic => (DerivativeMode::Analytic, "analytic", None),
        ModeArg::Fd => (DerivativeMode::FiniteDifference { h_s: a.h, h_t: a.h }, "finite-difference", Some(a.h)),
    };
    let r = nls_residual(&wave, a.sigma, a.beta, &points, mode)?;
    Ok(report(fam.name().to_string(), name, h, h, a, grid(a.s.lo, a.s.hi, a.ns, a.t.lo, a.t.hi, a.nt), r))
}

fn grid(s_min: f64, s_max: f64, n_s: usize, t_min: f64, t_max: f64, n_t: usize) -> Grid {
    Grid {
        s_min,
        s_max,
        n_s,
        t_min,
        t_max,
        n_t,
    }
}

fn report(source: String, mode: &'static str, h_s: Option<f64>, h_t: Option<f64>, a: &ResidualArgs, grid: Grid, r: ResidualNorm) -> Report {
    Report {
        source,
        mode,
        h_s,
        h_t,
        sigma: a.sigma,
        beta: a.beta,
        grid,
        max: r.max,
        rms: r.rms,
        points: r.points,
        tol: a.tol,
        // NaN never passes
        pass: r.max < a.tol,
    }
}

fn column(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| usage(format!("field file has no '{name}' column")))
}

fn uniform_axis(values: &[f64], what: &str) -> Result<f64> {
    if values.len() < 3 {
        return Err(usage(format!("field file needs at least 3 distinct {what} values")));
    }
    let h = values[1] - values[0];
    for w in values.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(usage(format!("field file {what} values are not evenly spaced")));
        }
    }
    Ok(h)
}

/// Central differences on the file's own lattice, interior points only.
fn from_file(a: &ResidualArgs, path: &Path) -> Result<Report> {
    if a.mode == Some(ModeArg::Analytic) {
        return Err(usage("a field file only supports --mode fd"));
    }
    let (header, rows) = read_csv(path).with_context(|| format!("field file {}", path.display()))?;
    let (ci_s, ci_t, ci_re, ci_im) = (column(&header, "s")?, column(&header, "t")?, column(&header, "re")?, column(&header, "im")?);
    let mut field: HashMap<(u64, u64), Complex64> = HashMap::with_capacity(rows.len());
    let mut ss: Vec<f64> = Vec::new();
    let mut ts: Vec<f64> = Vec::new();
    for r in &rows {
        field.insert((r[ci_s].to_bits(), r[ci_t].to_bits()), Complex64::new(r[ci_re], r[ci_im]));
        ss.push(r[ci_s]);
        ts.push(r[ci_t]);
    }
    for v in [&mut ss, &mut ts] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let h_s = uniform_axis(&ss, "s")?;
    let h_t = uniform_axis(&ts, "t")?;
    let at = |i: usize, j: usize| -> Result<Complex64> {
        field
            .get(&(ss[i].to_bits(), ts[j].to_bits()))
            .copied()
            .ok_or_else(|| usage(format!("field file is missing the point s={}, t={}", ss[i], ts[j])))
    };
    let mut max = 0.0f64;
    let mut sum_sq = 0.0;
    let mut points = 0;
    for j in 1..ts.len() - 1 {
        for i in 1..ss.len() - 1 {
            let v = at(i, j)?;
            let dt = (at(i, j + 1)? - at(i, j - 1)?) / (2.0 * h_t);
            let dss = (at(i + 1, j)? - 2.0 * v + at(i - 1, j)?) / (h_s * h_s);
            let r = (Complex64::i() * dt + 0.5 * a.sigma * dss + a.beta * v.norm_sqr() * v).norm();
            max = max.max(r);
            sum_sq += r * r;
            points += 1;
        }
    }
    let r = ResidualNorm {
        max,
        rms: (sum_sq / points as f64).sqrt(),
        points,
    };
    let g = grid(ss[0], ss[ss.len() - 1], ss.len(), ts[0], ts[ts.len() - 1], ts.len());
    Ok(report(path.display().to_string(), "finite-difference", Some(h_s), Some(h_t), a, g, r))
}
