use anyhow::{Context, Result};
use awave_core::black_scholes::OptionKind;
use awave_core::fit::{
    bs_curve, default_start, fit_scalings, interior_minima, lm_fit, model_for, reference_template, LmOptions, ModelKind,
    ReferenceScales, ScalingRatios, FIT_POINTS, FIT_WINDOW,
};
use awave_core::random::Stream;
use serde::Serialize;

use super::{usage, Outcome};
use crate::cli::{FitArgs, KindArg, ModelArg, TargetArg};
use crate::output::{emit, json, Csv, Meta};

/// Relative size of the self-fit start perturbation.
const SELF_FIT_JITTER: f64 = 0.02;

#[derive(Serialize)]
struct Report {
    kind: &'static str,
    model: &'static str,
    n_terms: usize,
    target: &'static str,
    initial_params: Vec<f64>,
    params: Vec<f64>,
    rmse: f64,
    relative_rmse: f64,
    iterations: usize,
    converged: bool,
    loss_trace: Vec<f64>,
    /// Strict local minima of the fitted curve within s ∈ [90, 110].
    interior_minima: Vec<f64>,
    scalings: ScalingRatios,
    max_rel_rmse: Option<f64>,
    pass: bool,
}

pub fn run(a: &FitArgs) -> Result<Outcome> {
    if a.n_terms == 0 {
        return Err(usage("--n-terms must be >= 1"));
    }
    let kind = match a.kind {
        KindArg::Call => OptionKind::Call,
        KindArg::Put => OptionKind::Put,
    };
    let model_kind = match a.model {
        ModelArg::Shock => ModelKind::Shock,
        ModelArg::Mixed => ModelKind::Mixed,
    };
    let template = reference_template();
    let model = model_for(model_kind, a.n_terms);
    let (spots, bs) = bs_curve(kind, &template, FIT_WINDOW, FIT_POINTS)?;

    let base = match &a.init_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let p: Vec<f64> = serde_json::from_str(&text).map_err(|e| usage(format!("init file must be a JSON array of numbers: {e}")))?;
            if p.len() != model.n_params() {
                return Err(usage(format!("init file has {} parameters, model needs {}", p.len(), model.n_params())));
            }
            p
        }
        None => default_start(kind, model_kind, a.n_terms, template.strike(), a.common.seed, &spots, &bs)?,
    };
    let (target, start) = match a.target {
        TargetArg::Bs => (bs, base),
        TargetArg::SelfFit => {
            let target: Vec<f64> = spots.iter().map(|&s| model.eval(s, &base)).collect();
            let mut stream = Stream::new(a.common.seed);
            let start = base
                .iter()
                .map(|p| p * (1.0 + SELF_FIT_JITTER * stream.uniform(-1.0, 1.0)))
                .collect();
            (target, start)
        }
    };

    let opts = LmOptions {
        max_iter: a.max_iter,
        ..LmOptions::default()
    };
    let result = lm_fit(model.as_ref(), &spots, &target, &start, &opts)?;
    let fitted: Vec<f64> = spots.iter().map(|&s| model.eval(s, &result.params)).collect();
    let peak = target.iter().cloned().fold(0.0, f64::max);
    let relative_rmse = result.rmse / peak;
    let pass = a.max_rel_rmse.is_none_or(|lim| relative_rmse <= lim);
    let scalings = fit_scalings(
        &result,
        &ReferenceScales {
            sigma: template.volatility(),
            strike: template.strike(),
            maturity: template.maturity(),
        },
    )?;

    let meta = Meta::new("fit", a.common.seed);
    if let Some(out) = &a.common.out {
        let mut csv = Csv::new(&meta, &[], &["spot", "target", "fitted"]);
        for ((s, y), f) in spots.iter().zip(&target).zip(&fitted) {
            csv.row(&[*s, *y, *f]);
        }
        emit(Some(out), &csv.finish())?;
    }
    let report = Report {
        kind: match kind {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        },
        model: match model_kind {
            ModelKind::Shock => "shock",
            ModelKind::Mixed => "mixed",
        },
        n_terms: a.n_terms,
        target: match a.target {
            TargetArg::Bs => "black-scholes",
            TargetArg::SelfFit => "self",
        },
        initial_params: start,
        interior_minima: interior_minima(&spots, &fitted, 90.0, 110.0),
        params: result.params,
        rmse: result.rmse,
        relative_rmse,
        iterations: result.iterations,
        converged: result.converged,
        loss_trace: result.loss_trace,
        scalings,
        max_rel_rmse: a.max_rel_rmse,
        pass,
    };
    emit(a.report.as_deref(), &json(&meta, &report)?)?;
    Ok(if pass {
        Outcome::Pass
    } else {
        Outcome::CheckFailed(format!("relative RMSE {relative_rmse:e} above limit"))
    })
}
