use anyhow::Result;
use awave_core::manakov::{bright_2soliton, dark_soliton, kink_soliton, stationary_hump, ManakovParams, Normalization};
use awave_core::numerics::{evolve_coupled, mass, Boundary, CoupledSnapshot, EvolutionConfig, GridSpec};
use awave_core::random::Stream;
use awave_core::{Complex64, ComplexField};

use super::Outcome;
use crate::cli::{ManakovArgs, Scenario};
use crate::output::{emit, Csv, Meta};

const DARK_K: f64 = 0.7;
const KINK_W: f64 = 1.0;
const HUMP_W: f64 = 1.0;
/// Initial separation of the colliding pulses.
const COLLISION_OFFSET: f64 = 10.0;

struct Setup {
    name: &'static str,
    boundary: Boundary,
    norm: Normalization,
    sigma: Box<dyn Fn(f64) -> Complex64>,
    psi: Box<dyn Fn(f64) -> Complex64>,
}

fn setup(scenario: Scenario, seed: u64) -> Result<Setup> {
    let zero = Complex64::new(0.0, 0.0);
    Ok(match scenario {
        Scenario::Collision => {
            // relative phase of the two pulses drawn from the seed
            let phase = 2.0 * std::f64::consts::PI * Stream::new(seed).uniform_open();
            let one = [Complex64::new(1.0, 0.0), zero];
            let left = ManakovParams::new(-0.25, 0.5, one)?;
            let right = ManakovParams::new(0.25, 0.5, [Complex64::from_polar(1.0, phase), zero])?;
            Setup {
                name: "2soliton-collision",
                boundary: Boundary::Periodic,
                norm: Normalization::BRIGHT,
                sigma: Box::new(move |s| bright_2soliton(s + COLLISION_OFFSET, 0.0, &left)[0]),
                psi: Box::new(move |s| bright_2soliton(s - COLLISION_OFFSET, 0.0, &right)[0]),
            }
        }
        Scenario::Dark => Setup {
            name: "dark",
            boundary: Boundary::Reflecting,
            norm: Normalization::DEFOCUSING_UNIT,
            sigma: Box::new(|s| dark_soliton(s, 0.0, DARK_K)[0]),
            psi: Box::new(|s| dark_soliton(s, 0.0, DARK_K)[1]),
        },
        Scenario::Kink => Setup {
            name: "kink",
            boundary: Boundary::Reflecting,
            norm: Normalization::DEFOCUSING_UNIT,
            sigma: Box::new(|s| kink_soliton(s, 0.0, KINK_W)[0]),
            psi: Box::new(|s| kink_soliton(s, 0.0, KINK_W)[1]),
        },
        Scenario::Hump => Setup {
            name: "hump",
            boundary: Boundary::Periodic,
            norm: Normalization::FOCUSING_UNIT,
            sigma: Box::new(|s| stationary_hump(s, HUMP_W).0.into()),
            psi: Box::new(|s| stationary_hump(s, HUMP_W).1.into()),
        },
        Scenario::Zero => Setup {
            name: "zero",
            boundary: Boundary::Periodic,
            norm: Normalization::FOCUSING_UNIT,
            sigma: Box::new(move |_| zero),
            psi: Box::new(move |_| zero),
        },
    })
}

fn drift(m: f64, m0: f64) -> f64 {
    if m0 > 0.0 {
        (m - m0).abs() / m0
    } else {
        (m - m0).abs()
    }
}

pub fn run(a: &ManakovArgs) -> Result<Outcome> {
    let sc = setup(a.scenario, a.common.seed)?;
    let grid = GridSpec::new(a.s.lo, a.s.hi, a.n, sc.boundary)?;
    let sigma0 = ComplexField::sample(grid.uniform(), 0.0, &sc.sigma)?;
    let psi0 = ComplexField::sample(grid.uniform(), 0.0, &sc.psi)?;
    let (d, beta) = sc.norm.integrator_coefficients();
    let cfg = EvolutionConfig::constant(a.dt, a.t_end, d, beta, a.record_every);
    let snaps = evolve_coupled(&sigma0, &psi0, &grid, &cfg)?;

    let meta = Meta::new("manakov", a.common.seed);
    let extra = [
        ("scenario", sc.name.to_string()),
        ("dispersion", format!("{d}")),
        ("nonlinearity", format!("{beta}")),
        ("boundary", format!("{:?}", sc.boundary).to_lowercase()),
    ];
    let (m_sigma, m_psi) = (mass(&sigma0), mass(&psi0));
    let mut worst = 0.0f64;
    let mut csv = Csv::new(
        &meta,
        &extra,
        &["t", "mass_sigma", "mass_psi", "drift_sigma", "drift_psi", "peak_sigma", "peak_psi"],
    );
    for snap in &snaps {
        let (ms, mp) = (mass(&snap.sigma), mass(&snap.psi));
        let (ds, dp) = (drift(ms, m_sigma), drift(mp, m_psi));
        worst = worst.max(ds).max(dp);
        csv.row(&[snap.sigma.time(), ms, mp, ds, dp, snap.sigma.max_abs(), snap.psi.max_abs()]);
    }
    emit(a.common.out.as_deref(), &csv.finish())?;
    if let Some(path) = &a.fields {
        emit(Some(path), &fields_csv(&meta, &extra, &snaps))?;
    }
    Ok(if worst <= a.mass_tol {
        Outcome::Pass
    } else {
        Outcome::CheckFailed(format!("mass drift {worst:e} exceeds {:e}", a.mass_tol))
    })
}

fn fields_csv(meta: &Meta, extra: &[(&str, String)], snaps: &[CoupledSnapshot]) -> String {
    let mut csv = Csv::new(meta, extra, &["t", "s", "re_sigma", "im_sigma", "re_psi", "im_psi"]);
    for snap in snaps {
        let t = snap.sigma.time();
        for ((s, a), b) in snap.sigma.grid().points().zip(snap.sigma.values()).zip(snap.psi.values()) {
            csv.row(&[t, s, a.re, a.im, b.re, b.im]);
        }
    }
    csv.finish()
}
