use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "awave", version, about = "Batch runner for option-pricing wave models; emits CSV and JSON")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Black–Scholes prices and Greeks over a spot grid.
    BsPrice(BsPriceArgs),
    /// Re, Im and |ψ|² of a closed-form wave over an (s, t) lattice.
    WaveSurface(WaveSurfaceArgs),
    /// Equation residual of a closed-form wave or a sampled field file.
    Residual(ResidualArgs),
    /// Levenberg–Marquardt fit of a wave density to a Black–Scholes curve.
    Fit(FitArgs),
    /// Two-component split-step run with per-snapshot mass diagnostics.
    Manakov(ManakovArgs),
    /// Hebbian weights: closed form next to numeric integration.
    Hebb(HebbArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; relative paths resolve under AWAVE_OUT_DIR when it is set.
    /// Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BsPriceArgs {
    #[arg(long)]
    pub s_min: f64,
    #[arg(long)]
    pub s_max: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub strike: f64,
    #[arg(long)]
    pub rate: f64,
    #[arg(long)]
    pub vol: f64,
    #[arg(long)]
    pub maturity: f64,
    #[arg(long, default_value_t = 0.0)]
    pub div: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solution {
    Sn,
    Tanh,
    Cn,
    Sech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[arg(long, value_enum)]
    pub solution: Solution,
    /// Wave number.
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub beta: f64,
    /// Elliptic modulus for sn and cn.
    #[arg(long, default_value_t = 0.5)]
    pub m: f64,
    #[arg(long, value_enum, default_value = "plus")]
    pub branch: BranchArg,
}

/// `lo:hi`, or a single value for a degenerate range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

pub fn parse_range(text: &str) -> Result<Range, String> {
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad number '{v}': {e}"));
    let range = match text.split_once(':') {
        Some((a, b)) => Range {
            lo: parse(a)?,
            hi: parse(b)?,
        },
        None => {
            let v = parse(text)?;
            Range { lo: v, hi: v }
        }
    };
    if !(range.lo.is_finite() && range.hi.is_finite()) || range.hi < range.lo {
        return Err(format!("range '{text}' must be finite with lo <= hi"));
    }
    Ok(range)
}

#[derive(Debug, Args)]
pub struct WaveSurfaceArgs {
    #[command(flatten)]
    pub wave: WaveArgs,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-7:18")]
    pub s: Range,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0:5")]
    pub t: Range,
    #[arg(long, default_value_t = 101)]
    pub ns: usize,
    #[arg(long, default_value_t = 51)]
    pub nt: usize,
    /// Drive σ along t with a reflected Gaussian random walk started at --sigma.
    #[arg(long)]
    pub stochastic_vol: bool,
    #[arg(long, default_value_t = 0.05)]
    pub vol_step: f64,
    #[arg(long, value_parser = parse_range, default_value = "0.1:2")]
    pub vol_bounds: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long, value_enum)]
    pub solution: Option<Solution>,
    /// Wave-surface CSV to check instead of a closed form; derivatives come
    /// from differences on its lattice.
    #[arg(long, conflicts_with = "solution")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub m: f64,
    #[arg(long, value_enum, default_value = "plus")]
    pub branch: BranchArg,
    /// Defaults to analytic for --solution and fd for --file.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Difference step for --mode fd.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-7:18")]
    pub s: Range,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0:5")]
    pub t: Range,
    #[arg(long, default_value_t = 21)]
    pub ns: usize,
    #[arg(long, default_value_t = 21)]
    pub nt: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Shock,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// Black–Scholes curve of --kind.
    Bs,
    /// The model itself at the starting parameters; the fit starts from a
    /// perturbed copy.
    SelfFit,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum, default_value = "call")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "shock")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 5)]
    pub n_terms: usize,
    #[arg(long, value_enum, default_value = "bs")]
    pub target: TargetArg,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// JSON array of starting parameters; replaces the seeded start.
    #[arg(long)]
    pub init_file: Option<PathBuf>,
    /// Exit 1 when RMSE exceeds this fraction of the target maximum.
    #[arg(long)]
    pub max_rel_rmse: Option<f64>,
    /// Where to write the JSON report; standard output when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    #[value(name = "2soliton-collision")]
    Collision,
    Dark,
    Kink,
    Hump,
    Zero,
}

#[derive(Debug, Args)]
pub struct ManakovArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    #[arg(long, default_value_t = 0.005)]
    pub dt: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-40:40")]
    pub s: Range,
    #[arg(long, default_value_t = 100)]
    pub record_every: usize,
    /// Exit 1 when any component's relative mass drift exceeds this.
    #[arg(long, default_value_t = 1e-7)]
    pub mass_tol: f64,
    /// Also write every recorded field to this CSV.
    #[arg(long)]
    pub fields: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HebbArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Learning rate c.
    #[arg(long, default_value_t = 0.7)]
    pub c: f64,
    /// Constant forcing |σ||ψ|.
    #[arg(long, default_value_t = 1.0)]
    pub forcing: f64,
    /// Interest rate scaling the potential.
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 100)]
    pub record_every: usize,
    /// Exit 1 when the scaled divergence exceeds this.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}
