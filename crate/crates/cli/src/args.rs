use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "landau",
    version,
    about = "Landau-level wavefunctions, gauge classes and observables"
)]
pub struct Cli {
    /// Worker threads for the data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(flatten)]
    pub physics: Physics,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Physics {
    /// Charge magnitude e.
    #[arg(short = 'e', long = "charge", default_value_t = 1.0, global = true)]
    pub e: f64,
    /// Magnetic field B.
    #[arg(short = 'B', long = "field", default_value_t = 1.0, global = true)]
    pub b: f64,
    /// Mass m_e.
    #[arg(long = "mass", default_value_t = 1.0, global = true)]
    pub m_e: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Probability density map: CSV `x,y,density`.
    Density(StateArgs),
    /// Current density map: CSV `x,y,jx,jy`.
    Current(StateArgs),
    /// Expectation values: CSV `operator,state,value_re,value_im,abs_err`.
    Expect(ExpectArgs),
    /// Drift and current decomposition in crossed fields.
    Hall(HallArgs),
    /// Degenerate Zeeman splitting of an oscillator shell, or the Landau
    /// non-splitting table with `--delta-b`.
    Zeeman(ZeemanArgs),
    /// First-gauge expansion coefficients of a symmetric-gauge state.
    Overlap(OverlapArgs),
    /// Runs the verification suite and prints a JSON report.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Symmetric,
    Landau1,
    Landau2,
    Packet,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Superposition,
    Product,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    /// Points along x (default: chosen from the state).
    #[arg(long)]
    pub nx: Option<usize>,
    /// Points along y (default: nx, or chosen from the state).
    #[arg(long)]
    pub ny: Option<usize>,
    /// Half-width of the window around the state's centre (default: auto).
    #[arg(long)]
    pub extent: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// CSV output path; the JSON sidecar goes next to it with a `.json` extension.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value_t = Family::Symmetric)]
    pub gauge: Family,
    /// Landau level.
    #[arg(short, long, default_value_t = 0)]
    pub n: u32,
    /// Canonical angular momentum (symmetric gauge).
    #[arg(short, long, allow_negative_numbers = true)]
    pub m: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    pub kx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ky: Option<f64>,
    /// Packet width in k.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value_t = Form::Superposition)]
    pub form: Form,
    /// Finite-difference accuracy order (2, 4, 6 or 8).
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectMode {
    /// Every applicable operator on one state.
    Table,
    /// r_c², R², L^can_z and the Johnson-Lippmann residual.
    Guiding,
    /// Mechanical vs conserved quantities across two gauge classes.
    Inequality,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExpectArgs {
    #[arg(long, value_enum, default_value_t = ExpectMode::Table)]
    pub mode: ExpectMode,
    /// Seed for the random gauge functions of the inequality mode.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HallArgs {
    #[arg(short, long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub kx: f64,
    /// Electric field E along y.
    #[arg(short = 'E', long = "e-field", allow_negative_numbers = true)]
    pub e_field: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ZeemanArgs {
    /// Oscillator shell n_x + n_y.
    #[arg(long, default_value_t = 1)]
    pub shell: usize,
    /// Perturbation strength λ in λ L_z.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub lambda: f64,
    /// Field increment: print Landau energies for `--ms` instead.
    #[arg(long, allow_negative_numbers = true)]
    pub delta_b: Option<f64>,
    /// Landau level for the non-splitting table.
    #[arg(short, long, default_value_t = 0)]
    pub n: u32,
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0,-5,-20"
    )]
    pub ms: Vec<i32>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OverlapArgs {
    #[arg(short, long, default_value_t = 0)]
    pub n: u32,
    #[arg(short, long, allow_negative_numbers = true, default_value_t = 0)]
    pub m: i32,
    /// First-gauge level to project on (default: n).
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 8.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 257)]
    pub nk: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Reduced case lists, same tolerances.
    #[arg(long)]
    pub fast: bool,
    /// Also write the report to this file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
