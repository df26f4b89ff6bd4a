use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Interface revision reported by --help; bump on any flag or output change.
pub const INTERFACE_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "hwlaw",
    version,
    about = "Hartman-Watson density, exponential-functional and Bessel-clock laws (interface v1)",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage or domain error, 3 non-convergence.\nHW_NUM_THREADS caps worker threads."
)]
pub struct Cli {
    /// key=value file presetting tolerances (abs_tol, rel_tol, max_subdivisions, truncation_sigma, osc_nodes_per_period)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory receiving outputs and the run manifest
    #[arg(long, global = true, default_value = "hwlaw-out")]
    pub out_dir: PathBuf,

    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
pub enum Command {
    /// Θ(r,t) on a grid
    Theta(ThetaArgs),
    /// Density curves with a normalization row
    Density(DensityArgs),
    /// Identity, Laplace and flatness checks as a JSON report
    Verify(VerifyArgs),
    /// Monte Carlo ensembles and statistics
    Mc(McArgs),
    /// Re-run the command recorded in a manifest
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Theta(_) => "theta",
            Command::Density(_) => "density",
            Command::Verify(_) => "verify",
            Command::Mc(_) => "mc",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ThetaArgs {
    /// Comma-separated r values
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub r: Vec<f64>,
    /// Comma-separated t values
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub t: Vec<f64>,
    /// yor, coscos, sinsin, averaged, shifted:<nu> or all
    #[arg(long, default_value = "coscos")]
    pub rep: String,
    /// Shift used for the shifted row of --rep all
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityKind {
    Amu,
    Joint,
    Ratio,
    BesselClock,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodArg {
    Auto,
    Hermite,
    Double,
    Ibp,
    Both,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(value_enum)]
    pub kind: DensityKind,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// Bessel index
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Bessel starting point
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Grid in v (amu, joint, ratio); log-spaced default
    #[arg(long, value_delimiter = ',')]
    pub v: Vec<f64>,
    /// Grid in x (joint) or u (ratio, bessel-clock)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Identities,
    Laplace,
    Flatness,
    All,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Overrides every check's pass tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Random draws per identity
    #[arg(long, default_value_t = 20)]
    pub draws: usize,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum McTask {
    Expfun,
    Bessel,
    Bougerol,
    Ks,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariantArg {
    Plain,
    Drifted,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct McArgs {
    #[arg(value_enum)]
    pub task: McTask,
    /// Required: there is no clock-derived default
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "plain")]
    pub variant: VariantArg,
    /// Horizon of the sinh side in the Bougerol check, for power checks
    #[arg(long)]
    pub sinh_t: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run
    pub manifest: PathBuf,
}
