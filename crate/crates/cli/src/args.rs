use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fhfilter",
    version,
    about = "Filtered Fourier-Hermite experiment drivers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free streaming of a cosine perturbation; also writes the closed-form energy.
    Advection(RunArgs),
    /// Streaming under a decaying external force.
    Forced(RunArgs),
    /// Landau damping of a small perturbation.
    Landau(LandauArgs),
    /// Spectrum of the filtered single-mode operator.
    Eigen(EigenArgs),
    /// Roots of the Landau dispersion relation.
    Dispersion(DispersionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterName {
    None,
    HouLi,
    Threshold,
    Cutoff,
    Timestep,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(long, value_enum, conflicts_with = "no_filter")]
    pub filter: Option<FilterName>,
    /// Shorthand for `--filter none`.
    #[arg(long)]
    pub no_filter: bool,
    /// Filter strength (default 36).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Filter order (default 36).
    #[arg(long)]
    pub p: Option<f64>,
    /// Reference step of the timestep-scaled filter.
    #[arg(long)]
    pub dt_ref: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Highest Hermite index.
    #[arg(long = "M")]
    pub order: Option<usize>,
    /// Wavenumber; the domain length becomes 2 pi / k.
    #[arg(long, conflicts_with = "period")]
    pub k: Option<f64>,
    /// Domain length D.
    #[arg(long)]
    pub period: Option<f64>,
    /// Step rule dt = cfl_c / sqrt(M).
    #[arg(long)]
    pub cfl_c: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Perturbation or force amplitude.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fourier cutoff m_c.
    #[arg(long)]
    pub mc: Option<usize>,
    /// Final time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Record every N-th step (the last step is always recorded).
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// Fit the peak decay rate on [0, tF]; repeatable.
    #[arg(long = "tF")]
    pub t_f: Vec<f64>,
    /// Also report the recurrence metric max E(t >= t_min) / E(0).
    #[arg(long)]
    pub recurrence_after: Option<f64>,
    /// Also report the spectral abscissa of the filtered m = 1 operator.
    #[arg(long)]
    pub abscissa: bool,
    /// JSON file holding a run configuration or a previous summary.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for energy.csv, exact.csv and summary.json.
    #[arg(long, default_value = "fhfilter-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LandauArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Integrate the linearized single-mode equation instead.
    #[arg(long)]
    pub linearized: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Fourier mode.
    #[arg(long, default_value_t = 1)]
    pub m: i32,
    /// Include the field coupling of the linearized Landau equation.
    #[arg(long)]
    pub with_g: bool,
    /// Write eigenvalues.txt and eigen.json here instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[arg(long, conflicts_with = "sweep")]
    pub k: Option<f64>,
    /// k grid `start:stop:step`, inclusive.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Also write dispersion.csv here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
