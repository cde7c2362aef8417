use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rtfilter::QuantileLevels;

#[derive(Debug, Parser)]
#[command(
    name = "rtfilter",
    version,
    about = "Estimate the effective reproduction number from daily incidence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter an incidence series and write per-day posterior quantiles.
    Estimate(EstimateArgs),
    /// Write discretized generation-interval weights.
    Wgen(WgenArgs),
    /// Simulate the posterior predictive of Rt beyond the last day.
    Forecast(ForecastArgs),
    /// Render a fan chart of the estimates as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Dlm,
    Cori,
    Both,
}

impl Estimator {
    pub fn dlm(self) -> bool {
        matches!(self, Estimator::Dlm | Estimator::Both)
    }

    pub fn cori(self) -> bool {
        matches!(self, Estimator::Cori | Estimator::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GiArgs {
    /// Erlang shape of the generation interval.
    #[arg(long, default_value_t = 3)]
    pub gi_shape: u32,
    /// Erlang scale of the generation interval, in days.
    #[arg(long, default_value_t = 8.0 / 3.0)]
    pub gi_scale: f64,
    /// Truncation horizon of the generation interval, in days.
    #[arg(long, default_value_t = rtfilter::generation_interval::DEFAULT_S_MAX)]
    pub gi_smax: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Incidence CSV with columns `date,cases`.
    pub input: PathBuf,
    /// Smoothing horizon in days (also the Cori window length).
    #[arg(long, default_value_t = rtfilter::dlm::DEFAULT_TAU)]
    pub tau: u32,
    /// Variance discount factor; defaults to 1 - 1/(2 tau).
    #[arg(long)]
    pub delta: Option<f64>,
    /// State innovation variance multiplier; defaults to 2/tau.
    #[arg(long)]
    pub w_star: Option<f64>,
    /// Prior point estimate of the observation variance.
    #[arg(long, default_value_t = 1.0)]
    pub s0: f64,
    #[command(flatten)]
    pub gi: GiArgs,
    /// Days with fewer cases than this are not assimilated.
    #[arg(long, default_value_t = rtfilter::incidence::DEFAULT_MIN_INCIDENCE)]
    pub min_incidence: u64,
    /// Comma-separated quantile levels in (0, 1).
    #[arg(
        long,
        env = "RT_FILTER_QUANTILES",
        default_value = "0.1,0.25,0.5,0.75,0.9"
    )]
    pub quantiles: QuantileLevels,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Number of Monte Carlo paths.
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    /// Random seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Estimator::Dlm)]
    pub estimator: Estimator,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Append this many forecast days to the table.
    #[arg(long)]
    pub forecast: Option<usize>,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Rerun with every count multiplied by K and report the differences.
    #[arg(long, value_name = "K")]
    pub scale_check: Option<u64>,
    /// Also write an SVG fan chart to this path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WgenArgs {
    #[command(flatten)]
    pub gi: GiArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ForecastArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Forecast horizon in days.
    #[arg(long, default_value_t = 7)]
    pub forecast: usize,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Estimator::Dlm)]
    pub estimator: Estimator,
    /// SVG destination; falls back to `--output`, then standard output.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
