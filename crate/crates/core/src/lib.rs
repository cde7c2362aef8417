//! Estimation of the time-varying effective reproduction number Rₜ from daily
//! incidence counts.
//!
//! The main estimator filters the observed log-ratios yₜ = ln(Iₜ / Λₜ) with a
//! conjugate dynamic linear model on ρₜ = ln Rₜ whose observation variance is
//! learned with a discount factor ([`dlm`]). The windowed Poisson–Gamma
//! estimator ([`cori`]) is provided as a baseline.
//!
//! ```
//! use rtfilter::{
//!     compute_observations, run_filter, ErlangSpec, FilterConfig, GenerationInterval,
//!     IncidenceSeries, QuantileLevels,
//! };
//! # fn main() -> rtfilter::Result<()> {
//! let start = chrono::NaiveDate::from_ymd_opt(2020, 5, 1).unwrap();
//! let series = IncidenceSeries::new(start, vec![120; 60])?;
//! let w = GenerationInterval::discretize(&ErlangSpec::covid19(), 30)?;
//! let obs = compute_observations(&series, &w, 10)?;
//! let post = run_filter(&obs, &FilterConfig::default(), &QuantileLevels::default())?;
//! let median = post.last().quantiles[2];
//! assert!((median - 1.0).abs() < 0.01);
//! # Ok(())
//! # }
//! ```

pub mod cori;
pub mod dlm;
pub mod error;
pub mod generation_interval;
pub mod incidence;
pub mod levels;
pub mod special;

pub use cori::{run_cori, CoriConfig, CoriDay, CoriPosterior};
pub use dlm::{
    forecast_rt, rt_quantile, run_filter, step, FilterConfig, FilterState, RtDay, RtForecast,
    RtPosterior,
};
pub use error::{Error, Result};
pub use generation_interval::{ErlangSpec, GenerationInterval};
pub use incidence::{
    compute_lambda, compute_observations, observed_rt, parse_csv, IncidenceSeries,
    ObservationSeries, ParsedIncidence,
};
pub use levels::QuantileLevels;
pub use special::Probability;
