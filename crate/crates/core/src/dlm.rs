//! Conjugate filtering of ρₜ = ln Rₜ with a random-walk state and a
//! discounted observation precision.
//!
//! Model, with unknown precision φₜ:
//!
//! ```text
//! yₜ = ρₜ + νₜ,       νₜ ~ N(0, 1/φₜ)
//! ρₜ = ρₜ₋₁ + ωₜ,     ωₜ ~ N(0, w*/φₜ)
//! φₜ = γₜ φₜ₋₁ / δ,   γₜ ~ Beta(δ nₜ₋₁ / 2, (1 − δ) nₜ₋₁ / 2)
//! ```
//!
//! The marginal posterior is ρₜ | Dₜ ~ T_{nₜ}(mₜ, cₜ): a Student-t with
//! location mₜ, scale² cₜ and nₜ degrees of freedom. The precision posterior
//! is φₜ | Dₜ ~ Gamma(nₜ/2, rate nₜ sₜ / 2), so sₜ is the point estimate
//! of the observational variance and cₜ / sₜ the scale-free state variance.

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{day_after, ObservationSeries};
use crate::levels::QuantileLevels;
use crate::special::student_t_quantile;

/// Default smoothing horizon in days.
pub const DEFAULT_TAU: u32 = 7;

/// Hyperparameters of the filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Smoothing horizon in days.
    pub tau: u32,
    /// Variance discount factor in (0, 1).
    pub delta: f64,
    /// Multiplier of the observation variance giving the state innovation variance.
    pub w_star: f64,
    /// Prior location of ρ₀.
    pub m0: f64,
    /// Prior scale multiplier of ρ₀, relative to the observation variance.
    pub c0_star: f64,
    /// Prior degrees of freedom.
    pub n0: f64,
    /// Prior point estimate of the observation variance.
    pub s0: f64,
}

impl FilterConfig {
    /// Defaults tied to `tau`: δ = 1 − 1/(2τ) so the effective sample size
    /// tends to 2τ days, and w* = 2/τ.
    pub fn from_tau(tau: u32) -> Result<Self> {
        if tau == 0 {
            return Err(Error::Config("tau must be at least 1".into()));
        }
        let t = tau as f64;
        Ok(FilterConfig {
            tau,
            delta: 1.0 - 1.0 / (2.0 * t),
            w_star: 2.0 / t,
            m0: 0.0,
            c0_star: 1.0,
            n0: 2.0,
            s0: 1.0,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_w_star(mut self, w_star: f64) -> Self {
        self.w_star = w_star;
        self
    }

    pub fn with_s0(mut self, s0: f64) -> Self {
        self.s0 = s0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} must be positive")))
            }
        };
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!(
                "delta = {} must lie in (0, 1)",
                self.delta
            )));
        }
        if self.tau == 0 {
            return Err(Error::Config("tau must be at least 1".into()));
        }
        if !self.m0.is_finite() {
            return Err(Error::Config("m0 must be finite".into()));
        }
        positive("w_star", self.w_star)?;
        positive("c0_star", self.c0_star)?;
        positive("n0", self.n0)?;
        positive("s0", self.s0)
    }

    /// Limit of the degrees of freedom under repeated updates, 1/(1 − δ).
    pub fn limiting_dof(&self) -> f64 {
        1.0 / (1.0 - self.delta)
    }

    /// State before the first assimilated observation.
    pub fn prior(&self) -> FilterState {
        FilterState {
            m: self.m0,
            c: self.s0 * self.c0_star,
            n: self.n0,
            s: self.s0,
        }
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig::from_tau(DEFAULT_TAU).expect("default tau is valid")
    }
}

/// Posterior summary (mₜ, cₜ, nₜ, sₜ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    pub m: f64,
    pub c: f64,
    pub n: f64,
    pub s: f64,
}

impl FilterState {
    pub fn new(m: f64, c: f64, n: f64, s: f64) -> Result<Self> {
        let state = FilterState { m, c, n, s };
        state.check()?;
        Ok(state)
    }

    fn check(&self) -> Result<()> {
        let ok = self.m.is_finite()
            && self.c > 0.0
            && self.c.is_finite()
            && self.n > 0.0
            && self.n.is_finite()
            && self.s > 0.0
            && self.s.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::domain(
                "FilterState",
                format!("invalid state {self:?}"),
            ))
        }
    }

    /// Quantile of Rₜ = exp(ρₜ) at level `p`.
    pub fn rt_quantile(&self, p: f64) -> Result<f64> {
        rt_quantile(self, p)
    }
}

/// One filtering step. `None` advances the state without assimilating an
/// observation.
pub fn step(state: &FilterState, y: Option<f64>, config: &FilterConfig) -> Result<FilterState> {
    let FilterState { m, c, n, s } = *state;
    let delta = config.delta;
    let w_star = config.w_star;
    // Scale-free prior variance of ρₜ given precision.
    let r_star = c / s + w_star;

    let next = match y {
        Some(y) => {
            if !y.is_finite() {
                return Err(Error::NonFinite(y));
            }
            let n_next = delta * n + 1.0;
            let a = m;
            let q_star = r_star + 1.0;
            let q = s * q_star;
            let e = y - a;
            let e2_over_q = if e.abs() > 1e150 {
                (e / q.sqrt()).powi(2)
            } else {
                e * e / q
            };
            let s_next = delta * (n / n_next) * s + (s / n_next) * e2_over_q;
            let gain = r_star / q_star;
            let m_next = a + gain * e;
            // (s'/s)(r − A² q) with r = s r*, q = s q*, simplified to s' r*/q*
            // to stay positive without cancellation.
            let c_next = s_next * gain;
            FilterState {
                m: m_next,
                c: c_next,
                n: n_next,
                s: s_next,
            }
        }
        None => FilterState {
            m,
            c: s * r_star,
            n: delta * n,
            s,
        },
    };
    next.check()?;
    Ok(next)
}

/// exp(m + √c · t_n⁻¹(p)).
pub fn rt_quantile(state: &FilterState, p: f64) -> Result<f64> {
    let t = student_t_quantile(p, state.n)?;
    Ok((state.m + state.c.sqrt() * t).exp())
}

/// Posterior on one calendar day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtDay {
    pub date: NaiveDate,
    pub state: FilterState,
    /// Rₜ quantiles, aligned with [`RtPosterior::levels`].
    pub quantiles: Vec<f64>,
    /// Whether an observation was assimilated on this day.
    pub updated: bool,
}

/// Filtered posteriors from the first valid observation onward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtPosterior {
    pub levels: QuantileLevels,
    /// Index into the observation series of the first recorded day.
    pub offset: usize,
    pub days: Vec<RtDay>,
}

impl RtPosterior {
    /// Record for observation index `index`, if the filter had started by then.
    pub fn at(&self, index: usize) -> Option<&RtDay> {
        index
            .checked_sub(self.offset)
            .and_then(|i| self.days.get(i))
    }

    pub fn last(&self) -> &RtDay {
        self.days.last().expect("posterior has at least one day")
    }

    /// Quantiles at a single level for every recorded day.
    pub fn quantile_series(&self, p: f64) -> Option<Vec<f64>> {
        let k = self.levels.position(p)?;
        Some(self.days.iter().map(|d| d.quantiles[k]).collect())
    }
}

fn quantiles_of(state: &FilterState, levels: &QuantileLevels) -> Result<Vec<f64>> {
    levels.iter().map(|p| rt_quantile(state, p)).collect()
}

/// Runs the filter over `obs`, starting from the prior at the first valid day.
pub fn run_filter(
    obs: &ObservationSeries,
    config: &FilterConfig,
    levels: &QuantileLevels,
) -> Result<RtPosterior> {
    config.validate()?;
    let offset = obs.first_valid().ok_or(Error::NoValidDays)?;
    let mut state = config.prior();
    let mut days = Vec::with_capacity(obs.len() - offset);
    for (i, y) in obs.y.iter().enumerate().skip(offset) {
        let y = if obs.valid[i] { *y } else { None };
        state = step(&state, y, config)?;
        days.push(RtDay {
            date: obs.date(i),
            state,
            quantiles: quantiles_of(&state, levels)?,
            updated: y.is_some(),
        });
    }
    Ok(RtPosterior {
        levels: levels.clone(),
        offset,
        days,
    })
}

/// Monte Carlo summary of Rₜ₊ₖ for k = 1..horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtForecast {
    pub levels: QuantileLevels,
    /// `quantiles[k - 1]` holds the empirical quantiles of Rₜ₊ₖ.
    pub quantiles: Vec<Vec<f64>>,
    pub draws: usize,
    pub seed: u64,
}

impl RtForecast {
    pub fn horizon(&self) -> usize {
        self.quantiles.len()
    }

    /// Dates of the forecast days, following `last_date`.
    pub fn dates(&self, last_date: NaiveDate) -> Vec<NaiveDate> {
        (1..=self.horizon())
            .map(|k| day_after(last_date, k))
            .collect()
    }
}

/// Simulates the posterior predictive paths of ρ from `state` forward.
///
/// Each path draws φ ~ Gamma(n/2, rate n s/2) and ρ | φ ~ N(m, (c/s)/φ),
/// which is marginally T_n(m, c), then for each day applies the precision
/// shock φ ← φ γ/δ with γ ~ Beta(δn/2, (1 − δ)n/2), discounts n ← δn and adds
/// ω ~ N(0, w*/φ). Deterministic for a given seed.
pub fn forecast_rt(
    state: &FilterState,
    config: &FilterConfig,
    horizon: usize,
    draws: usize,
    seed: u64,
    levels: &QuantileLevels,
) -> Result<RtForecast> {
    config.validate()?;
    state.check()?;
    if horizon == 0 {
        return Err(Error::Config("forecast horizon must be at least 1".into()));
    }
    if draws == 0 {
        return Err(Error::Config("forecast needs at least one draw".into()));
    }
    let delta = config.delta;
    let dist_err = |e: &dyn std::fmt::Display| Error::domain("forecast_rt", e.to_string());

    let precision =
        Gamma::new(state.n / 2.0, 2.0 / (state.n * state.s)).map_err(|e| dist_err(&e))?;
    let std_normal = Normal::new(0.0, 1.0).map_err(|e| dist_err(&e))?;
    let shocks = {
        let mut n = state.n;
        (0..horizon)
            .map(|_| {
                let b = Beta::new(delta * n / 2.0, (1.0 - delta) * n / 2.0);
                n *= delta;
                b.map_err(|e| dist_err(&e))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let state_scale = state.c / state.s;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut paths = vec![vec![0.0; draws]; horizon];
    for d in 0..draws {
        let mut phi: f64 = rng.sample(precision);
        let mut rho = state.m + (state_scale / phi).sqrt() * rng.sample::<f64, _>(std_normal);
        for (shock, path) in shocks.iter().zip(paths.iter_mut()) {
            let gamma: f64 = rng.sample(shock);
            phi *= gamma / delta;
            rho += (config.w_star / phi).sqrt() * rng.sample::<f64, _>(std_normal);
            path[d] = rho;
        }
    }

    let quantiles = paths
        .into_iter()
        .map(|mut rhos| {
            rhos.sort_unstable_by(f64::total_cmp);
            levels
                .iter()
                .map(|p| empirical_quantile(&rhos, p).exp())
                .collect()
        })
        .collect();
    Ok(RtForecast {
        levels: levels.clone(),
        quantiles,
        draws,
        seed,
    })
}

/// Linear interpolation between order statistics of sorted data.
fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
