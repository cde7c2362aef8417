//! Windowed Poisson–Gamma estimator of Rₜ: Iₜ ~ Poisson(Rₜ Λₜ) with Rₜ held
//! constant over the trailing `tau` days and a Gamma(a, b) prior (shape, rate).

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation_interval::GenerationInterval;
use crate::incidence::{compute_lambda, IncidenceSeries};
use crate::levels::QuantileLevels;
use crate::special::gamma_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoriConfig {
    pub tau: u32,
    /// Prior shape.
    pub a: f64,
    /// Prior rate.
    pub b: f64,
}

impl CoriConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau == 0 {
            return Err(Error::Config("Cori window tau must be at least 1".into()));
        }
        if !(self.a > 0.0 && self.a.is_finite() && self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Config(
                "Cori prior shape and rate must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for CoriConfig {
    fn default() -> Self {
        CoriConfig {
            tau: 7,
            a: 5.0,
            b: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoriDay {
    pub date: NaiveDate,
    pub valid: bool,
    /// Posterior shape a + Σ I over the window.
    pub shape: f64,
    /// Posterior rate b + Σ Λ over the window.
    pub rate: f64,
    /// Posterior coefficient of variation 1/√shape.
    pub cv: f64,
    /// Empty on invalid days.
    pub quantiles: Vec<f64>,
}

impl CoriDay {
    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoriPosterior {
    pub levels: QuantileLevels,
    /// One record per calendar day of the input series.
    pub days: Vec<CoriDay>,
}

impl CoriPosterior {
    pub fn valid_days(&self) -> impl Iterator<Item = &CoriDay> {
        self.days.iter().filter(|d| d.valid)
    }
}

/// Gamma posterior for every day whose trailing window of `tau` days lies
/// inside the series and has Λ > 0 throughout.
pub fn run_cori(
    series: &IncidenceSeries,
    w: &GenerationInterval,
    config: &CoriConfig,
    levels: &QuantileLevels,
) -> Result<CoriPosterior> {
    config.validate()?;
    let tau = config.tau as usize;
    if series.len() < tau {
        return Err(Error::Config(format!(
            "series of {} days is shorter than the window of {tau} days",
            series.len()
        )));
    }
    let lambda = compute_lambda(series, w);
    let counts = series.counts();

    let mut days = Vec::with_capacity(series.len());
    for t in 0..series.len() {
        let date = series.date(t);
        let window = (t + 1)
            .checked_sub(tau)
            .map(|lo| lo..=t)
            .filter(|win| lambda[win.clone()].iter().all(|l| *l > 0.0));
        let Some(win) = window else {
            days.push(CoriDay {
                date,
                valid: false,
                shape: f64::NAN,
                rate: f64::NAN,
                cv: f64::NAN,
                quantiles: Vec::new(),
            });
            continue;
        };
        let sum_i: f64 = counts[win.clone()].iter().map(|&c| c as f64).sum();
        let sum_lambda: f64 = lambda[win].iter().sum();
        let shape = config.a + sum_i;
        let rate = config.b + sum_lambda;
        let quantiles = levels
            .iter()
            .map(|p| gamma_quantile(p, shape, rate))
            .collect::<Result<Vec<_>>>()?;
        days.push(CoriDay {
            date,
            valid: true,
            shape,
            rate,
            cv: 1.0 / shape.sqrt(),
            quantiles,
        });
    }
    if !days.iter().any(|d| d.valid) {
        return Err(Error::NoValidDays);
    }
    Ok(CoriPosterior {
        levels: levels.clone(),
        days,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat(n: usize, value: u64) -> IncidenceSeries {
        IncidenceSeries::new(NaiveDate::from_ymd_opt(2020, 3, 1).unwrap(), vec![value; n]).unwrap()
    }

    #[test]
    fn flat_series_posterior() {
        // With a single weight w₁ = 1, Λₜ = Iₜ₋₁ = 100 from day 2 onward.
        let w = GenerationInterval::from_weights(vec![1.0]).unwrap();
        let post = run_cori(
            &flat(30, 100),
            &w,
            &CoriConfig::default(),
            &QuantileLevels::default(),
        )
        .unwrap();
        // Day index 6 still includes day 1 (Λ = 0) in its window.
        assert!(!post.days[6].valid);
        let d = &post.days[7];
        assert!(d.valid);
        assert_abs_diff_eq!(d.shape, 705.0);
        assert_abs_diff_eq!(d.rate, 701.0);
        assert_abs_diff_eq!(d.mean(), 1.005_71, epsilon = 1e-5);
        assert_abs_diff_eq!(d.cv, 0.037_66, epsilon = 1e-5);
        assert_abs_diff_eq!(d.quantiles[2], 1.00524, epsilon = 1e-4);
    }

    #[test]
    fn scaling_shrinks_cv() {
        let w = GenerationInterval::from_weights(vec![1.0]).unwrap();
        let cfg = CoriConfig::default();
        let lv = QuantileLevels::default();
        let post = run_cori(&flat(30, 100).scaled(10).unwrap(), &w, &cfg, &lv).unwrap();
        assert_abs_diff_eq!(post.days[10].cv, 1.0 / 7005f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(post.days[10].cv, 0.011_949, epsilon = 1e-6);
    }

    #[test]
    fn short_series_and_no_valid_day() {
        let w = GenerationInterval::from_weights(vec![1.0]).unwrap();
        let lv = QuantileLevels::default();
        assert!(run_cori(&flat(5, 100), &w, &CoriConfig::default(), &lv).is_err());
        assert!(matches!(
            run_cori(&flat(20, 0), &w, &CoriConfig::default(), &lv),
            Err(Error::NoValidDays)
        ));
        let bad = CoriConfig {
            a: 0.0,
            ..CoriConfig::default()
        };
        assert!(run_cori(&flat(20, 3), &w, &bad, &lv).is_err());
    }

    #[test]
    fn vanishing_prior_gives_ratio_of_sums() {
        let w = GenerationInterval::from_weights(vec![0.3, 0.7]).unwrap();
        let s = IncidenceSeries::new(
            NaiveDate::from_ymd_opt(2020, 3, 1).unwrap(),
            vec![12, 19, 25, 31, 30, 44, 52, 61, 58, 73, 80, 95],
        )
        .unwrap();
        let cfg = CoriConfig {
            tau: 4,
            a: 1e-300,
            b: 1e-300,
        };
        let post = run_cori(&s, &w, &cfg, &QuantileLevels::default()).unwrap();
        let lambda = compute_lambda(&s, &w);
        for (t, d) in post.days.iter().enumerate().filter(|(_, d)| d.valid) {
            let si: f64 = s.counts()[t - 3..=t].iter().map(|&c| c as f64).sum();
            let sl: f64 = lambda[t - 3..=t].iter().sum();
            assert_abs_diff_eq!(d.mean(), si / sl, epsilon = 1e-12);
        }
    }
}
