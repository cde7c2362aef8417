//! Discretized generation-interval weights built from an Erlang density.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::reg_lower_gamma;

/// Largest tail mass beyond `s_max` that [`GenerationInterval::discretize`]
/// accepts before rejecting the horizon as too short.
pub const MAX_TRUNCATED_MASS: f64 = 0.05;

/// Default truncation horizon in days.
pub const DEFAULT_S_MAX: usize = 30;

/// Erlang (integer-shape gamma) density parameterized by shape and scale in days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErlangSpec {
    shape: u32,
    scale: f64,
}

impl ErlangSpec {
    pub fn new(shape: u32, scale: f64) -> Result<Self> {
        if shape == 0 {
            return Err(Error::Config("Erlang shape must be at least 1".into()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!(
                "Erlang scale {scale} must be positive"
            )));
        }
        Ok(ErlangSpec { shape, scale })
    }

    /// Erlang(3, 8/3): mean 8 days, mode 16/3 days.
    pub fn covid19() -> Self {
        ErlangSpec {
            shape: 3,
            scale: 8.0 / 3.0,
        }
    }

    /// Erlang(5, 9/5), a slightly right-shifted COVID-19 alternative.
    pub fn covid19_shifted() -> Self {
        ErlangSpec {
            shape: 5,
            scale: 9.0 / 5.0,
        }
    }

    pub fn shape(&self) -> u32 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape as f64 * self.scale
    }

    pub fn mode(&self) -> f64 {
        (self.shape - 1) as f64 * self.scale
    }

    /// F(s), the probability that the generation interval is at most `s` days.
    pub fn cdf(&self, s: f64) -> Result<f64> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain(
                "erlang_cdf",
                format!("s = {s} must be nonnegative"),
            ));
        }
        reg_lower_gamma(self.shape as f64, s / self.scale)
    }
}

/// Probability mass function w_1..w_S over whole days since infection.
///
/// Weight index `s` (1-based) is the number of days since infection; there is
/// no same-day weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationInterval {
    weights: Vec<f64>,
    truncated_mass: f64,
    nominal_mean: f64,
}

impl GenerationInterval {
    /// w_s ∝ F(s) − F(s − 1) for s = 1..s_max, renormalized by F(s_max).
    pub fn discretize(spec: &ErlangSpec, s_max: usize) -> Result<Self> {
        if s_max == 0 {
            return Err(Error::Config("s_max must be at least 1".into()));
        }
        let cdf: Vec<f64> = (0..=s_max)
            .map(|s| spec.cdf(s as f64))
            .collect::<Result<_>>()?;
        let total = cdf[s_max];
        let truncated_mass = 1.0 - total;
        if total.is_nan() || total <= 0.0 || truncated_mass > MAX_TRUNCATED_MASS {
            return Err(Error::Truncation {
                s_max,
                mass: truncated_mass,
                limit: MAX_TRUNCATED_MASS,
            });
        }
        let weights = cdf.windows(2).map(|f| (f[1] - f[0]) / total).collect();
        Ok(GenerationInterval {
            weights,
            truncated_mass,
            nominal_mean: spec.mean(),
        })
    }

    /// Builds an interval from explicit weights, renormalizing them to sum to one.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config(
                "generation interval needs at least one weight".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config(
                "generation interval weights must be finite and >= 0".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Config(
                "generation interval weights sum to zero".into(),
            ));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let nominal_mean = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum();
        Ok(GenerationInterval {
            weights,
            truncated_mass: 0.0,
            nominal_mean,
        })
    }

    /// Weights w_1..w_S; element `i` holds w_{i+1}.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// w_s for `s` in 1..=s_max, zero elsewhere.
    pub fn weight(&self, s: usize) -> f64 {
        if s == 0 {
            0.0
        } else {
            self.weights.get(s - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn s_max(&self) -> usize {
        self.weights.len()
    }

    /// Mass of the continuous density beyond `s_max`, before renormalization.
    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Mean of the continuous density the weights were built from (or of the
    /// weights themselves for [`GenerationInterval::from_weights`]). Used as
    /// the burn-in horizon for observations.
    pub fn nominal_mean(&self) -> f64 {
        self.nominal_mean
    }

    /// Σ s·w_s.
    pub fn mean(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum()
    }

    /// Day with the largest weight (the first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > self.weights[best] {
                best = i;
            }
        }
        best + 1
    }

    /// Two-column CSV `s,w_s`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["s", "w_s"]).map_err(csv_io)?;
        for (i, w) in self.weights.iter().enumerate() {
            wtr.write_record([(i + 1).to_string(), w.to_string()])
                .map_err(csv_io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
