use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::Probability;

/// Strictly increasing probability levels in (0, 1) at which posteriors are summarized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct QuantileLevels(Vec<Probability>);

impl QuantileLevels {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Config(
                "at least one quantile level is required".into(),
            ));
        }
        let probs = levels
            .iter()
            .map(|&p| Probability::open(p))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Config("quantile levels must lie strictly inside (0, 1)".into()))?;
        if probs.windows(2).any(|w| w[0].value() >= w[1].value()) {
            return Err(Error::Config(
                "quantile levels must be strictly increasing".into(),
            ));
        }
        Ok(QuantileLevels(probs))
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|p| p.value())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.0.get(i).map(|p| p.value())
    }

    /// Index of `p`, when it is one of the levels.
    pub fn position(&self, p: f64) -> Option<usize> {
        self.0.iter().position(|q| q.value() == p)
    }

    /// Column label such as `q10`, `q2.5` or `q97.5`.
    pub fn label(p: f64) -> String {
        let pct = p * 100.0;
        let rounded = (pct * 1e9).round() / 1e9;
        format!("q{rounded}")
    }
}

impl Default for QuantileLevels {
    /// 10%, 25%, 50%, 75% and 90%.
    fn default() -> Self {
        QuantileLevels::new(vec![0.10, 0.25, 0.50, 0.75, 0.90]).expect("valid defaults")
    }
}

impl TryFrom<Vec<f64>> for QuantileLevels {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        QuantileLevels::new(v)
    }
}

impl From<QuantileLevels> for Vec<f64> {
    fn from(q: QuantileLevels) -> Vec<f64> {
        q.iter().collect()
    }
}

impl FromStr for QuantileLevels {
    type Err = Error;

    /// Comma-separated list, e.g. `0.1,0.5,0.9`.
    fn from_str(s: &str) -> Result<Self> {
        let levels = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("invalid quantile level `{}`", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        QuantileLevels::new(levels)
    }
}

impl fmt::Display for QuantileLevels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}
