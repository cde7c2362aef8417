//! Daily incidence series, total infectiousness Λₜ and observed log-ratios yₜ.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation_interval::GenerationInterval;

/// Incidence threshold below which a day is not used for estimation.
pub const DEFAULT_MIN_INCIDENCE: u64 = 10;

/// Contiguous daily case counts starting at `start_date`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceSeries {
    start_date: NaiveDate,
    counts: Vec<u64>,
}

impl IncidenceSeries {
    pub fn new(start_date: NaiveDate, counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        Ok(IncidenceSeries { start_date, counts })
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn date(&self, index: usize) -> NaiveDate {
        day_after(self.start_date, index)
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.counts.len()).map(|i| self.date(i))
    }

    /// The same series with every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let counts = self
            .counts
            .iter()
            .map(|c| {
                c.checked_mul(factor)
                    .ok_or_else(|| Error::Config(format!("count {c} * {factor} overflows")))
            })
            .collect::<Result<Vec<_>>>()?;
        IncidenceSeries::new(self.start_date, counts)
    }
}

pub(crate) fn day_after(start: NaiveDate, index: usize) -> NaiveDate {
    start
        .checked_add_days(Days::new(index as u64))
        .expect("date range within chrono limits")
}

/// Result of reading an incidence CSV.
#[derive(Debug, Clone)]
pub struct ParsedIncidence {
    pub series: IncidenceSeries,
    /// Human-readable notes about calendar gaps that were zero-filled.
    pub warnings: Vec<String>,
}

/// Reads `date,cases` CSV text. Rows may come in any order; missing calendar
/// days inside the covered range are filled with zero counts.
pub fn parse_csv<R: Read>(source: R) -> Result<ParsedIncidence> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(Error::Empty),
        Some(r) => r.map_err(|e| csv_parse_error(&e))?,
    };
    let header_ok = header.len() == 2
        && header[0].eq_ignore_ascii_case("date")
        && header[1].eq_ignore_ascii_case("cases");
    if !header_ok {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header `date,cases`".into(),
        });
    }

    let mut by_date: BTreeMap<NaiveDate, u64> = BTreeMap::new();
    for record in records {
        let record = record.map_err(|e| csv_parse_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            line,
            msg: format!("invalid date `{}`: {e}", &record[0]),
        })?;
        let cases: i64 = record[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid case count `{}`", &record[1]),
        })?;
        if cases < 0 {
            return Err(Error::Parse {
                line,
                msg: format!("negative case count {cases}"),
            });
        }
        if by_date.insert(date, cases as u64).is_some() {
            return Err(Error::DuplicateDate { line, date });
        }
    }

    let (&first, _) = by_date.iter().next().ok_or(Error::Empty)?;
    let (&last, _) = by_date.iter().next_back().ok_or(Error::Empty)?;
    let len = (last - first).num_days() as usize + 1;
    let mut counts = vec![0u64; len];
    let mut warnings = Vec::new();
    let mut prev: Option<NaiveDate> = None;
    for (&date, &cases) in &by_date {
        let idx = (date - first).num_days() as usize;
        counts[idx] = cases;
        if let Some(p) = prev {
            let missing = (date - p).num_days() - 1;
            if missing > 0 {
                warnings.push(format!(
                    "missing {missing} day(s) between {p} and {date}; filled with 0 cases"
                ));
            }
        }
        prev = Some(date);
    }

    Ok(ParsedIncidence {
        series: IncidenceSeries::new(first, counts)?,
        warnings,
    })
}

fn csv_parse_error(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line()),
        msg: e.to_string(),
    }
}

/// Λₜ = Σ_{s=1}^{min(t−1, S)} I_{t−s} w_s for every day, using strictly earlier counts.
pub fn compute_lambda(series: &IncidenceSeries, w: &GenerationInterval) -> Vec<f64> {
    lambda_of(series.counts(), w)
}

fn lambda_of(counts: &[u64], w: &GenerationInterval) -> Vec<f64> {
    let weights = w.weights();
    (0..counts.len())
        .map(|t| {
            weights
                .iter()
                .take(t)
                .enumerate()
                .map(|(k, ws)| counts[t - 1 - k] as f64 * ws)
                .sum()
        })
        .collect()
}

/// Λₜ, yₜ and the validity mask derived from an incidence series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSeries {
    pub start_date: NaiveDate,
    pub lambda: Vec<f64>,
    pub y: Vec<Option<f64>>,
    pub valid: Vec<bool>,
}

impl ObservationSeries {
    /// Builds observations directly from log-ratios; `None` marks a day
    /// without a usable observation. Λ is recorded as NaN.
    pub fn from_log_ratios(start_date: NaiveDate, y: Vec<Option<f64>>) -> Result<Self> {
        if let Some(bad) = y.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(*bad));
        }
        let valid = y.iter().map(Option::is_some).collect();
        Ok(ObservationSeries {
            start_date,
            lambda: vec![f64::NAN; y.len()],
            y,
            valid,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn date(&self, index: usize) -> NaiveDate {
        day_after(self.start_date, index)
    }

    pub fn first_valid(&self) -> Option<usize> {
        self.valid.iter().position(|v| *v)
    }

    pub fn valid_days(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Computes yₜ = ln Iₜ − ln Λₜ on every usable day.
///
/// A day is valid when Iₜ ≥ `min_incidence`, Λₜ > 0 and its 1-based index
/// exceeds the generation interval's nominal mean (burn-in).
///
/// yₜ is evaluated on the counts divided by their greatest common divisor.
/// That leaves the value unchanged mathematically but makes the floating
/// point result identical for I and K·I, for any K that keeps counts integral.
pub fn compute_observations(
    series: &IncidenceSeries,
    w: &GenerationInterval,
    min_incidence: u64,
) -> Result<ObservationSeries> {
    if min_incidence == 0 {
        return Err(Error::Config("min_incidence must be at least 1".into()));
    }
    let counts = series.counts();
    let divisor = counts.iter().fold(0, |g, &c| gcd(g, c)).max(1);
    let reduced: Vec<u64> = counts.iter().map(|c| c / divisor).collect();
    let reduced_lambda = lambda_of(&reduced, w);
    let lambda = compute_lambda(series, w);
    let burn_in = w.nominal_mean();

    let mut y = Vec::with_capacity(counts.len());
    let mut valid = Vec::with_capacity(counts.len());
    for t in 0..counts.len() {
        let ok = (t + 1) as f64 > burn_in && counts[t] >= min_incidence && reduced_lambda[t] > 0.0;
        valid.push(ok);
        y.push(ok.then(|| (reduced[t] as f64).ln() - reduced_lambda[t].ln()));
    }
    if !valid.iter().any(|v| *v) {
        return Err(Error::NoValidDays);
    }
    Ok(ObservationSeries {
        start_date: series.start_date(),
        lambda,
        y,
        valid,
    })
}

/// e^{yₜ} on valid days.
pub fn observed_rt(obs: &ObservationSeries) -> Vec<Option<f64>> {
    obs.y.iter().map(|y| y.map(f64::exp)).collect()
}
