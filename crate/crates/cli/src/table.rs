use chrono::NaiveDate;
use rtfilter::{observed_rt, QuantileLevels, RtForecast};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::pipeline::Estimates;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Date(NaiveDate),
    Bool(bool),
    Num(f64),
}

impl Cell {
    fn num(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    /// Shortest text that parses back to the same value.
    fn text(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Date(d) => d.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Num(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Date(d) => Value::String(d.to_string()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn quantile_columns(prefix: &str, levels: &QuantileLevels) -> Vec<String> {
    levels
        .iter()
        .map(|p| format!("{prefix}{}", QuantileLevels::label(p)))
        .collect()
}

/// One row per input day, optionally followed by forecast rows.
pub fn estimate_table(
    est: &Estimates,
    levels: &QuantileLevels,
    forecast: Option<&RtForecast>,
) -> Table {
    let mut columns = vec![
        "date".to_string(),
        "valid".to_string(),
        "observed_rt".to_string(),
    ];
    if est.dlm.is_some() {
        columns.extend(quantile_columns("dlm_", levels));
    }
    if est.cori.is_some() {
        columns.extend(quantile_columns("cori_", levels));
        columns.push("cori_cv".into());
    }
    if forecast.is_some() {
        columns.push("forecast".into());
    }

    let observed = observed_rt(&est.obs);
    let mut rows = Vec::with_capacity(est.obs.len());
    for (t, obs_rt) in observed.into_iter().enumerate() {
        let mut row = vec![
            Cell::Date(est.obs.date(t)),
            Cell::Bool(est.obs.valid[t]),
            Cell::num(obs_rt),
        ];
        if let Some(dlm) = &est.dlm {
            match dlm.at(t) {
                Some(day) => row.extend(day.quantiles.iter().map(|q| Cell::Num(*q))),
                None => row.extend(std::iter::repeat_n(Cell::Empty, levels.len())),
            }
        }
        if let Some(cori) = &est.cori {
            let day = &cori.days[t];
            if day.valid {
                row.extend(day.quantiles.iter().map(|q| Cell::Num(*q)));
                row.push(Cell::Num(day.cv));
            } else {
                row.extend(std::iter::repeat_n(Cell::Empty, levels.len() + 1));
            }
        }
        if forecast.is_some() {
            row.push(Cell::Bool(false));
        }
        rows.push(row);
    }

    if let Some(fc) = forecast {
        let last = est.obs.date(est.obs.len() - 1);
        for (date, qs) in fc.dates(last).into_iter().zip(&fc.quantiles) {
            let mut row = vec![Cell::Date(date), Cell::Bool(false), Cell::Empty];
            row.extend(qs.iter().map(|q| Cell::Num(*q)));
            if est.cori.is_some() {
                row.extend(std::iter::repeat_n(Cell::Empty, levels.len() + 1));
            }
            row.push(Cell::Bool(true));
            rows.push(row);
        }
    }
    Table { columns, rows }
}

/// Columns `date` and one per quantile level.
pub fn forecast_table(fc: &RtForecast, last_date: NaiveDate) -> Table {
    let mut columns = vec!["date".to_string()];
    columns.extend(quantile_columns("", &fc.levels));
    let rows = fc
        .dates(last_date)
        .into_iter()
        .zip(&fc.quantiles)
        .map(|(date, qs)| {
            let mut row = vec![Cell::Date(date)];
            row.extend(qs.iter().map(|q| Cell::Num(*q)));
            row
        })
        .collect();
    Table { columns, rows }
}

impl Table {
    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Data(format!("cannot format CSV: {e}"));
        wtr.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(Cell::text)).map_err(fail)?;
        }
        wtr.into_inner()
            .map_err(|e| CliError::Data(format!("cannot format CSV: {e}")))
    }

    pub fn to_json(&self) -> CliResult<Vec<u8>> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&records)
            .map_err(|e| CliError::Data(format!("cannot format JSON: {e}")))?;
        out.push(b'\n');
        Ok(out)
    }
}
