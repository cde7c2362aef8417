//! Python module `rtfilter`.

use std::collections::HashMap;
use std::fs::File;

use chrono::NaiveDate;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use rtfilter::{self as core, IncidenceSeries, QuantileLevels};

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_date(s: &str) -> PyResult<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| PyValueError::new_err(format!("invalid date `{s}`: {e}")))
}

fn levels(quantiles: Option<Vec<f64>>) -> PyResult<QuantileLevels> {
    match quantiles {
        Some(q) => QuantileLevels::new(q).map_err(to_py),
        None => Ok(QuantileLevels::default()),
    }
}

/// Hyperparameters of the discount filter.
#[pyclass(name = "FilterConfig", module = "rtfilter", frozen, from_py_object)]
#[derive(Clone)]
struct PyFilterConfig {
    inner: core::FilterConfig,
}

#[pymethods]
impl PyFilterConfig {
    #[new]
    #[pyo3(signature = (tau = 7, delta = None, w_star = None, s0 = 1.0))]
    fn new(tau: u32, delta: Option<f64>, w_star: Option<f64>, s0: f64) -> PyResult<Self> {
        let mut inner = core::FilterConfig::from_tau(tau)
            .map_err(to_py)?
            .with_s0(s0);
        if let Some(d) = delta {
            inner = inner.with_delta(d);
        }
        if let Some(w) = w_star {
            inner = inner.with_w_star(w);
        }
        inner.validate().map_err(to_py)?;
        Ok(PyFilterConfig { inner })
    }

    #[getter]
    fn tau(&self) -> u32 {
        self.inner.tau
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn w_star(&self) -> f64 {
        self.inner.w_star
    }

    #[getter]
    fn s0(&self) -> f64 {
        self.inner.s0
    }

    fn limiting_dof(&self) -> f64 {
        self.inner.limiting_dof()
    }

    fn prior(&self) -> PyFilterState {
        PyFilterState {
            inner: self.inner.prior(),
        }
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "FilterConfig(tau={}, delta={}, w_star={}, s0={})",
            c.tau, c.delta, c.w_star, c.s0
        )
    }
}

/// Posterior summary (m, c, n, s) of log Rt.
#[pyclass(name = "FilterState", module = "rtfilter", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFilterState {
    inner: core::FilterState,
}

#[pymethods]
impl PyFilterState {
    #[new]
    fn new(m: f64, c: f64, n: f64, s: f64) -> PyResult<Self> {
        Ok(PyFilterState {
            inner: core::FilterState::new(m, c, n, s).map_err(to_py)?,
        })
    }

    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn n(&self) -> f64 {
        self.inner.n
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    /// One filtering step; `y=None` advances without an observation.
    #[pyo3(signature = (y, config))]
    fn step(&self, y: Option<f64>, config: &PyFilterConfig) -> PyResult<PyFilterState> {
        Ok(PyFilterState {
            inner: core::step(&self.inner, y, &config.inner).map_err(to_py)?,
        })
    }

    fn rt_quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.rt_quantile(p).map_err(to_py)
    }

    /// Monte Carlo quantiles of R for each of the next `horizon` days.
    #[pyo3(signature = (config, horizon = 7, draws = 10_000, seed = 42, quantiles = None))]
    fn forecast(
        &self,
        config: &PyFilterConfig,
        horizon: usize,
        draws: usize,
        seed: u64,
        quantiles: Option<Vec<f64>>,
    ) -> PyResult<Vec<Vec<f64>>> {
        let fc = core::forecast_rt(
            &self.inner,
            &config.inner,
            horizon,
            draws,
            seed,
            &levels(quantiles)?,
        )
        .map_err(to_py)?;
        Ok(fc.quantiles)
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!("FilterState(m={}, c={}, n={}, s={})", s.m, s.c, s.n, s.s)
    }
}

/// Discretized Erlang generation-interval weights w_1..w_smax.
#[pyfunction]
#[pyo3(signature = (shape = 3, scale = 8.0 / 3.0, s_max = 30))]
fn generation_interval(shape: u32, scale: f64, s_max: usize) -> PyResult<Vec<f64>> {
    let spec = core::ErlangSpec::new(shape, scale).map_err(to_py)?;
    let gi = core::GenerationInterval::discretize(&spec, s_max).map_err(to_py)?;
    Ok(gi.weights().to_vec())
}

/// Reads a `date,cases` CSV; returns the first date and the daily counts.
#[pyfunction]
fn read_incidence(path: &str) -> PyResult<(String, Vec<u64>)> {
    let file = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
    let parsed = core::parse_csv(file).map_err(to_py)?;
    Ok((
        parsed.series.start_date().to_string(),
        parsed.series.counts().to_vec(),
    ))
}

/// Runs the estimators and returns a dict of equal-length columns.
///
/// Missing values are `None`. `estimator` is one of "dlm", "cori" or "both".
#[pyfunction]
#[pyo3(signature = (
    counts,
    start_date = "2020-01-01",
    config = None,
    estimator = "dlm",
    quantiles = None,
    gi_shape = 3,
    gi_scale = 8.0 / 3.0,
    gi_smax = 30,
    min_incidence = 10,
))]
#[allow(clippy::too_many_arguments)]
fn estimate(
    counts: Vec<u64>,
    start_date: &str,
    config: Option<PyFilterConfig>,
    estimator: &str,
    quantiles: Option<Vec<f64>>,
    gi_shape: u32,
    gi_scale: f64,
    gi_smax: usize,
    min_incidence: u64,
) -> PyResult<HashMap<String, Vec<Option<Cell>>>> {
    let (want_dlm, want_cori) = match estimator {
        "dlm" => (true, false),
        "cori" => (false, true),
        "both" => (true, true),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown estimator `{other}`"
            )))
        }
    };
    let config = config.map_or_else(core::FilterConfig::default, |c| c.inner);
    let levels = levels(quantiles)?;
    let series = IncidenceSeries::new(parse_date(start_date)?, counts).map_err(to_py)?;
    let spec = core::ErlangSpec::new(gi_shape, gi_scale).map_err(to_py)?;
    let gi = core::GenerationInterval::discretize(&spec, gi_smax).map_err(to_py)?;
    let obs = core::compute_observations(&series, &gi, min_incidence).map_err(to_py)?;

    let mut columns: HashMap<String, Vec<Option<Cell>>> = HashMap::new();
    columns.insert(
        "date".into(),
        (0..obs.len())
            .map(|t| Some(Cell::Text(obs.date(t).to_string())))
            .collect(),
    );
    columns.insert(
        "valid".into(),
        obs.valid.iter().map(|v| Some(Cell::Flag(*v))).collect(),
    );
    columns.insert(
        "observed_rt".into(),
        core::observed_rt(&obs)
            .into_iter()
            .map(|v| v.map(Cell::Number))
            .collect(),
    );
    if want_dlm {
        let post = core::run_filter(&obs, &config, &levels).map_err(to_py)?;
        for (k, p) in levels.iter().enumerate() {
            let col = (0..obs.len())
                .map(|t| post.at(t).map(|d| Cell::Number(d.quantiles[k])))
                .collect();
            columns.insert(format!("dlm_{}", QuantileLevels::label(p)), col);
        }
    }
    if want_cori {
        let cori_cfg = core::CoriConfig {
            tau: config.tau,
            ..core::CoriConfig::default()
        };
        let post = core::run_cori(&series, &gi, &cori_cfg, &levels).map_err(to_py)?;
        for (k, p) in levels.iter().enumerate() {
            let col = post
                .days
                .iter()
                .map(|d| d.valid.then(|| Cell::Number(d.quantiles[k])))
                .collect();
            columns.insert(format!("cori_{}", QuantileLevels::label(p)), col);
        }
        columns.insert(
            "cori_cv".into(),
            post.days
                .iter()
                .map(|d| d.valid.then_some(Cell::Number(d.cv)))
                .collect(),
        );
    }
    Ok(columns)
}

/// Cell value of an [`estimate`] column.
#[derive(Debug, Clone, IntoPyObject)]
enum Cell {
    Text(String),
    Flag(bool),
    Number(f64),
}

#[pyfunction]
fn student_t_cdf(x: f64, n: f64) -> PyResult<f64> {
    core::special::student_t_cdf(x, n).map_err(to_py)
}

#[pyfunction]
fn student_t_quantile(p: f64, n: f64) -> PyResult<f64> {
    core::special::student_t_quantile(p, n).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (p, shape, rate = 1.0))]
fn gamma_quantile(p: f64, shape: f64, rate: f64) -> PyResult<f64> {
    core::special::gamma_quantile(p, shape, rate).map_err(to_py)
}

#[pymodule(name = "rtfilter")]
fn rtfilter_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFilterConfig>()?;
    m.add_class::<PyFilterState>()?;
    m.add_function(wrap_pyfunction!(generation_interval, m)?)?;
    m.add_function(wrap_pyfunction!(read_incidence, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(student_t_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(student_t_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_quantile, m)?)?;
    Ok(())
}
