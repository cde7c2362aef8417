use std::fs::File;

use rtfilter::{
    compute_observations, forecast_rt, parse_csv, run_cori, run_filter, CoriConfig, CoriPosterior,
    ErlangSpec, FilterConfig, GenerationInterval, IncidenceSeries, ObservationSeries,
    QuantileLevels, RtForecast, RtPosterior,
};

use crate::args::{Estimator, GiArgs, ModelArgs, SimArgs};
use crate::error::{CliError, CliResult};

/// Everything needed to run the estimators on one input file.
pub struct Setup {
    pub series: IncidenceSeries,
    pub gi: GenerationInterval,
    pub filter: FilterConfig,
    pub cori: CoriConfig,
    pub levels: QuantileLevels,
    pub min_incidence: u64,
}

pub struct Estimates {
    pub series: IncidenceSeries,
    pub obs: ObservationSeries,
    pub dlm: Option<RtPosterior>,
    pub cori: Option<CoriPosterior>,
}

pub fn generation_interval(gi: &GiArgs) -> CliResult<GenerationInterval> {
    let spec = ErlangSpec::new(gi.gi_shape, gi.gi_scale)?;
    Ok(GenerationInterval::discretize(&spec, gi.gi_smax)?)
}

pub fn setup(model: &ModelArgs) -> CliResult<Setup> {
    let mut filter = FilterConfig::from_tau(model.tau)?.with_s0(model.s0);
    if let Some(delta) = model.delta {
        filter = filter.with_delta(delta);
    }
    if let Some(w_star) = model.w_star {
        filter = filter.with_w_star(w_star);
    }
    filter.validate()?;
    let cori = CoriConfig {
        tau: model.tau,
        ..CoriConfig::default()
    };
    let gi = generation_interval(&model.gi)?;

    let file = File::open(&model.input)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", model.input.display())))?;
    let parsed = parse_csv(file)?;
    for warning in &parsed.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(Setup {
        series: parsed.series,
        gi,
        filter,
        cori,
        levels: model.quantiles.clone(),
        min_incidence: model.min_incidence,
    })
}

pub fn estimate(
    setup: &Setup,
    series: &IncidenceSeries,
    estimator: Estimator,
) -> CliResult<Estimates> {
    let obs = compute_observations(series, &setup.gi, setup.min_incidence)?;
    let dlm = estimator
        .dlm()
        .then(|| run_filter(&obs, &setup.filter, &setup.levels))
        .transpose()?;
    let cori = estimator
        .cori()
        .then(|| run_cori(series, &setup.gi, &setup.cori, &setup.levels))
        .transpose()?;
    Ok(Estimates {
        series: series.clone(),
        obs,
        dlm,
        cori,
    })
}

pub fn forecast(
    setup: &Setup,
    posterior: &RtPosterior,
    horizon: usize,
    sim: &SimArgs,
) -> CliResult<RtForecast> {
    if horizon == 0 {
        return Err(CliError::Usage(
            "forecast horizon must be at least 1".into(),
        ));
    }
    if sim.draws == 0 {
        return Err(CliError::Usage("--draws must be at least 1".into()));
    }
    let state = posterior.last().state;
    Ok(forecast_rt(
        &state,
        &setup.filter,
        horizon,
        sim.draws,
        sim.seed,
        &setup.levels,
    )?)
}
