mod args;
mod error;
mod output;
mod pipeline;
mod plot;
mod scale_check;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, EstimateArgs, Estimator, ForecastArgs, Format, PlotArgs, WgenArgs};
use error::{CliError, CliResult};
use output::{commit, Artifact};
use table::Table;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Wgen(args) => wgen(args),
        Command::Forecast(args) => forecast(args),
        Command::Plot(args) => plot(args),
    }
}

fn render(table: &Table, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn estimate(args: EstimateArgs) -> CliResult<()> {
    let setup = pipeline::setup(&args.model)?;
    if args.forecast.is_some() && !args.estimator.dlm() {
        return Err(CliError::Usage(
            "--forecast requires the dlm estimator".into(),
        ));
    }
    let est = pipeline::estimate(&setup, &setup.series, args.estimator)?;
    let fc = match (args.forecast, &est.dlm) {
        (Some(h), Some(post)) => Some(pipeline::forecast(&setup, post, h, &args.sim)?),
        _ => None,
    };
    let table = table::estimate_table(&est, &setup.levels, fc.as_ref());

    if let Some(k) = args.scale_check {
        if k == 0 {
            return Err(CliError::Usage(
                "--scale-check factor must be at least 1".into(),
            ));
        }
        let scaled_series = setup.series.scaled(k)?;
        let scaled = pipeline::estimate(&setup, &scaled_series, args.estimator)?;
        let scaled_table = table::estimate_table(&scaled, &setup.levels, None);
        let report = scale_check::compare(k, &table, &scaled_table, &est, &scaled, setup.cori.a);
        eprint!("{}", report.render());
    }

    let mut artifacts = vec![Artifact {
        path: args.output,
        bytes: render(&table, args.format)?,
    }];
    if let Some(path) = args.plot {
        artifacts.push(Artifact {
            path: Some(path),
            bytes: plot::fan_chart(&est, &setup.levels, fc.as_ref()).into_bytes(),
        });
    }
    commit(artifacts)
}

fn wgen(args: WgenArgs) -> CliResult<()> {
    let gi = pipeline::generation_interval(&args.gi)?;
    let spec = rtfilter::ErlangSpec::new(args.gi.gi_shape, args.gi.gi_scale)?;
    eprintln!(
        "mean {} (discretized {}), mode {}, truncated mass {}",
        spec.mean(),
        gi.mean(),
        spec.mode(),
        gi.truncated_mass()
    );
    let mut bytes = Vec::new();
    gi.write_csv(&mut bytes)?;
    commit(vec![Artifact {
        path: args.output,
        bytes,
    }])
}

fn forecast(args: ForecastArgs) -> CliResult<()> {
    if args.forecast == 0 {
        return Err(CliError::Usage(
            "forecast horizon must be at least 1".into(),
        ));
    }
    let setup = pipeline::setup(&args.model)?;
    let est = pipeline::estimate(&setup, &setup.series, Estimator::Dlm)?;
    let post = est.dlm.as_ref().expect("dlm estimator requested");
    let fc = pipeline::forecast(&setup, post, args.forecast, &args.sim)?;
    let last = est.obs.date(est.obs.len() - 1);
    let table = table::forecast_table(&fc, last);
    commit(vec![Artifact {
        path: args.output,
        bytes: table.to_csv()?,
    }])
}

fn plot(args: PlotArgs) -> CliResult<()> {
    let setup = pipeline::setup(&args.model)?;
    let est = pipeline::estimate(&setup, &setup.series, args.estimator)?;
    let svg = plot::fan_chart(&est, &setup.levels, None);
    commit(vec![Artifact {
        path: args.plot.or(args.output),
        bytes: svg.into_bytes(),
    }])
}
