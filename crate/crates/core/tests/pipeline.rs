//! End-to-end behaviour of the estimators and the forecast.

use chrono::NaiveDate;
use rtfilter::special::gamma_quantile;
use rtfilter::{
    forecast_rt, run_cori, run_filter, CoriConfig, FilterConfig, FilterState, GenerationInterval,
    IncidenceSeries, ObservationSeries, QuantileLevels,
};
use rtfilter_oracles::quad::{adaptive_simpson, bisect};
use statrs::distribution::{Continuous, StudentsT};

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 1, 1).unwrap()
}

/// R quantile by integrating r⁻¹ f_ρ(ln r) over r and inverting numerically.
fn oracle_rt_quantile(state: &FilterState, p: f64) -> f64 {
    let scale = state.c.sqrt();
    let t = StudentsT::new(state.m, scale, state.n).unwrap();
    let density = |r: f64| if r > 0.0 { t.pdf(r.ln()) / r } else { 0.0 };
    let median = state.m.exp();
    let cdf = |r: f64| {
        if r >= median {
            0.5 + adaptive_simpson(&density, median, r, 1e-12)
        } else {
            0.5 - adaptive_simpson(&density, r, median, 1e-12)
        }
    };
    // Bracket in log r; the levels tested lie well inside ±10 scale units.
    let log_r = bisect(
        |x| cdf(x.exp()) - p,
        state.m - 10.0 * scale,
        state.m + 10.0 * scale,
    );
    log_r.exp()
}

#[test]
fn rt_quantile_matches_density_inversion() {
    let states = [
        FilterState::new(0.0, 1.0, 5.0, 1.0).unwrap(),
        FilterState::new(0.3, 0.04, 13.0, 0.2).unwrap(),
        FilterState::new(-0.5, 0.25, 2.0, 1.0).unwrap(),
        FilterState::new(0.1, 0.01, 14.0, 0.05).unwrap(),
    ];
    for state in &states {
        for &p in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let ours = state.rt_quantile(p).unwrap();
            let reference = oracle_rt_quantile(state, p);
            assert!(
                (ours - reference).abs() < 1e-7 * reference,
                "{state:?} p={p}: {ours} vs {reference}"
            );
        }
    }
    let wide = FilterState::new(0.0, 1.0, 2.0, 1.0).unwrap();
    assert!((wide.rt_quantile(0.975).unwrap() - 73.87).abs() < 0.1);
    let tight = FilterState::new(2f64.ln(), 1e-20, 3.0, 1.0).unwrap();
    assert!((tight.rt_quantile(0.9).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn constant_ratio_gives_unit_median() {
    let obs = ObservationSeries::from_log_ratios(start(), vec![Some(0.0); 100]).unwrap();
    let post = run_filter(&obs, &FilterConfig::default(), &QuantileLevels::default()).unwrap();
    for day in &post.days {
        assert!((day.quantiles[2] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn dof_reaches_limit() {
    let ys: Vec<Option<f64>> = (0..300)
        .map(|t| Some(0.05 * (t as f64 * 0.3).sin()))
        .collect();
    let obs = ObservationSeries::from_log_ratios(start(), ys).unwrap();
    let post = run_filter(&obs, &FilterConfig::default(), &QuantileLevels::default()).unwrap();
    assert!((post.last().state.n - 14.0).abs() < 1e-6);
}

#[test]
fn missing_days_widen_the_posterior() {
    let mut ys = vec![Some(0.1); 40];
    for y in &mut ys[20..30] {
        *y = None;
    }
    let obs = ObservationSeries::from_log_ratios(start(), ys).unwrap();
    let post = run_filter(&obs, &FilterConfig::default(), &QuantileLevels::default()).unwrap();
    for t in 20..30 {
        let (prev, cur) = (&post.days[t - 1], &post.days[t]);
        assert!(!cur.updated);
        assert_eq!(cur.state.m, prev.state.m);
        assert!(cur.state.c > prev.state.c);
        assert!(cur.quantiles[4] - cur.quantiles[0] > prev.quantiles[4] - prev.quantiles[0]);
    }
}

#[test]
fn forecast_median_is_centred() {
    let state = FilterState::new(0.0, 1.0, 14.0, 1.0).unwrap();
    let cfg = FilterConfig::default();
    let fc = forecast_rt(&state, &cfg, 1, 1_000_000, 7, &QuantileLevels::default()).unwrap();
    assert!(
        (fc.quantiles[0][2] - 1.0).abs() < 0.01,
        "median {}",
        fc.quantiles[0][2]
    );
}

#[test]
fn forecast_spread_grows() {
    let state = FilterState::new(0.1, 0.03, 14.0, 0.2).unwrap();
    let cfg = FilterConfig::default();
    let levels = QuantileLevels::default();
    let fc = forecast_rt(&state, &cfg, 7, 1_000_000, 11, &levels).unwrap();
    let widths: Vec<f64> = fc.quantiles.iter().map(|q| q[4] - q[0]).collect();
    assert!(widths.windows(2).all(|w| w[0] <= w[1]), "{widths:?}");
    let again = forecast_rt(&state, &cfg, 7, 1_000_000, 11, &levels).unwrap();
    assert_eq!(fc, again);
}

#[test]
fn forecast_degenerate_limit() {
    let state = FilterState::new(0.4, 1e-24, 14.0, 1e-24).unwrap();
    let cfg = FilterConfig::default().with_w_star(1e-24);
    let fc = forecast_rt(&state, &cfg, 1, 1000, 3, &QuantileLevels::default()).unwrap();
    for q in &fc.quantiles[0] {
        assert!((q - 0.4f64.exp()).abs() < 1e-9);
    }
}

#[test]
fn cori_flat_example() {
    let series = IncidenceSeries::new(start(), vec![100; 20]).unwrap();
    let w = GenerationInterval::from_weights(vec![1.0]).unwrap();
    let levels = QuantileLevels::default();
    let post = run_cori(&series, &w, &CoriConfig::default(), &levels).unwrap();
    let day = &post.days[7];
    assert!(day.valid);
    assert_eq!((day.shape, day.rate), (705.0, 701.0));
    assert!((day.mean() - 1.00571).abs() < 1e-5);
    assert!((day.cv - 0.03766).abs() < 1e-5);

    let big = run_cori(
        &series.scaled(10).unwrap(),
        &w,
        &CoriConfig::default(),
        &levels,
    )
    .unwrap();
    assert!((big.days[7].cv - 0.011949).abs() < 1e-6);
}

#[test]
fn cori_mean_tends_to_ratio_of_sums() {
    let counts: Vec<u64> = (0..40).map(|t| 50 + (t * 37 % 23) as u64).collect();
    let series = IncidenceSeries::new(start(), counts.clone()).unwrap();
    let w = GenerationInterval::from_weights(vec![0.2, 0.5, 0.3]).unwrap();
    let cfg = CoriConfig {
        tau: 7,
        a: 1e-14,
        b: 1e-14,
    };
    let post = run_cori(&series, &w, &cfg, &QuantileLevels::default()).unwrap();
    let lambda = rtfilter::compute_lambda(&series, &w);
    for (t, day) in post.days.iter().enumerate().filter(|(_, d)| d.valid) {
        let sum_i: f64 = counts[t - 6..=t].iter().map(|&c| c as f64).sum();
        let sum_l: f64 = lambda[t - 6..=t].iter().sum();
        assert!((day.mean() - sum_i / sum_l).abs() < 1e-12 * (sum_i / sum_l));
    }
}

#[test]
fn gamma_rate_scaling() {
    for &(shape, rate) in &[(705.0, 701.0), (5.5, 2.0), (0.7, 10.0)] {
        for &p in &[0.1, 0.5, 0.9] {
            for &k in &[0.1, 3.0, 1e3] {
                let base = gamma_quantile(p, shape, rate).unwrap();
                let scaled = gamma_quantile(p, shape, k * rate).unwrap();
                assert!((scaled * k - base).abs() < 1e-12 * base);
            }
        }
    }
}
