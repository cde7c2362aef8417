//! Property tests for the invariants of each module.

use chrono::NaiveDate;
use proptest::prelude::*;
use rtfilter::special::{gamma_quantile, student_t_cdf, student_t_quantile};
use rtfilter::{
    compute_lambda, compute_observations, run_cori, run_filter, step, CoriConfig, ErlangSpec,
    FilterConfig, FilterState, GenerationInterval, IncidenceSeries, QuantileLevels,
};

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 3, 1).unwrap()
}

fn covid_gi() -> GenerationInterval {
    GenerationInterval::discretize(&ErlangSpec::covid19(), 30).unwrap()
}

fn counts_strategy(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(10u64..5_000, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t_cdf_is_symmetric(x in -50.0f64..50.0, n in 0.05f64..2000.0) {
        let sum = student_t_cdf(x, n).unwrap() + student_t_cdf(-x, n).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t_quantile_increases(p in 0.0005f64..0.999, dp in 1e-6f64..1e-3, n in 0.1f64..1000.0) {
        let q = p + dp;
        prop_assert!(student_t_quantile(p, n).unwrap() < student_t_quantile(q, n).unwrap());
    }

    #[test]
    fn gamma_quantile_increases(p in 0.0005f64..0.999, dp in 1e-6f64..1e-3, shape in 0.1f64..1e4) {
        prop_assert!(gamma_quantile(p, shape, 1.0).unwrap() < gamma_quantile(p + dp, shape, 1.0).unwrap());
    }

    #[test]
    fn erlang_weights_are_normalized(shape in 1u32..8, scale in 0.2f64..2.5, extra in 0usize..20) {
        let spec = ErlangSpec::new(shape, scale).unwrap();
        if let Ok(gi) = GenerationInterval::discretize(&spec, 20 + extra) {
            prop_assert!((gi.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(gi.weights().iter().all(|w| *w >= 0.0));
            let longer = GenerationInterval::discretize(&spec, 21 + extra).unwrap();
            prop_assert!(longer.truncated_mass() <= gi.truncated_mass());
        }
    }

    #[test]
    fn lambda_is_linear(a in counts_strategy(40..41), b in counts_strategy(40..41), k in 1u64..20) {
        let w = covid_gi();
        let combined: Vec<u64> = a.iter().zip(&b).map(|(x, y)| k * x + y).collect();
        let la = compute_lambda(&IncidenceSeries::new(start(), a).unwrap(), &w);
        let lb = compute_lambda(&IncidenceSeries::new(start(), b).unwrap(), &w);
        let lc = compute_lambda(&IncidenceSeries::new(start(), combined).unwrap(), &w);
        for t in 0..lc.len() {
            let expected = k as f64 * la[t] + lb[t];
            prop_assert!((lc[t] - expected).abs() <= 1e-9 * expected.max(1.0));
        }
    }

    #[test]
    fn lambda_is_causal(counts in counts_strategy(40..41), u in 0usize..40, bump in 1u64..1000) {
        let w = covid_gi();
        let base = compute_lambda(&IncidenceSeries::new(start(), counts.clone()).unwrap(), &w);
        let mut changed = counts;
        changed[u] += bump;
        let after = compute_lambda(&IncidenceSeries::new(start(), changed).unwrap(), &w);
        for t in 0..=u {
            prop_assert_eq!(base[t], after[t]);
        }
        prop_assert!(after[u + 1..].iter().zip(&base[u + 1..]).any(|(x, y)| x != y) || u == 39);
    }

    #[test]
    fn observations_are_scale_free(counts in counts_strategy(30..70), k in 2u64..500) {
        let w = covid_gi();
        let series = IncidenceSeries::new(start(), counts).unwrap();
        let base = compute_observations(&series, &w, 10).unwrap();
        let scaled = compute_observations(&series.scaled(k).unwrap(), &w, 10).unwrap();
        for t in 0..base.len() {
            if base.valid[t] && scaled.valid[t] {
                prop_assert_eq!(base.y[t].unwrap().to_bits(), scaled.y[t].unwrap().to_bits());
            }
        }
    }

    #[test]
    fn filter_is_scale_free(counts in counts_strategy(30..70), k in 2u64..500) {
        let w = covid_gi();
        let cfg = FilterConfig::default();
        let levels = QuantileLevels::default();
        let series = IncidenceSeries::new(start(), counts).unwrap();
        let base = run_filter(&compute_observations(&series, &w, 10).unwrap(), &cfg, &levels).unwrap();
        let scaled_obs = compute_observations(&series.scaled(k).unwrap(), &w, 10).unwrap();
        let scaled = run_filter(&scaled_obs, &cfg, &levels).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn step_keeps_state_valid(
        m in -3.0f64..3.0,
        c in 1e-4f64..5.0,
        n in 0.5f64..30.0,
        s in 1e-4f64..5.0,
        y in prop::option::of(-6.0f64..6.0),
        tau in 1u32..30,
    ) {
        let cfg = FilterConfig::from_tau(tau).unwrap();
        let state = FilterState::new(m, c, n, s).unwrap();
        let next = step(&state, y, &cfg).unwrap();
        prop_assert!(next.c > 0.0 && next.s > 0.0 && next.n > 0.0);
        prop_assert!(next.n <= n.max(cfg.limiting_dof()) + 1e-12);
        if let Some(y) = y {
            // Scale identity: (s'/s)(r − A²q) = s'(r* − A²q*).
            let r_star = c / s + cfg.w_star;
            let q_star = r_star + 1.0;
            let gain = r_star / q_star;
            let long_form = (next.s / s) * (s * r_star - gain * gain * s * q_star);
            prop_assert!((long_form - next.c).abs() <= 1e-10 * next.c);
            prop_assert!(((next.m - m) - gain * (y - m)).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn dof_converges_geometrically(n0 in 0.5f64..40.0, tau in 1u32..30, days in 1usize..200) {
        let mut cfg = FilterConfig::from_tau(tau).unwrap();
        cfg.n0 = n0;
        let limit = cfg.limiting_dof();
        let mut state = cfg.prior();
        let mut prev_gap = (n0 - limit).abs();
        for t in 1..=days {
            state = step(&state, Some(0.1), &cfg).unwrap();
            let gap = (state.n - limit).abs();
            prop_assert!(gap <= prev_gap + 1e-12);
            prop_assert!(gap <= cfg.delta.powi(t as i32) * (n0 - limit).abs() + 1e-9);
            prev_gap = gap;
        }
    }

    #[test]
    fn rt_quantiles_increase(m in -2.0f64..2.0, c in 1e-4f64..4.0, n in 0.3f64..200.0) {
        let state = FilterState::new(m, c, n, 1.0).unwrap();
        let levels: Vec<f64> = (1..99).map(|k| k as f64 / 100.0).collect();
        let qs: Vec<f64> = levels.iter().map(|&p| state.rt_quantile(p).unwrap()).collect();
        prop_assert!(qs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cori_cv_scaling(counts in counts_strategy(20..60), k in 2u64..200) {
        let w = covid_gi();
        let cfg = CoriConfig::default();
        let levels = QuantileLevels::default();
        let series = IncidenceSeries::new(start(), counts).unwrap();
        let scaled = series.scaled(k).unwrap();
        let base = run_cori(&series, &w, &cfg, &levels).unwrap();
        let big = run_cori(&scaled, &w, &cfg, &levels).unwrap();
        for (d0, d1) in base.days.iter().zip(&big.days) {
            prop_assert_eq!(d0.valid, d1.valid);
            if d0.valid {
                let sum_i = d0.shape - cfg.a;
                let factor = ((cfg.a + sum_i) / (cfg.a + k as f64 * sum_i)).sqrt();
                prop_assert!((d1.cv - factor * d0.cv).abs() <= 1e-12 * d1.cv);
                prop_assert!(d1.cv < d0.cv);
            }
        }
    }
}
