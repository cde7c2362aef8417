//! Static SVG fan chart of the posterior quantiles.

use std::fmt::Write;

use rtfilter::{observed_rt, QuantileLevels, RtForecast};

use crate::pipeline::Estimates;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;

const STYLE: &str = "\
text { font-family: sans-serif; font-size: 11px; fill: #222; }
.axis line { stroke: #444; stroke-width: 1; }
.grid line { stroke: #ddd; stroke-width: 1; }
.reference { stroke: #555; stroke-width: 1.2; stroke-dasharray: 6 4; }
.band { stroke: none; }
.median { fill: none; stroke-width: 1.8; }
.dlm .band { fill: #2b6cb0; }
.dlm .median { stroke: #1a365d; }
.cori .band { fill: #dd6b20; }
.cori .median { stroke: #7b341e; }
.forecast .median { stroke-dasharray: 4 3; }
.observed circle { fill: #111; fill-opacity: 0.55; }
";

/// One estimator's per-day quantiles; `None` where it has no estimate.
struct Fan {
    class: &'static str,
    label: &'static str,
    color: &'static str,
    days: Vec<Option<Vec<f64>>>,
}

struct Frame {
    days: usize,
    y_max: f64,
}

impl Frame {
    fn x(&self, t: usize) -> f64 {
        let span = (self.days.max(2) - 1) as f64;
        LEFT + (WIDTH - LEFT - RIGHT) * t as f64 / span
    }

    fn y(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, self.y_max);
        HEIGHT - BOTTOM - (HEIGHT - TOP - BOTTOM) * r / self.y_max
    }
}

fn nice_step(range: f64, target_ticks: f64) -> f64 {
    let raw = range / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Maximal runs of consecutive days where `f` yields a value.
fn runs<T>(n: usize, f: impl Fn(usize) -> Option<T>) -> Vec<Vec<(usize, T)>> {
    let mut out: Vec<Vec<(usize, T)>> = Vec::new();
    let mut current = Vec::new();
    for t in 0..n {
        match f(t) {
            Some(v) => current.push((t, v)),
            None if !current.is_empty() => out.push(std::mem::take(&mut current)),
            None => {}
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn median_index(levels: &QuantileLevels) -> Option<usize> {
    levels
        .position(0.5)
        .or_else(|| (levels.len() % 2 == 1).then_some(levels.len() / 2))
}

fn draw_fan(
    svg: &mut String,
    frame: &Frame,
    fan: &Fan,
    levels: &QuantileLevels,
    extra_class: &str,
) {
    let k = levels.len();
    let _ = writeln!(
        svg,
        r#"<g class="estimator {}{extra_class}" data-estimator="{}">"#,
        fan.class, fan.class
    );
    for i in 0..k / 2 {
        let (lo, hi) = (i, k - 1 - i);
        let opacity = 0.14 + 0.12 * i as f64;
        for run in runs(fan.days.len(), |t| {
            fan.days[t].as_ref().map(|q| (q[lo], q[hi]))
        }) {
            let mut points = String::new();
            for &(t, (_, upper)) in &run {
                let _ = write!(points, "{:.2},{:.2} ", frame.x(t), frame.y(upper));
            }
            for &(t, (lower, _)) in run.iter().rev() {
                let _ = write!(points, "{:.2},{:.2} ", frame.x(t), frame.y(lower));
            }
            let _ = writeln!(
                svg,
                r#"<polygon class="band" fill="{}" fill-opacity="{opacity:.2}" data-levels="{}-{}" points="{}"/>"#,
                fan.color,
                QuantileLevels::label(levels.get(lo).unwrap_or_default()),
                QuantileLevels::label(levels.get(hi).unwrap_or_default()),
                points.trim_end()
            );
        }
    }
    if let Some(mid) = median_index(levels) {
        for run in runs(fan.days.len(), |t| fan.days[t].as_ref().map(|q| q[mid])) {
            let points: Vec<String> = run
                .iter()
                .map(|&(t, q)| format!("{:.2},{:.2}", frame.x(t), frame.y(q)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="median" points="{}"/>"#,
                points.join(" ")
            );
        }
    }
    let _ = writeln!(svg, "</g>");
}

fn draw_axes(svg: &mut String, frame: &Frame, est: &Estimates) {
    let bottom = HEIGHT - BOTTOM;
    let _ = writeln!(svg, r#"<g class="grid">"#);
    let step = nice_step(frame.y_max, 6.0);
    let mut ticks = Vec::new();
    let mut v = 0.0;
    while v <= frame.y_max + 1e-9 {
        ticks.push(v);
        v += step;
    }
    for &v in &ticks {
        let _ = writeln!(
            svg,
            r#"<line x1="{LEFT:.2}" x2="{:.2}" y1="{y:.2}" y2="{y:.2}"/>"#,
            WIDTH - RIGHT,
            y = frame.y(v)
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="axis">"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" x2="{LEFT:.2}" y1="{TOP:.2}" y2="{bottom:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" x2="{:.2}" y1="{bottom:.2}" y2="{bottom:.2}"/>"#,
        WIDTH - RIGHT
    );
    for &v in &ticks {
        let y = frame.y(v);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            (v * 1e6).round() / 1e6
        );
    }
    let day_step = [1usize, 2, 7, 14, 28, 56, 91, 182, 364]
        .into_iter()
        .find(|s| frame.days / s <= 9)
        .unwrap_or(728);
    let start = est.series.start_date();
    for t in (0..frame.days).step_by(day_step) {
        let x = frame.x(t);
        let date = start + chrono::Days::new(t as u64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" x2="{x:.2}" y1="{bottom:.2}" y2="{:.2}"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{date}</text>"#,
            bottom + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16,{:.2}) rotate(-90)" text-anchor="middle">R(t)</text>"#,
        (TOP + bottom) / 2.0
    );
    let _ = writeln!(svg, "</g>");
}

/// Fan chart with quantile bands, medians, observed ratios and the R = 1 line.
pub fn fan_chart(
    est: &Estimates,
    levels: &QuantileLevels,
    forecast: Option<&RtForecast>,
) -> String {
    let n = est.obs.len();
    let horizon = forecast.map_or(0, |f| f.horizon());
    let mut fans = Vec::new();
    if let Some(dlm) = &est.dlm {
        fans.push(Fan {
            class: "dlm",
            label: "DLM",
            color: "#2b6cb0",
            days: (0..n)
                .map(|t| dlm.at(t).map(|d| d.quantiles.clone()))
                .collect(),
        });
    }
    if let Some(cori) = &est.cori {
        fans.push(Fan {
            class: "cori",
            label: "Cori",
            color: "#dd6b20",
            days: cori
                .days
                .iter()
                .map(|d| d.valid.then(|| d.quantiles.clone()))
                .collect(),
        });
    }
    let forecast_fan = forecast.map(|fc| Fan {
        class: "dlm",
        label: "forecast",
        color: "#2b6cb0",
        days: std::iter::repeat_n(None, n)
            .chain(fc.quantiles.iter().cloned().map(Some))
            .collect(),
    });

    let upper = levels.len() - 1;
    let band_max = fans
        .iter()
        .chain(forecast_fan.iter())
        .flat_map(|f| f.days.iter().flatten().map(move |q| q[upper]))
        .fold(1.0f64, f64::max);
    let y_max = (band_max * 1.1).max(1.5);
    let frame = Frame {
        days: n + horizon,
        y_max,
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, "<style>\n{STYLE}</style>");
    let _ = writeln!(
        svg,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    draw_axes(&mut svg, &frame, est);

    for fan in &fans {
        draw_fan(&mut svg, &frame, fan, levels, "");
    }
    if let Some(fan) = &forecast_fan {
        draw_fan(&mut svg, &frame, fan, levels, " forecast");
    }

    let reference = frame.y(1.0);
    let _ = writeln!(
        svg,
        r#"<line class="reference" x1="{LEFT:.2}" x2="{:.2}" y1="{reference:.2}" y2="{reference:.2}"/>"#,
        WIDTH - RIGHT
    );

    let _ = writeln!(svg, r#"<g class="observed">"#);
    for (t, r) in observed_rt(&est.obs).into_iter().enumerate() {
        if let Some(r) = r.filter(|r| *r <= y_max) {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#,
                frame.x(t),
                frame.y(r)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="legend">"#);
    let mut x = LEFT + 8.0;
    for fan in fans.iter().chain(forecast_fan.iter()) {
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.2}" y="12" width="14" height="10" fill="{}" fill-opacity="0.4"/><text x="{:.2}" y="21">{}</text>"#,
            fan.color,
            x + 18.0,
            fan.label
        );
        x += 90.0;
    }
    let _ = writeln!(
        svg,
        r##"<circle cx="{:.2}" cy="17" r="2.5" fill="#111"/><text x="{:.2}" y="21">observed e^y</text>"##,
        x + 7.0,
        x + 18.0
    );
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    svg
}
