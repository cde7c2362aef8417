//! Reruns the estimators on K-scaled counts and summarizes what changed.

use std::fmt::Write;

use crate::pipeline::Estimates;
use crate::table::{Cell, Table};

pub struct ColumnDiff {
    pub column: String,
    pub max_abs_diff: f64,
    pub compared: usize,
}

pub struct CvRatio {
    pub min: f64,
    pub max: f64,
    /// Largest relative deviation from √((a + ΣI)/(a + K ΣI)).
    pub max_rel_error: f64,
}

pub struct ScaleReport {
    pub k: u64,
    pub dlm: Vec<ColumnDiff>,
    pub cori: Option<CvRatio>,
}

pub fn compare(
    k: u64,
    base: &Table,
    scaled: &Table,
    base_est: &Estimates,
    scaled_est: &Estimates,
    prior_shape: f64,
) -> ScaleReport {
    let dlm = base
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| c.starts_with("dlm_"))
        .map(|(i, c)| {
            let mut max_abs_diff = 0.0f64;
            let mut compared = 0;
            for (r0, r1) in base.rows.iter().zip(&scaled.rows) {
                if let (Cell::Num(a), Cell::Num(b)) = (&r0[i], &r1[i]) {
                    max_abs_diff = max_abs_diff.max((a - b).abs());
                    compared += 1;
                }
            }
            ColumnDiff {
                column: c.clone(),
                max_abs_diff,
                compared,
            }
        })
        .collect();

    let cori = base_est
        .cori
        .as_ref()
        .zip(scaled_est.cori.as_ref())
        .map(|(c0, c1)| {
            let mut ratio = CvRatio {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
                max_rel_error: 0.0,
            };
            for (d0, d1) in c0
                .days
                .iter()
                .zip(&c1.days)
                .filter(|(a, b)| a.valid && b.valid)
            {
                let observed = d1.cv / d0.cv;
                let sum_i = d0.shape - prior_shape;
                let expected = ((prior_shape + sum_i) / (prior_shape + k as f64 * sum_i)).sqrt();
                ratio.min = ratio.min.min(observed);
                ratio.max = ratio.max.max(observed);
                ratio.max_rel_error = ratio
                    .max_rel_error
                    .max((observed - expected).abs() / expected);
            }
            ratio
        });
    ScaleReport { k, dlm, cori }
}

impl ScaleReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scale check: counts multiplied by K = {}", self.k);
        for d in &self.dlm {
            let _ = writeln!(
                out,
                "  {:<14} max |diff| = {} over {} days",
                d.column, d.max_abs_diff, d.compared
            );
        }
        if let Some(r) = &self.cori {
            let _ = writeln!(
                out,
                "  cori_cv ratio  min = {} max = {} (max relative error vs sqrt((a+sum I)/(a+K sum I)) = {:e})",
                r.min, r.max, r.max_rel_error
            );
        }
        out
    }
}
