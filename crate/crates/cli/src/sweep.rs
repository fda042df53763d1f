//! Parallel evaluation of the extraction grid.

use std::f64::consts::PI;

use qpurify_core::extraction::{analyze, contracted_map, ExtractionResult, MeasurementSpec};
use qpurify_core::ModelParams;
use rayon::prelude::*;

use crate::config::{Config, ModelRatios, Point};
use crate::CliError;

/// Model parameters at a grid point, with the coupling fixed to one.
pub fn model_at(model: &ModelRatios, kt_over_omega: f64) -> qpurify_core::Result<ModelParams> {
    let p = ModelParams::from_ratios(
        model.omega_over_epsilon,
        model.gamma2_over_epsilon,
        model.gamma1_over_gamma2,
        kt_over_omega,
    )?;
    Ok(if model.ideal { p.ideal() } else { p })
}

pub fn measurement_at(pt: &Point) -> qpurify_core::Result<MeasurementSpec> {
    MeasurementSpec::new(pt.theta_over_pi * PI, pt.chi, pt.epsilon_tau)
}

pub fn analyze_point(model: &ModelRatios, pt: &Point) -> qpurify_core::Result<ExtractionResult> {
    let p = model_at(model, pt.kt_over_omega)?;
    analyze(&contracted_map(&p, &measurement_at(pt)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub point: Point,
    pub purity: f64,
    pub lambda0_abs: f64,
    pub lambda1_abs: f64,
    pub log_ratio: f64,
    pub degenerate: bool,
}

/// Grid points in row-major order: `epsilon_tau` outermost, then
/// `theta_over_pi`, `chi` and `kT_over_omega`.
pub fn grid(cfg: &Config) -> Vec<Point> {
    let axes = cfg.axes();
    let (et, th, chi, kt) = (
        axes.epsilon_tau.values(),
        axes.theta_over_pi.values(),
        axes.chi.values(),
        axes.kt_over_omega.values(),
    );
    let mut out = Vec::with_capacity(et.len() * th.len() * chi.len() * kt.len());
    for &epsilon_tau in &et {
        for &theta_over_pi in &th {
            for &c in &chi {
                for &k in &kt {
                    out.push(Point { epsilon_tau, theta_over_pi, chi: c, kt_over_omega: k });
                }
            }
        }
    }
    out
}

fn evaluate(model: &ModelRatios, pt: &Point) -> qpurify_core::Result<SweepRow> {
    let res = analyze_point(model, pt)?;
    Ok(SweepRow {
        point: *pt,
        purity: res.purity,
        lambda0_abs: res.lambda0().norm(),
        lambda1_abs: res.lambda1().norm(),
        log_ratio: res.log_ratio,
        degenerate: res.degenerate,
    })
}

/// Evaluates every grid point on a pool of `cfg.workers` threads (all cores
/// when unset). Rows come back in grid order whatever the pool size; the
/// first failing point in grid order aborts the sweep.
pub fn run_sweep(cfg: &Config) -> Result<Vec<SweepRow>, CliError> {
    let points = grid(cfg);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let model = cfg.model;
    let results: Vec<_> = pool.install(|| points.par_iter().map(|pt| evaluate(&model, pt)).collect());
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.map_err(|source| CliError::GridPoint { index, point: points[index], source }))
        .collect()
}
