use std::time::Instant;

use ntn_core::{estimate_outage, outage_probability, Scenario};

use crate::{CliError, RunConfig};

/// One output line. Absent estimators leave their fields `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_param: Option<&'static str>,
    /// In configuration units.
    pub sweep_value: Option<f64>,
    pub p_out_analytic: Option<f64>,
    pub p_out_mc: Option<f64>,
    pub mc_ci95: Option<f64>,
    pub runtime_ms: Option<f64>,
}

/// Evaluates every point of the run, in sweep order. Each point reuses the
/// configured seed, so Monte Carlo columns share random numbers across the
/// sweep. Wall time is recorded only when `timing` is set.
pub fn run(cfg: &RunConfig, timing: bool) -> Result<Vec<ResultRow>, CliError> {
    let mut points: Vec<(Option<f64>, Scenario, f64)> = Vec::new();
    match &cfg.sweep {
        None => points.push((None, cfg.scenario, cfg.threshold)),
        Some(sweep) => {
            for (&shown, &v) in cfg.sweep_display.iter().zip(&sweep.values) {
                let (mut scn, mut t) = (cfg.scenario, cfg.threshold);
                sweep.param.apply(&mut scn, &mut t, v)?;
                points.push((Some(shown), scn, t));
            }
        }
    }
    let param = cfg.sweep.as_ref().map(|s| s.param.name());
    points
        .into_iter()
        .map(|(sweep_value, scn, threshold)| {
            let start = Instant::now();
            let analytic = cfg
                .mode
                .analytic()
                .then(|| outage_probability(&scn, threshold, cfg.ctrl))
                .transpose()?;
            let mc = cfg
                .mode
                .monte_carlo()
                .then(|| estimate_outage(&scn, threshold, cfg.n_iter, cfg.seed, &cfg.snapshot))
                .transpose()?;
            Ok(ResultRow {
                sweep_param: param,
                sweep_value,
                p_out_analytic: analytic,
                p_out_mc: mc.map(|e| e.p_hat),
                mc_ci95: mc.map(|e| e.half_width_95),
                runtime_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect()
}
