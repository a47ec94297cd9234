//! `analyze`: estimator pipeline over a trace file; emits the results JSON.
//!
//! An undefined temperature (ratio at the degeneracy asymptote, wrong-side
//! ratio) is a successful analysis with `valid: false`, not an error.

use std::path::Path;

use serde_json::json;

use rts_thermo::estimator::{
    detect_states, dwell_statistics, estimate_temperature, fano_factor, occupancy_fraction,
};
use rts_thermo::io::{read_trace_csv, save_json, AnalysisResults};
use rts_thermo::rts::SampledTrace;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

use super::{ensure_dir, out_file};

/// The in-memory pipeline step shared with `roundtrip`.
pub fn analyze_trace(cfg: &RunConfig, trace: &SampledTrace, echo: serde_json::Value) -> CliResult<AnalysisResults> {
    let detection = cfg.detection_config()?;
    let det = detect_states(trace, &detection)?;
    if let Some(diag) = &det.diagnostic {
        return Err(CliError::Numerical(format!("state detection failed: {diag}")));
    }
    let stats = dwell_statistics(&det.events)?;
    let window = det.events.total_time / cfg.detection.fano_windows as f64;
    let fano = fano_factor(&det.events, window).ok();
    let (f1, f2) = occupancy_fraction(&det.events)?;
    let system = cfg.system()?;
    let est = estimate_temperature(&stats, &system, &cfg.estimator_options())?;

    let results = AnalysisResults {
        tau1_hat: stats.tau1_hat,
        tau2_hat: stats.tau2_hat,
        n1: stats.n1_events,
        n2: stats.n2_events,
        fano,
        f1,
        f2,
        t_hat: None,
        sigma_t: None,
        valid: est.valid,
        reason: est.reason.clone(),
        inputs_echo: echo,
    }
    .with_estimate(est.t_hat, est.sigma_t);
    Ok(results)
}

/// Reads the sidecar written next to a trace (same stem, `.json`), if any.
fn sidecar_for(trace_path: &Path) -> Option<rts_thermo::io::TraceSidecar> {
    let path = trace_path.with_extension("json");
    path.exists()
        .then(|| rts_thermo::io::load_json(&path).ok())
        .flatten()
}

pub fn run(cfg: &RunConfig, trace_path: &Path, out_dir: &Path) -> CliResult<AnalysisResults> {
    cfg.validate()?;
    let trace = read_trace_csv(trace_path)?;

    // when thresholds are not pinned in the configuration, prefer the level
    // and noise metadata recorded by the instrument/simulator sidecar
    let mut effective = cfg.clone();
    let mut sidecar_used = false;
    if cfg.detection.threshold_low.is_none() && cfg.detection.threshold_high.is_none() {
        if let Some(sidecar) = sidecar_for(trace_path) {
            effective.trace.sample_rate = sidecar.trace.sample_rate;
            effective.trace.current_1 = sidecar.trace.current_1;
            effective.trace.current_2 = sidecar.trace.current_2;
            effective.trace.noise_sigma = sidecar.trace.noise_sigma;
            sidecar_used = true;
        }
    }

    let echo = json!({
        "trace": trace_path.display().to_string(),
        "sidecar_used": sidecar_used,
        "detection": effective.detection_config()?,
        "system": effective.system()?,
        "estimator": effective.estimator_options(),
        "fano_windows": effective.detection.fano_windows,
    });
    let results = analyze_trace(&effective, &trace, echo)?;
    ensure_dir(out_dir)?;
    save_json(&results, &out_file(out_dir, "results.json"))?;
    Ok(results)
}
