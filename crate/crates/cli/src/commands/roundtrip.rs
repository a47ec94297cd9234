//! `roundtrip`: simulate → analyze → compare against the configured
//! temperature, optionally repeated over seeds with coverage statistics.
//!
//! Repeats fan out over a worker pool; outcomes are merged in seed order so
//! the output is independent of scheduling.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

use super::{analyze, ensure_dir, opt_cell, out_file, simulate, OutputFormat};

#[derive(Debug, Clone, Serialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub t_true: f64,
    pub t_hat: Option<f64>,
    pub sigma_t: Option<f64>,
    /// Standardized error (T̂ − T)/σ_T, when the estimate is valid.
    pub z: Option<f64>,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudySummary {
    pub repeats: usize,
    pub valid_count: usize,
    /// How many valid estimates had |z| ≤ 3.
    pub covered_3sigma: usize,
    pub z_mean: Option<f64>,
    pub z_std: Option<f64>,
    pub t_true: f64,
}

/// One simulate → analyze pass for a specific seed.
fn one_pass(cfg: &RunConfig, seed: u64) -> CliResult<SeedOutcome> {
    let noise_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    let (_, trace) = simulate::generate(cfg, seed, noise_seed)?;
    let results = analyze::analyze_trace(cfg, &trace, json!({ "seed": seed }))?;
    let z = match (results.valid, results.t_hat, results.sigma_t) {
        (true, Some(t_hat), Some(sigma_t)) if sigma_t > 0.0 => {
            Some((t_hat - cfg.temperature) / sigma_t)
        }
        _ => None,
    };
    Ok(SeedOutcome {
        seed,
        t_true: cfg.temperature,
        t_hat: results.t_hat,
        sigma_t: results.sigma_t,
        z,
        valid: results.valid,
    })
}

/// Runs `repeats` passes with consecutive seeds starting at `cfg.seed`.
pub fn study(cfg: &RunConfig, repeats: usize) -> CliResult<(Vec<SeedOutcome>, StudySummary)> {
    cfg.validate()?;
    if repeats == 0 {
        return Err(CliError::Validation(
            "roundtrip repeats must be >= 1".to_string(),
        ));
    }
    let outcomes: Vec<CliResult<SeedOutcome>> = (0..repeats as u64)
        .into_par_iter()
        .map(|i| one_pass(cfg, cfg.seed.wrapping_add(i)))
        .collect();
    let mut rows = Vec::with_capacity(repeats);
    for o in outcomes {
        rows.push(o?);
    }

    let zs: Vec<f64> = rows.iter().filter_map(|r| r.z).collect();
    let valid_count = rows.iter().filter(|r| r.valid).count();
    let covered = zs.iter().filter(|z| z.abs() <= 3.0).count();
    let (z_mean, z_std) = if zs.is_empty() {
        (None, None)
    } else {
        let m = zs.iter().sum::<f64>() / zs.len() as f64;
        let std = if zs.len() < 2 {
            None
        } else {
            Some(
                (zs.iter().map(|z| (z - m) * (z - m)).sum::<f64>() / (zs.len() - 1) as f64)
                    .sqrt(),
            )
        };
        (Some(m), std)
    };
    let summary = StudySummary {
        repeats,
        valid_count,
        covered_3sigma: covered,
        z_mean,
        z_std,
        t_true: cfg.temperature,
    };
    Ok((rows, summary))
}

#[derive(Serialize)]
struct RoundtripReport<'a> {
    config: &'a RunConfig,
    summary: &'a StudySummary,
    outcomes: &'a [SeedOutcome],
}

pub fn run(
    cfg: &RunConfig,
    repeats: usize,
    format: OutputFormat,
    out_dir: &Path,
) -> CliResult<(Vec<SeedOutcome>, StudySummary)> {
    let (rows, summary) = study(cfg, repeats)?;
    ensure_dir(out_dir)?;
    match format {
        OutputFormat::Csv => {
            let path = out_file(out_dir, "roundtrip.csv");
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            );
            writeln!(f, "seed,t_true_k,t_hat_k,sigma_t_k,z,valid").map_err(CliError::from)?;
            for r in &rows {
                writeln!(
                    f,
                    "{},{},{},{},{},{}",
                    r.seed,
                    r.t_true,
                    opt_cell(r.t_hat),
                    opt_cell(r.sigma_t),
                    opt_cell(r.z),
                    r.valid
                )
                .map_err(CliError::from)?;
            }
        }
        OutputFormat::Json => {}
    }
    rts_thermo::io::save_json(
        &RoundtripReport {
            config: cfg,
            summary: &summary,
            outcomes: &rows,
        },
        &out_file(out_dir, "roundtrip.json"),
    )?;
    Ok((rows, summary))
}
