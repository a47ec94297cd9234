//! `limit-sweep`: finite-bath ratio against its N₂ → ∞ limit over a bath
//! size grid, with the fitted convergence order.
//!
//! Default mode scales the bath area with N₂ (fixed areal density, fixed μ).
//! The fixed-area variant keeps Σ₂ and lets μ = N₂/(gΣ₂) grow with N₂.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use rts_thermo::numeric::log_log_slope;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

use super::{ensure_dir, opt_cell, out_file, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    /// Σ₂ ∝ N₂: μ constant across the sweep.
    FixedDensity,
    /// Σ₂ fixed: μ grows linearly with N₂.
    FixedArea,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n2: u64,
    pub sigma2: f64,
    pub mu: f64,
    pub ln_ratio: f64,
    pub ratio: Option<f64>,
    pub ln_ratio_infinite: f64,
    pub ratio_infinite: Option<f64>,
    /// |ratio/ratio_∞ − 1|.
    pub rel_gap: f64,
}

pub fn rows(cfg: &RunConfig, n2_values: &[u64], mode: SweepMode) -> CliResult<Vec<SweepRow>> {
    let base_density = cfg.reservoir.n2 as f64 / cfg.reservoir.sigma2;
    let mut out = Vec::with_capacity(n2_values.len());
    for &n2 in n2_values {
        let mut scoped = cfg.clone();
        scoped.reservoir.n2 = n2;
        scoped.reservoir.sigma2 = match mode {
            SweepMode::FixedDensity => n2 as f64 / base_density,
            SweepMode::FixedArea => cfg.reservoir.sigma2,
        };
        let params = scoped.params()?;
        let finite = params.occupation_ratio()?;
        let infinite = params.infinite_reservoir_ratio()?;
        let rel_gap = ((finite.ln() - infinite.ln()).exp() - 1.0).abs();
        out.push(SweepRow {
            n2,
            sigma2: scoped.reservoir.sigma2,
            mu: params.chemical_potential()?,
            ln_ratio: finite.ln(),
            ratio: finite.linear(),
            ln_ratio_infinite: infinite.ln(),
            ratio_infinite: infinite.linear(),
            rel_gap,
        });
    }
    Ok(out)
}

/// Fitted log-log slope of the gap against N₂; `None` for single-point
/// sweeps or vanishing gaps.
pub fn fitted_slope(table: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|r| r.rel_gap > 0.0)
        .map(|r| (r.n2 as f64, r.rel_gap))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    log_log_slope(&pts).ok()
}

#[derive(Serialize)]
struct SweepReport<'a> {
    config: &'a RunConfig,
    mode: SweepMode,
    slope: Option<f64>,
    rows: &'a [SweepRow],
}

pub fn run(
    cfg: &RunConfig,
    n2_values: &[u64],
    mode: SweepMode,
    format: OutputFormat,
    out_dir: &Path,
) -> CliResult<(Vec<SweepRow>, Option<f64>)> {
    cfg.validate()?;
    let table = rows(cfg, n2_values, mode)?;
    let slope = fitted_slope(&table);
    ensure_dir(out_dir)?;
    match format {
        OutputFormat::Csv => {
            let path = out_file(out_dir, "limit_sweep.csv");
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            );
            writeln!(
                f,
                "n2,sigma2_nm2,mu_mev,ln_ratio,ratio,ln_ratio_infinite,ratio_infinite,rel_gap"
            )
            .map_err(CliError::from)?;
            for r in &table {
                writeln!(
                    f,
                    "{},{},{},{},{},{},{},{}",
                    r.n2,
                    r.sigma2,
                    r.mu,
                    r.ln_ratio,
                    opt_cell(r.ratio),
                    r.ln_ratio_infinite,
                    opt_cell(r.ratio_infinite),
                    r.rel_gap
                )
                .map_err(CliError::from)?;
            }
        }
        OutputFormat::Json => {}
    }
    rts_thermo::io::save_json(
        &SweepReport {
            config: cfg,
            mode,
            slope,
            rows: &table,
        },
        &out_file(out_dir, "limit_sweep.json"),
    )?;
    Ok((table, slope))
}
