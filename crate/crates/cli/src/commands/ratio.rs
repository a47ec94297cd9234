//! `ratio`: the ensemble report at one temperature — gap, probabilities,
//! finite and infinite-bath ratios, state-equation residual and the
//! consistent island area.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use rts_thermo::ensemble::ConsistentArea;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

use super::{ensure_dir, opt_cell, out_file, OutputFormat};

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub temperature: f64,
    /// Bath chemical potential, meV.
    pub mu: f64,
    /// Effective energy gap X, meV.
    pub x: f64,
    pub beta_x: f64,
    pub p1: f64,
    pub p2: f64,
    pub ln_ratio: f64,
    /// p1/p2; absent when only the logarithm is representable.
    pub ratio: Option<f64>,
    pub ln_ratio_infinite: f64,
    pub ratio_infinite: Option<f64>,
    pub ln_z_qg: f64,
    /// ln Z_QG − c_A·Σ₁/(2k_B).
    pub state_equation_residual: f64,
    /// Island area that zeroes the residual; absent when ln Z_QG < 0.
    pub sigma1_consistent: Option<f64>,
}

#[derive(Serialize)]
struct FullReport<'a> {
    config: &'a RunConfig,
    report: &'a RatioReport,
}

pub fn report(cfg: &RunConfig) -> CliResult<RatioReport> {
    let params = cfg.params()?;
    let d = params.occupation_probability()?;
    let ratio = params.occupation_ratio()?;
    let ratio_inf = params.infinite_reservoir_ratio()?;
    let sigma1_star = match params.consistent_island_area()? {
        ConsistentArea::Area(a) => Some(a),
        ConsistentArea::NoNonnegativeArea { .. } => None,
    };
    Ok(RatioReport {
        temperature: cfg.temperature,
        mu: params.chemical_potential()?,
        x: params.effective_energy_gap(),
        beta_x: params.beta() * params.effective_energy_gap(),
        p1: d.p1,
        p2: d.p2,
        ln_ratio: ratio.ln(),
        ratio: ratio.linear(),
        ln_ratio_infinite: ratio_inf.ln(),
        ratio_infinite: ratio_inf.linear(),
        ln_z_qg: params.partition_qg()?.ln(),
        state_equation_residual: params.state_equation_residual()?,
        sigma1_consistent: sigma1_star,
    })
}

pub fn run(cfg: &RunConfig, format: OutputFormat, out_dir: &Path) -> CliResult<RatioReport> {
    cfg.validate()?;
    let r = report(cfg)?;
    ensure_dir(out_dir)?;
    match format {
        OutputFormat::Csv => {
            let path = out_file(out_dir, "ratio.csv");
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            );
            writeln!(
                f,
                "temperature_k,mu_mev,x_mev,beta_x,p1,p2,ln_ratio,ratio,\
                 ln_ratio_infinite,ratio_infinite,ln_z_qg,state_equation_residual,\
                 sigma1_consistent_nm2"
            )
            .map_err(CliError::from)?;
            writeln!(
                f,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.temperature,
                r.mu,
                r.x,
                r.beta_x,
                r.p1,
                r.p2,
                r.ln_ratio,
                opt_cell(r.ratio),
                r.ln_ratio_infinite,
                opt_cell(r.ratio_infinite),
                r.ln_z_qg,
                r.state_equation_residual,
                opt_cell(r.sigma1_consistent)
            )
            .map_err(CliError::from)?;
        }
        OutputFormat::Json => {
            let path = out_file(out_dir, "ratio.json");
            rts_thermo::io::save_json(
                &FullReport {
                    config: cfg,
                    report: &r,
                },
                &path,
            )?;
        }
    }
    Ok(r)
}
