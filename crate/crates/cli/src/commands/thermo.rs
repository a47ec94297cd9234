//! `thermo`: bath thermodynamics table with the exact-integral comparison.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use rts_thermo::fermi2d::oracle::{fd_oracle, OracleSettings};
use rts_thermo::fermi2d::thermo_point;

use crate::config::RunConfig;
use crate::{CliError, CliResult};

use super::{ensure_dir, opt_cell, out_file, OutputFormat};

#[derive(Debug, Clone, Serialize)]
pub struct ThermoRow {
    pub temperature: f64,
    pub mu: f64,
    pub u: f64,
    pub psi: f64,
    pub s: f64,
    pub c_a: f64,
    pub p: f64,
    /// Chemical potential from the exact Fermi-Dirac solve; absent at T = 0.
    pub mu_oracle: Option<f64>,
    /// Internal energy from the exact quadrature; absent at T = 0.
    pub u_oracle: Option<f64>,
    /// |U − U_oracle| / |U_oracle|.
    pub u_rel_gap: Option<f64>,
}

#[derive(Serialize)]
struct ThermoReport<'a> {
    config: &'a RunConfig,
    rows: &'a [ThermoRow],
}

pub fn rows(cfg: &RunConfig, temperatures: &[f64]) -> CliResult<Vec<ThermoRow>> {
    let g = cfg.dos()?;
    let m = cfg.reservoir.n2 as f64;
    let area = cfg.reservoir.sigma2;
    let settings = OracleSettings::default();
    let mut out = Vec::with_capacity(temperatures.len());
    for &t in temperatures {
        let point = thermo_point(m, area, g, t, &cfg.constants)?;
        let (mu_oracle, u_oracle, u_rel_gap) = if t > 0.0 {
            let exact = fd_oracle(m, area, g, t, &cfg.constants, &settings)?;
            let gap = (point.u - exact.u).abs() / exact.u.abs();
            (Some(exact.mu), Some(exact.u), Some(gap))
        } else {
            (None, None, None)
        };
        out.push(ThermoRow {
            temperature: t,
            mu: point.mu,
            u: point.u,
            psi: point.psi,
            s: point.s,
            c_a: point.c_a,
            p: point.p,
            mu_oracle,
            u_oracle,
            u_rel_gap,
        });
    }
    Ok(out)
}

pub fn run(
    cfg: &RunConfig,
    temperatures: &[f64],
    format: OutputFormat,
    out_dir: &Path,
) -> CliResult<Vec<ThermoRow>> {
    cfg.validate()?;
    let table = rows(cfg, temperatures)?;
    ensure_dir(out_dir)?;
    match format {
        OutputFormat::Csv => {
            let path = out_file(out_dir, "thermo.csv");
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
            );
            writeln!(
                f,
                "temperature_k,mu_mev,u_mev,psi_mev,s_mev_per_k,c_a_mev_per_k_nm2,\
                 p_mev_per_nm2,mu_oracle_mev,u_oracle_mev,u_rel_gap"
            )
            .map_err(CliError::from)?;
            for r in &table {
                writeln!(
                    f,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.temperature,
                    r.mu,
                    r.u,
                    r.psi,
                    r.s,
                    r.c_a,
                    r.p,
                    opt_cell(r.mu_oracle),
                    opt_cell(r.u_oracle),
                    opt_cell(r.u_rel_gap)
                )
                .map_err(CliError::from)?;
            }
        }
        OutputFormat::Json => {
            let path = out_file(out_dir, "thermo.json");
            rts_thermo::io::save_json(
                &ThermoReport {
                    config: cfg,
                    rows: &table,
                },
                &path,
            )?;
        }
    }
    Ok(table)
}
