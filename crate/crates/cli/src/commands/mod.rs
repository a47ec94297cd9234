//! The six batch commands. Each is a pure function of (config, input files,
//! seed); primary outputs are files under the chosen output directory and
//! repeated runs produce byte-identical bytes.

pub mod analyze;
pub mod limit_sweep;
pub mod ratio;
pub mod roundtrip;
pub mod simulate;
pub mod thermo;

use std::fs;
use std::path::{Path, PathBuf};

use crate::{CliError, CliResult};

/// Tabular output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

pub(crate) fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

pub(crate) fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Parses `START:STOP:COUNT` into an inclusive linear grid.
pub fn parse_linear_range(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "range `{spec}` must look like START:STOP:COUNT"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range start `{}`: {e}", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range stop `{}`: {e}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range count `{}`: {e}", parts[2])))?;
    if count == 0 {
        return Err(CliError::Validation("range count must be >= 1".to_string()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Parses `START:STOP:COUNT` into a log-spaced integer grid (deduplicated).
pub fn parse_log_integer_range(spec: &str) -> CliResult<Vec<u64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "range `{spec}` must look like START:STOP:COUNT"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range start `{}`: {e}", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range stop `{}`: {e}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| CliError::Validation(format!("bad range count `{}`: {e}", parts[2])))?;
    if start.is_nan() || start < 1.0 || stop.is_nan() || stop < start || count == 0 {
        return Err(CliError::Validation(format!(
            "need 1 <= START <= STOP and COUNT >= 1 in `{spec}`"
        )));
    }
    let mut values = Vec::with_capacity(count);
    if count == 1 {
        values.push(start.round() as u64);
    } else {
        let (ls, le) = (start.ln(), stop.ln());
        for i in 0..count {
            let v = (ls + (le - ls) * i as f64 / (count - 1) as f64).exp();
            values.push(v.round().max(1.0) as u64);
        }
    }
    values.dedup();
    Ok(values)
}

/// CSV cell for optional numbers: empty when absent.
pub(crate) fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_range_endpoints_and_count() {
        let v = parse_linear_range("0.1:10:100").unwrap();
        assert_eq!(v.len(), 100);
        assert!((v[0] - 0.1).abs() < 1e-15);
        assert!((v[99] - 10.0).abs() < 1e-12);
        assert_eq!(parse_linear_range("5:9:1").unwrap(), vec![5.0]);
        assert!(parse_linear_range("1:2").is_err());
        assert!(parse_linear_range("1:2:0").is_err());
    }

    #[test]
    fn log_range_hits_decades() {
        let v = parse_log_integer_range("1e2:1e6:5").unwrap();
        assert_eq!(v, vec![100, 1_000, 10_000, 100_000, 1_000_000]);
        assert_eq!(parse_log_integer_range("500:1e6:1").unwrap(), vec![500]);
    }
}
