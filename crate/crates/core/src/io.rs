//! File formats: trace CSV with JSON sidecar, event-list CSV, and the
//! analysis results JSON.
//!
//! Trace CSV schema: header `time_s,current_A`, one sample per row, uniform
//! spacing. Event CSV schema: header `state,duration_s` with state 1 or 2.
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a file back reproduces the exact bit pattern.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensemble::Occupancy;
use crate::error::{Error, Result};
use crate::rts::{Dwell, EventList, SampledTrace, TraceConfig};

/// Schema tag written into trace sidecars.
pub const TRACE_FORMAT: &str = "rts-thermo/trace-v1";

/// Ground-truth dwell summary carried in the sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwellSummary {
    pub initial_state: u8,
    pub n_dwells: usize,
    pub n_transitions: usize,
    pub n1_dwells: usize,
    pub n2_dwells: usize,
    /// Mean of the state-1 dwell durations, s.
    pub tau1_mean: f64,
    /// Mean of the state-2 dwell durations, s.
    pub tau2_mean: f64,
    /// Total time spent in state 1, s.
    pub time_state1: f64,
    pub total_time: f64,
}

impl DwellSummary {
    pub fn from_events(events: &EventList) -> Self {
        let t1: Vec<f64> = events.durations_in(Occupancy::One).collect();
        let t2: Vec<f64> = events.durations_in(Occupancy::Two).collect();
        let mean = |xs: &[f64]| {
            if xs.is_empty() {
                0.0
            } else {
                xs.iter().sum::<f64>() / xs.len() as f64
            }
        };
        Self {
            initial_state: events.initial_state.count(),
            n_dwells: events.dwells.len(),
            n_transitions: events.transition_count(),
            n1_dwells: t1.len(),
            n2_dwells: t2.len(),
            tau1_mean: mean(&t1),
            tau2_mean: mean(&t2),
            time_state1: events.time_in(Occupancy::One),
            total_time: events.total_time,
        }
    }
}

/// Metadata written next to every trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSidecar {
    /// Schema tag, [`TRACE_FORMAT`].
    pub format: String,
    /// Pseudo-random scheme identifier, [`crate::rts::GENERATOR_ID`].
    pub generator: String,
    /// Seed of the dwell simulation.
    pub event_seed: u64,
    /// Rendering configuration, including the noise seed.
    pub trace: TraceConfig,
    pub n_samples: usize,
    /// Dwells shorter than one sample interval.
    pub sub_dt_dwells: usize,
    /// Ground truth, when the trace came from the simulator.
    pub truth: Option<DwellSummary>,
}

/// Analysis output schema: dwell statistics, diagnostics and the temperature
/// estimate, with the inputs echoed for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResults {
    pub tau1_hat: f64,
    pub tau2_hat: f64,
    pub n1: usize,
    pub n2: usize,
    /// Variance-to-mean ratio of windowed transition counts; absent when
    /// too few windows fit the trace.
    pub fano: Option<f64>,
    pub f1: f64,
    pub f2: f64,
    /// Estimated temperature, K; absent when the estimate is undefined.
    pub t_hat: Option<f64>,
    pub sigma_t: Option<f64>,
    pub valid: bool,
    pub reason: Option<String>,
    pub inputs_echo: Value,
}

fn non_finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl AnalysisResults {
    /// Maps NaN estimates to JSON nulls.
    pub fn with_estimate(mut self, t_hat: f64, sigma_t: f64) -> Self {
        self.t_hat = non_finite(t_hat);
        self.sigma_t = non_finite(sigma_t);
        self
    }
}

/// Writes `time_s,current_A` rows for every sample.
pub fn write_trace_csv<W: Write>(trace: &SampledTrace, mut w: W) -> Result<()> {
    writeln!(w, "time_s,current_A")?;
    for (k, s) in trace.samples.iter().enumerate() {
        let t = trace.t0 + k as f64 * trace.dt;
        writeln!(w, "{t},{s}")?;
    }
    Ok(())
}

pub fn save_trace_csv(trace: &SampledTrace, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trace_csv(trace, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Reads a trace CSV back into a [`SampledTrace`] (no ground truth).
///
/// Schema violations are reported with the offending line number. The
/// sample spacing must be uniform to within 1e-6 relative.
pub fn read_trace_csv(path: &Path) -> Result<SampledTrace> {
    let reader = BufReader::new(File::open(path)?);
    let mut times: Vec<f64> = Vec::new();
    let mut samples: Vec<f64> = Vec::new();
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file; expected header `time_s,current_A`"))??;
    if header.trim() != "time_s,current_A" {
        return Err(parse_err(
            path,
            1,
            format!("expected header `time_s,current_A`, found `{header}`"),
        ));
    }
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let t_str = fields.next().unwrap_or("");
        let c_str = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "expected two comma-separated fields"))?;
        if fields.next().is_some() {
            return Err(parse_err(path, line_no, "more than two fields"));
        }
        let t: f64 = t_str
            .trim()
            .parse()
            .map_err(|e| parse_err(path, line_no, format!("bad time `{t_str}`: {e}")))?;
        let c: f64 = c_str
            .trim()
            .parse()
            .map_err(|e| parse_err(path, line_no, format!("bad current `{c_str}`: {e}")))?;
        times.push(t);
        samples.push(c);
    }
    if samples.len() < 2 {
        return Err(parse_err(
            path,
            times.len() + 1,
            format!("need at least 2 samples, found {}", samples.len()),
        ));
    }
    let t0 = times[0];
    let dt = (times[times.len() - 1] - t0) / (times.len() - 1) as f64;
    if dt.is_nan() || dt <= 0.0 {
        return Err(parse_err(path, 2, "sample times must strictly increase"));
    }
    for (k, &t) in times.iter().enumerate() {
        let expected = t0 + k as f64 * dt;
        if (t - expected).abs() > 1e-6 * dt.max(expected.abs()) {
            return Err(parse_err(
                path,
                k + 2,
                format!("non-uniform sampling: time {t} but uniform grid expects {expected}"),
            ));
        }
    }
    Ok(SampledTrace {
        t0,
        dt,
        samples,
        truth: None,
        sub_dt_dwells: 0,
    })
}

/// Writes `state,duration_s` rows for every dwell.
pub fn write_events_csv<W: Write>(events: &EventList, mut w: W) -> Result<()> {
    writeln!(w, "state,duration_s")?;
    for d in &events.dwells {
        writeln!(w, "{},{}", d.state.count(), d.duration)?;
    }
    Ok(())
}

pub fn save_events_csv(events: &EventList, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_events_csv(events, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_events_csv(path: &Path) -> Result<EventList> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file; expected header `state,duration_s`"))??;
    if header.trim() != "state,duration_s" {
        return Err(parse_err(
            path,
            1,
            format!("expected header `state,duration_s`, found `{header}`"),
        ));
    }
    let mut dwells = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let s_str = fields.next().unwrap_or("");
        let d_str = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "expected two comma-separated fields"))?;
        let s: u8 = s_str
            .trim()
            .parse()
            .map_err(|e| parse_err(path, line_no, format!("bad state `{s_str}`: {e}")))?;
        let state = Occupancy::try_from(s)
            .map_err(|e| parse_err(path, line_no, e.to_string()))?;
        let duration: f64 = d_str
            .trim()
            .parse()
            .map_err(|e| parse_err(path, line_no, format!("bad duration `{d_str}`: {e}")))?;
        dwells.push(Dwell { state, duration });
    }
    EventList::from_dwells(dwells)
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let reader = BufReader::new(File::open(path)?);
    serde_json::from_reader(reader).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rts::{render_trace, simulate_events, RateModel};

    fn sample_trace() -> SampledTrace {
        let m = RateModel {
            tau1_mean: 2.0e-3,
            tau2_mean: 1.0e-3,
        };
        let ev = simulate_events(&m, 50, 9).unwrap();
        render_trace(
            &ev,
            &TraceConfig {
                sample_rate: 50_000.0,
                current_1: 2.0e-9,
                current_2: 1.0e-9,
                noise_sigma: 1.5e-10,
                seed: 10,
            },
        )
        .unwrap()
    }

    #[test]
    fn trace_csv_round_trips_bit_exactly() {
        let dir = std::env::temp_dir().join("rts_thermo_io_trace");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("trace.csv");
        let trace = sample_trace();
        save_trace_csv(&trace, &path).unwrap();
        let back = read_trace_csv(&path).unwrap();
        assert_eq!(back.samples.len(), trace.samples.len());
        for (a, b) in trace.samples.iter().zip(&back.samples) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!((back.dt - trace.dt).abs() < 1e-18);
    }

    #[test]
    fn trace_csv_reports_line_precise_errors() {
        let dir = std::env::temp_dir().join("rts_thermo_io_bad");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "time_s,current_A\n0,1e-9\n1e-5,not_a_number\n").unwrap();
        match read_trace_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        std::fs::write(&path, "wrong,header\n").unwrap();
        match read_trace_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn events_csv_round_trips() {
        let dir = std::env::temp_dir().join("rts_thermo_io_events");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("events.csv");
        let m = RateModel {
            tau1_mean: 3.0e-3,
            tau2_mean: 1.0e-3,
        };
        let ev = simulate_events(&m, 25, 4).unwrap();
        save_events_csv(&ev, &path).unwrap();
        let back = read_events_csv(&path).unwrap();
        assert_eq!(back, ev);
    }

    #[test]
    fn dwell_summary_counts_states() {
        let m = RateModel {
            tau1_mean: 2.0e-3,
            tau2_mean: 1.0e-3,
        };
        let ev = simulate_events(&m, 100, 2).unwrap();
        let s = DwellSummary::from_events(&ev);
        assert_eq!(s.n_dwells, 101);
        assert_eq!(s.n_transitions, 100);
        assert_eq!(s.n1_dwells + s.n2_dwells, s.n_dwells);
        assert!((s.time_state1 - ev.time_in(Occupancy::One)).abs() < 1e-15);
    }
}
