//! `simulate`: ratio at the configured temperature → dwell simulation →
//! noisy trace; writes trace CSV + JSON sidecar + event CSV.

use std::path::{Path, PathBuf};

use rts_thermo::io::{save_events_csv, save_json, save_trace_csv, DwellSummary, TraceSidecar, TRACE_FORMAT};
use rts_thermo::rts::{render_trace, simulate_events, EventList, SampledTrace, GENERATOR_ID};

use crate::config::RunConfig;
use crate::CliResult;

use super::{ensure_dir, out_file};

pub struct SimulateOutput {
    pub trace_csv: PathBuf,
    pub sidecar_json: PathBuf,
    pub events_csv: PathBuf,
    pub events: EventList,
    pub trace: SampledTrace,
}

/// The in-memory pipeline step shared with `roundtrip`.
pub fn generate(cfg: &RunConfig, event_seed: u64, noise_seed: u64) -> CliResult<(EventList, SampledTrace)> {
    let model = cfg.rate_model()?;
    let events = simulate_events(&model, cfg.transitions, event_seed)?;
    let mut trace_cfg = cfg.trace_config()?;
    trace_cfg.seed = noise_seed;
    let trace = render_trace(&events, &trace_cfg)?;
    Ok((events, trace))
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> CliResult<SimulateOutput> {
    cfg.validate()?;
    let (events, trace) = generate(cfg, cfg.seed, cfg.noise_seed())?;
    ensure_dir(out_dir)?;

    let trace_csv = out_file(out_dir, "trace.csv");
    save_trace_csv(&trace, &trace_csv)?;

    let events_csv = out_file(out_dir, "events.csv");
    save_events_csv(&events, &events_csv)?;

    let sidecar = TraceSidecar {
        format: TRACE_FORMAT.to_string(),
        generator: GENERATOR_ID.to_string(),
        event_seed: cfg.seed,
        trace: {
            let mut t = cfg.trace_config()?;
            t.seed = cfg.noise_seed();
            t
        },
        n_samples: trace.samples.len(),
        sub_dt_dwells: trace.sub_dt_dwells,
        truth: Some(DwellSummary::from_events(&events)),
    };
    let sidecar_json = out_file(out_dir, "trace.json");
    save_json(&sidecar, &sidecar_json)?;

    Ok(SimulateOutput {
        trace_csv,
        sidecar_json,
        events_csv,
        events,
        trace,
    })
}
