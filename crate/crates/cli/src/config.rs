//! Run configuration: a single JSON file with flag overrides.
//!
//! Every field has a default, so a partial file (or none at all) works; the
//! defaults describe a 100-electron bath on 100×100 nm² at 4.2 K with the
//! dot level placed so the ratio exponent βX is close to one. They are a
//! representative scenario, not measured device data.

use std::path::Path;

use serde::{Deserialize, Serialize};

use rts_thermo::ensemble::{lattice_relaxation_energy, DotSpec, EnsembleParams, Occupancy, SystemSpec};
use rts_thermo::estimator::{DetectionConfig, EstimatorOptions};
use rts_thermo::fermi2d::{dos_2d, ReservoirSpec};
use rts_thermo::rts::{dwell_means_from_ratio, RateModel, TraceConfig};
use rts_thermo::PhysicalConstants;

use crate::{CliError, CliResult};

/// Bath section; `g` falls back to m_eff/(π²ħ²) from the constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReservoirSection {
    pub n2: u64,
    /// Bath area, nm².
    pub sigma2: f64,
    /// Density of states, meV⁻¹·nm⁻²; computed from the constants when
    /// omitted.
    pub g: Option<f64>,
}

impl Default for ReservoirSection {
    fn default() -> Self {
        Self {
            n2: 100,
            sigma2: 1.0e4,
            g: None,
        }
    }
}

/// Optional lattice-relaxation closure from the Huang-Rhys factor and the
/// mean phonon angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuangRhysSection {
    pub s_hr: f64,
    /// rad/s.
    pub omega: f64,
}

/// Dot section; `delta_e_l` may alternatively come from `huang_rhys`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DotSection {
    /// Ground level energy, meV.
    pub e_t: f64,
    /// Charging energy, meV.
    pub delta_e_c: f64,
    /// Lattice relaxation energy, meV; exclusive with `huang_rhys`.
    pub delta_e_l: Option<f64>,
    pub huang_rhys: Option<HuangRhysSection>,
    pub deg1: u32,
    pub deg2: u32,
    /// Island area, nm².
    pub sigma1: f64,
}

impl Default for DotSection {
    fn default() -> Self {
        Self {
            e_t: 37.34,
            delta_e_c: 2.0,
            delta_e_l: Some(1.2),
            huang_rhys: None,
            deg1: 2,
            deg2: 1,
            sigma1: 10.0,
        }
    }
}

/// Trace rendering section; the noise seed defaults to a value derived from
/// the top-level seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TraceSection {
    pub sample_rate: f64,
    pub current_1: f64,
    pub current_2: f64,
    pub noise_sigma: f64,
    pub seed: Option<u64>,
}

impl Default for TraceSection {
    fn default() -> Self {
        Self {
            sample_rate: 2.0e5,
            current_1: 2.0e-9,
            current_2: 1.0e-9,
            // |ΔI| / 6
            noise_sigma: 1.0e-9 / 6.0,
            seed: None,
        }
    }
}

/// Detection section; when omitted, thresholds sit 2σ inside each level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectionSection {
    pub threshold_low: Option<f64>,
    pub threshold_high: Option<f64>,
    pub min_dwell_samples: usize,
    /// Number of Fano counting windows the trace is split into.
    pub fano_windows: usize,
    /// Floor on |ln(r·deg2/deg1)| below which the estimate is declared
    /// divergent.
    pub divergence_floor: f64,
}

impl Default for DetectionSection {
    fn default() -> Self {
        Self {
            threshold_low: None,
            threshold_high: None,
            min_dwell_samples: 2,
            fano_windows: 50,
            divergence_floor: 1e-6,
        }
    }
}

/// The whole run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub reservoir: ReservoirSection,
    pub dot: DotSection,
    /// Temperature, K.
    pub temperature: f64,
    /// Attempt rate ν₀ closing the dwell timescale, Hz.
    pub attempt_rate: f64,
    /// Number of state switches to simulate.
    pub transitions: usize,
    pub trace: TraceSection,
    pub detection: DetectionSection,
    /// Seed of the dwell simulation (and, derived, of the noise stream).
    pub seed: u64,
    /// Use the exact Fermi-Dirac μ instead of N₂/(gΣ₂) in the ensemble
    /// weights; a sensitivity knob, off by default.
    pub mu_from_oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            reservoir: ReservoirSection::default(),
            dot: DotSection::default(),
            temperature: 4.2,
            attempt_rate: 1.0e3,
            transitions: 10_000,
            trace: TraceSection::default(),
            detection: DetectionSection::default(),
            seed: 42,
            mu_from_oracle: false,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let cfg: RunConfig = rts_thermo::io::load_json(path)?;
        Ok(cfg)
    }

    /// Resolved density of states, meV⁻¹·nm⁻².
    pub fn dos(&self) -> CliResult<f64> {
        match self.reservoir.g {
            Some(g) => Ok(g),
            None => Ok(dos_2d(&self.constants)?),
        }
    }

    /// Resolved lattice relaxation energy, meV.
    pub fn delta_e_l(&self) -> CliResult<f64> {
        match (self.dot.delta_e_l, self.dot.huang_rhys) {
            (Some(_), Some(_)) => Err(invalid(
                "dot.delta_e_l and dot.huang_rhys are exclusive; set one of them",
            )),
            (Some(v), None) => Ok(v),
            (None, Some(hr)) => {
                if hr.s_hr < 0.0 || hr.omega < 0.0 {
                    return Err(invalid(format!(
                        "dot.huang_rhys fields must be >= 0, got s_hr={}, omega={}",
                        hr.s_hr, hr.omega
                    )));
                }
                Ok(lattice_relaxation_energy(hr.s_hr, hr.omega, &self.constants))
            }
            (None, None) => Ok(0.0),
        }
    }

    pub fn reservoir_spec(&self) -> CliResult<ReservoirSpec> {
        let spec = ReservoirSpec {
            n2: self.reservoir.n2,
            sigma2: self.reservoir.sigma2,
            g: self.dos()?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dot_spec(&self) -> CliResult<DotSpec> {
        let spec = DotSpec {
            e_t: self.dot.e_t,
            delta_e_c: self.dot.delta_e_c,
            delta_e_l: self.delta_e_l()?,
            deg1: self.dot.deg1,
            deg2: self.dot.deg2,
            sigma1: self.dot.sigma1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn system(&self) -> CliResult<SystemSpec> {
        let sys = SystemSpec {
            constants: self.constants,
            reservoir: self.reservoir_spec()?,
            dot: self.dot_spec()?,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn params(&self) -> CliResult<EnsembleParams> {
        let mut params = self.system()?.at_temperature(self.temperature);
        params.mu_from_oracle = self.mu_from_oracle;
        params.validate()?;
        Ok(params)
    }

    /// Dwell means from the occupation ratio at the configured temperature.
    pub fn rate_model(&self) -> CliResult<RateModel> {
        let ratio = self.params()?.occupation_ratio()?;
        let Some(linear) = ratio.linear() else {
            return Err(CliError::Numerical(format!(
                "occupation ratio is not representable linearly (ln ratio = {}); \
                 dwell simulation would overflow",
                ratio.ln()
            )));
        };
        Ok(dwell_means_from_ratio(linear, self.attempt_rate)?)
    }

    /// Noise seed: explicit, or derived from the top-level seed.
    pub fn noise_seed(&self) -> u64 {
        self.trace
            .seed
            .unwrap_or(self.seed ^ 0x9e37_79b9_7f4a_7c15)
    }

    pub fn trace_config(&self) -> CliResult<TraceConfig> {
        let cfg = TraceConfig {
            sample_rate: self.trace.sample_rate,
            current_1: self.trace.current_1,
            current_2: self.trace.current_2,
            noise_sigma: self.trace.noise_sigma,
            seed: self.noise_seed(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Detection thresholds: explicit values win; otherwise they sit 2σ
    /// inside each current level.
    pub fn detection_config(&self) -> CliResult<DetectionConfig> {
        let lo_level = self.trace.current_1.min(self.trace.current_2);
        let hi_level = self.trace.current_1.max(self.trace.current_2);
        let auto_margin = 2.0 * self.trace.noise_sigma;
        let threshold_low = self.detection.threshold_low.unwrap_or(lo_level + auto_margin);
        let threshold_high = self
            .detection
            .threshold_high
            .unwrap_or(hi_level - auto_margin);
        if threshold_low >= threshold_high {
            return Err(invalid(format!(
                "detection thresholds collapse ({threshold_low} >= {threshold_high}); \
                 noise_sigma too large for automatic placement, set them explicitly"
            )));
        }
        let cfg = DetectionConfig {
            threshold_low,
            threshold_high,
            min_dwell_samples: self.detection.min_dwell_samples,
            high_state: if self.trace.current_1 > self.trace.current_2 {
                Occupancy::One
            } else {
                Occupancy::Two
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn estimator_options(&self) -> EstimatorOptions {
        EstimatorOptions {
            divergence_floor: self.detection.divergence_floor,
        }
    }

    /// Full validation with field-precise messages, run before any command.
    pub fn validate(&self) -> CliResult<()> {
        self.constants
            .validate()
            .map_err(|e| invalid(format!("constants: {e}")))?;
        self.reservoir_spec()
            .map_err(|e| invalid(format!("reservoir: {e}")))?;
        self.dot_spec().map_err(|e| invalid(format!("dot: {e}")))?;
        if self.temperature <= 0.0 || !self.temperature.is_finite() {
            return Err(invalid(format!(
                "temperature must be strictly positive, got {}",
                self.temperature
            )));
        }
        if self.attempt_rate <= 0.0 || !self.attempt_rate.is_finite() {
            return Err(invalid(format!(
                "attempt_rate must be strictly positive, got {}",
                self.attempt_rate
            )));
        }
        if self.transitions < 1 {
            return Err(invalid("transitions must be >= 1"));
        }
        self.trace_config()
            .map_err(|e| invalid(format!("trace: {e}")))?;
        self.detection_config()
            .map_err(|e| invalid(format!("detection: {e}")))?;
        if self.detection.divergence_floor <= 0.0 {
            return Err(invalid("detection.divergence_floor must be > 0"));
        }
        if self.detection.fano_windows < 10 {
            return Err(invalid("detection.fano_windows must be >= 10"));
        }
        Ok(())
    }
}
