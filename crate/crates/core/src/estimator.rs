//! Recovery of dwell-time statistics from noisy traces and inversion of the
//! dwell ratio into a generalized electron temperature.
//!
//! Detection uses a dual-threshold hysteresis state machine with short-dwell
//! merging. Dwell means are the exponential maximum-likelihood estimates
//! (sample means over complete dwells, the truncated first and last dwells
//! discarded). The temperature is the exact algebraic inverse of the
//! occupation-ratio relation,
//!
//! ```text
//! T = X / (k_B · ln(r · deg2/deg1)),   r = τ₁/τ₂,
//! ```
//!
//! with X the effective energy gap of the system, and its standard error
//! follows from first-order propagation of the exponential-MLE errors
//! τ̂ᵢ/√nᵢ through ln r.

use serde::{Deserialize, Serialize};

use crate::ensemble::{Occupancy, SystemSpec};
use crate::error::{Error, Result};
use crate::rts::{Dwell, EventList, SampledTrace};

/// Dual-threshold hysteresis detector settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    /// Switch to the low level only at or below this current, A.
    pub threshold_low: f64,
    /// Switch to the high level only at or above this current, A.
    pub threshold_high: f64,
    /// Detected dwells shorter than this many samples are merged into their
    /// neighbors.
    pub min_dwell_samples: usize,
    /// Which occupancy the high current level maps to. Either polarity
    /// occurs in practice.
    pub high_state: Occupancy,
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold_low >= self.threshold_high
            || !self.threshold_low.is_finite()
            || !self.threshold_high.is_finite()
        {
            return Err(Error::domain(format!(
                "detection thresholds must satisfy low < high, got {} and {}",
                self.threshold_low, self.threshold_high
            )));
        }
        if self.min_dwell_samples < 1 {
            return Err(Error::domain(
                "detection.min_dwell_samples must be >= 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Outcome of state detection.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    /// Recovered alternating dwells, durations quantized to dt. Empty when
    /// no sample ever crossed a threshold.
    pub events: EventList,
    /// Number of sub-minimum dwells merged into neighbors.
    pub merged_dwells: usize,
    /// Set when detection could not decide any state.
    pub diagnostic: Option<String>,
}

/// Dual-threshold hysteresis detection of the two-state signal.
///
/// The state switches high→low only at or below `threshold_low` and
/// low→high only at or above `threshold_high`; samples inside the band keep
/// the current state. Samples before the first decisive one join the first
/// decided dwell.
pub fn detect_states(trace: &SampledTrace, cfg: &DetectionConfig) -> Result<Detection> {
    cfg.validate()?;
    if trace.samples.is_empty() {
        return Err(Error::domain("trace has no samples".to_string()));
    }

    // run-length encoding of the hysteresis output
    let mut runs: Vec<(bool, usize)> = Vec::new();
    let mut state: Option<bool> = None;
    let mut pending = 0usize; // undecided prefix
    for &s in &trace.samples {
        let decide = if s >= cfg.threshold_high {
            Some(true)
        } else if s <= cfg.threshold_low {
            Some(false)
        } else {
            None
        };
        match (state, decide) {
            (None, None) => pending += 1,
            (None, Some(level)) => {
                state = Some(level);
                runs.push((level, pending + 1));
                pending = 0;
            }
            (Some(cur), Some(level)) if level != cur => {
                state = Some(level);
                runs.push((level, 1));
            }
            (Some(_), _) => runs.last_mut().expect("run exists").1 += 1,
        }
    }
    if runs.is_empty() {
        return Ok(Detection {
            events: EventList::empty(),
            merged_dwells: 0,
            diagnostic: Some(format!(
                "no sample crossed either threshold ({} / {}); thresholds lie outside the signal range",
                cfg.threshold_low, cfg.threshold_high
            )),
        });
    }

    // merge runs shorter than min_dwell_samples into their neighbors
    let mut merged = 0usize;
    let mut stack: Vec<(bool, usize)> = Vec::new();
    let mut carry = 0usize;
    let first_level = runs[0].0;
    for (level, count) in runs {
        if count < cfg.min_dwell_samples {
            merged += 1;
            match stack.last_mut() {
                Some(top) => top.1 += count,
                None => carry += count,
            }
            continue;
        }
        let count = count + std::mem::take(&mut carry);
        match stack.last_mut() {
            Some(top) if top.0 == level => top.1 += count,
            _ => stack.push((level, count)),
        }
    }
    if stack.is_empty() {
        // every run was shorter than the minimum: collapse to one dwell
        stack.push((first_level, carry));
    }

    let dwells: Vec<Dwell> = stack
        .into_iter()
        .map(|(level, count)| Dwell {
            state: if level {
                cfg.high_state
            } else {
                cfg.high_state.other()
            },
            duration: count as f64 * trace.dt,
        })
        .collect();
    Ok(Detection {
        events: EventList::from_dwells(dwells)?,
        merged_dwells: merged,
        diagnostic: None,
    })
}

/// Per-state dwell counts, means and variances over complete dwells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DwellTimeStats {
    /// Complete state-1 dwells retained.
    pub n1_events: usize,
    /// Complete state-2 dwells retained.
    pub n2_events: usize,
    /// Sample mean of state-1 dwells, s.
    pub tau1_hat: f64,
    /// Sample mean of state-2 dwells, s.
    pub tau2_hat: f64,
    /// Sample variance of state-1 dwells, s².
    pub tau1_var: f64,
    /// Sample variance of state-2 dwells, s².
    pub tau2_var: f64,
}

impl DwellTimeStats {
    /// Measured dwell ratio τ̂₁/τ̂₂.
    pub fn ratio(&self) -> f64 {
        self.tau1_hat / self.tau2_hat
    }
}

fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() < 2 {
        0.0
    } else {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    };
    (mean, var)
}

/// Sample means and variances of the complete dwells.
///
/// The first and last dwells are censored (the trace truncates them), so
/// they are discarded before averaging. Requires at least two complete
/// dwells per state.
pub fn dwell_statistics(events: &EventList) -> Result<DwellTimeStats> {
    if events.dwells.len() < 4 {
        let n1 = events.durations_in(Occupancy::One).count();
        let n2 = events.durations_in(Occupancy::Two).count();
        return Err(Error::InsufficientStatistics {
            n1,
            n2,
            context: "need at least four dwells so both states keep complete ones".to_string(),
        });
    }
    let complete = &events.dwells[1..events.dwells.len() - 1];
    let t1: Vec<f64> = complete
        .iter()
        .filter(|d| d.state == Occupancy::One)
        .map(|d| d.duration)
        .collect();
    let t2: Vec<f64> = complete
        .iter()
        .filter(|d| d.state == Occupancy::Two)
        .map(|d| d.duration)
        .collect();
    if t1.len() < 2 || t2.len() < 2 {
        return Err(Error::InsufficientStatistics {
            n1: t1.len(),
            n2: t2.len(),
            context: "need at least two complete dwells per state".to_string(),
        });
    }
    let (tau1_hat, tau1_var) = mean_and_var(&t1);
    let (tau2_hat, tau2_var) = mean_and_var(&t2);
    Ok(DwellTimeStats {
        n1_events: t1.len(),
        n2_events: t2.len(),
        tau1_hat,
        tau2_hat,
        tau1_var,
        tau2_var,
    })
}

/// Variance-to-mean ratio of transition counts over fixed windows.
///
/// Unity signals Poissonian switching; periodic switching drives it to
/// zero. Requires at least ten whole windows.
pub fn fano_factor(events: &EventList, window: f64) -> Result<f64> {
    if window <= 0.0 || !window.is_finite() {
        return Err(Error::domain(format!(
            "window must be strictly positive, got {window}"
        )));
    }
    let n_windows = (events.total_time / window).floor() as usize;
    if n_windows < 10 {
        return Err(Error::domain(format!(
            "need at least 10 whole windows, got {n_windows} \
             (total_time {} / window {window})",
            events.total_time
        )));
    }
    let mut counts = vec![0usize; n_windows];
    for t in events.transition_times() {
        let idx = (t / window) as usize;
        if idx < n_windows {
            counts[idx] += 1;
        }
    }
    let n = n_windows as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    if mean == 0.0 {
        return Err(Error::numerical(
            "no transitions inside the counting windows".to_string(),
        ));
    }
    let var = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / (n - 1.0);
    Ok(var / mean)
}

/// Fraction of time spent in each state; f1 + f2 = 1 exactly.
pub fn occupancy_fraction(events: &EventList) -> Result<(f64, f64)> {
    if events.is_empty() {
        return Err(Error::domain("empty event list".to_string()));
    }
    let f1 = events.time_in(Occupancy::One) / events.total_time;
    Ok((f1, 1.0 - f1))
}

/// Estimator knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorOptions {
    /// Minimum |ln(r·deg2/deg1)| accepted before the estimate is declared
    /// divergent; caps T̂ instead of amplifying noise without bound.
    pub divergence_floor: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            divergence_floor: 1e-6,
        }
    }
}

/// Recovered temperature with a propagated standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperatureEstimate {
    /// Estimated temperature, K; NaN when undefined.
    pub t_hat: f64,
    /// First-order standard error, K; NaN when undefined.
    pub sigma_t: f64,
    /// True only when t_hat > 0 and the logarithm is clear of the
    /// divergence floor.
    pub valid: bool,
    /// Why the estimate is invalid, when it is.
    pub reason: Option<String>,
}

impl TemperatureEstimate {
    fn invalid(t_hat: f64, sigma_t: f64, reason: String) -> Self {
        Self {
            t_hat,
            sigma_t,
            valid: false,
            reason: Some(reason),
        }
    }
}

/// Temperature from measured dwell statistics.
///
/// T̂ = X/(k_B·ln(r·deg2/deg1)) with r = τ̂₁/τ̂₂; the standard error comes
/// from σ(ln τ̂ᵢ) ≈ 1/√nᵢ, so σ_T = T̂·σ_L/|L| with σ_L = √(1/n₁ + 1/n₂).
pub fn estimate_temperature(
    stats: &DwellTimeStats,
    system: &SystemSpec,
    options: &EstimatorOptions,
) -> Result<TemperatureEstimate> {
    system.validate()?;
    if stats.n1_events == 0 || stats.n2_events == 0 || stats.tau1_hat <= 0.0 || stats.tau2_hat <= 0.0
    {
        return Err(Error::InsufficientStatistics {
            n1: stats.n1_events,
            n2: stats.n2_events,
            context: "temperature estimation needs positive dwell means for both states"
                .to_string(),
        });
    }
    let x = system.effective_energy_gap();
    let log_ratio = stats.ratio().ln() - system.degeneracy_ratio().ln();
    let sigma_log =
        (1.0 / stats.n1_events as f64 + 1.0 / stats.n2_events as f64).sqrt();

    if x == 0.0 {
        return Ok(TemperatureEstimate::invalid(
            f64::NAN,
            f64::NAN,
            "effective energy gap is zero; the ratio carries no temperature information"
                .to_string(),
        ));
    }
    if log_ratio.abs() < options.divergence_floor {
        return Ok(TemperatureEstimate::invalid(
            f64::NAN,
            f64::NAN,
            "ratio indistinguishable from degeneracy ratio".to_string(),
        ));
    }
    let t_hat = x / (system.constants.k_b * log_ratio);
    let sigma_t = t_hat.abs() * sigma_log / log_ratio.abs();
    if t_hat <= 0.0 {
        return Ok(TemperatureEstimate::invalid(
            t_hat,
            sigma_t,
            "ratio lies on the wrong side of the degeneracy asymptote for this energy gap; \
             implied temperature is negative"
                .to_string(),
        ));
    }
    Ok(TemperatureEstimate {
        t_hat,
        sigma_t,
        valid: true,
        reason: None,
    })
}

fn invert_with_gap(ratio: f64, x: f64, degeneracy_ratio: f64, k_b: f64) -> Result<f64> {
    if ratio <= 0.0 || !ratio.is_finite() {
        return Err(Error::domain(format!(
            "ratio must be strictly positive, got {ratio}"
        )));
    }
    if x == 0.0 {
        return Err(Error::Unidentifiable(
            "effective energy gap is zero".to_string(),
        ));
    }
    let log_ratio = ratio.ln() - degeneracy_ratio.ln();
    if log_ratio == 0.0 {
        return Err(Error::Unidentifiable(
            "ratio equals the degeneracy ratio; temperature diverges".to_string(),
        ));
    }
    let t = x / (k_b * log_ratio);
    if t <= 0.0 {
        return Err(Error::NegativeTemperature { t_implied: t });
    }
    Ok(t)
}

/// Noiseless analytic inverse of the occupation-ratio relation.
///
/// Satisfies `invert(occupation_ratio(T)) = T` for any valid parameters;
/// ratios on the wrong side of the degeneracy asymptote are rejected with
/// the implied negative temperature attached.
pub fn invert_ratio_for_temperature(ratio: f64, system: &SystemSpec) -> Result<f64> {
    system.validate()?;
    invert_with_gap(
        ratio,
        system.effective_energy_gap(),
        system.degeneracy_ratio(),
        system.constants.k_b,
    )
}

/// Same inversion with the infinite-bath gap (the 3/(2N₂) correction
/// dropped); inverts [`crate::ensemble::EnsembleParams::infinite_reservoir_ratio`].
pub fn invert_ratio_for_temperature_infinite(ratio: f64, system: &SystemSpec) -> Result<f64> {
    system.validate()?;
    invert_with_gap(
        ratio,
        system.effective_energy_gap_infinite(),
        system.degeneracy_ratio(),
        system.constants.k_b,
    )
}
