//! Grand canonical statistics of the (1↔2)-electron dot coupled to a bath
//! of N₂ electrons, keeping the 1/N₂ corrections of the finite bath.
//!
//! The dot exchanges one electron with the bath, so its occupancy is either
//! one or two. Each occupancy L carries the statistical weight
//!
//! ```text
//! w(L) = z^{L(1 + L/2N₂)} · deg(L) · e^{−β E(L)},    z = e^{βμ(N₂,Σ₂)}
//! ```
//!
//! up to the occupancy-independent factor e^{−c_A Σ₁ / 2k_B}, which cancels
//! in every probability and is surfaced only through
//! [`EnsembleParams::state_equation_residual`]. All exponentials are handled
//! in log space; quantities that can overflow are returned as [`LogValue`].

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fermi2d::{self, oracle, ReservoirSpec};
use crate::numeric::{log_sum_exp, softplus, LogValue};

/// Dot occupancy: one or two electrons. A third electron cannot be captured,
/// so the type admits no other value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupancy {
    One,
    Two,
}

impl Occupancy {
    /// The electron count, 1 or 2.
    pub fn count(self) -> u8 {
        match self {
            Occupancy::One => 1,
            Occupancy::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Occupancy::One => Occupancy::Two,
            Occupancy::Two => Occupancy::One,
        }
    }
}

impl TryFrom<u8> for Occupancy {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Occupancy::One),
            2 => Ok(Occupancy::Two),
            other => Err(Error::domain(format!(
                "occupancy must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Occupancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.count())
    }
}

/// The (1↔2) island: level structure, degeneracies and area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotSpec {
    /// Ground level energy E_T, meV.
    pub e_t: f64,
    /// Coulomb charging energy of the second electron, meV, ≥ 0.
    pub delta_e_c: f64,
    /// Lattice relaxation energy gained on capture, meV.
    pub delta_e_l: f64,
    /// Degeneracy of the single-electron state (2 for a spin-degenerate
    /// ground level).
    pub deg1: u32,
    /// Degeneracy of the two-electron state (1 for a singlet).
    pub deg2: u32,
    /// Island area Σ₁, nm², ≥ 0.
    pub sigma1: f64,
}

impl DotSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.e_t.is_finite() || !self.delta_e_l.is_finite() {
            return Err(Error::domain("dot energies must be finite".to_string()));
        }
        if self.delta_e_c < 0.0 || !self.delta_e_c.is_finite() {
            return Err(Error::domain(format!(
                "dot.delta_e_c must be >= 0, got {}",
                self.delta_e_c
            )));
        }
        if self.deg1 < 1 || self.deg2 < 1 {
            return Err(Error::domain(format!(
                "dot degeneracies must be >= 1, got deg1={}, deg2={}",
                self.deg1, self.deg2
            )));
        }
        if self.sigma1 < 0.0 || !self.sigma1.is_finite() {
            return Err(Error::domain(format!(
                "dot.sigma1 must be >= 0, got {}",
                self.sigma1
            )));
        }
        Ok(())
    }

    pub fn degeneracy(&self, occupancy: Occupancy) -> u32 {
        match occupancy {
            Occupancy::One => self.deg1,
            Occupancy::Two => self.deg2,
        }
    }
}

/// Lattice relaxation energy S_HR·ħω in meV, from the Huang-Rhys factor and
/// the average phonon angular frequency (rad/s).
pub fn lattice_relaxation_energy(s_hr: f64, omega: f64, constants: &PhysicalConstants) -> f64 {
    s_hr * constants.hbar * omega
}

/// Total dot energy: E(1) = E_T, E(2) = 2·E_T + ΔE_C + ΔE_L.
pub fn dot_energy(dot: &DotSpec, occupancy: Occupancy) -> f64 {
    match occupancy {
        Occupancy::One => dot.e_t,
        Occupancy::Two => 2.0 * dot.e_t + dot.delta_e_c + dot.delta_e_l,
    }
}

/// Fugacity exponent N₁(1 + N₁/2N₂) of the finite bath.
///
/// Exactly 1 + 1/(2N₂) for single occupancy and 2(1 + 1/N₂) for double
/// occupancy; the difference of the two is −(1 + 3/(2N₂)).
pub fn fugacity_exponent(occupancy: Occupancy, n2: u64) -> f64 {
    let n1 = occupancy.count() as f64;
    let n2 = n2 as f64;
    n1 * (2.0 * n2 + n1) / (2.0 * n2)
}

/// Helmholtz-potential change of the bath when the dot holds `occupancy`
/// electrons, evaluated without approximation:
///
/// ```text
/// ΔΨ = Ψ(N₁+N₂, Σ₁+Σ₂) − Ψ(N₂, Σ₂)
/// ```
pub fn delta_helmholtz_exact(
    occupancy: Occupancy,
    reservoir: &ReservoirSpec,
    sigma1: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    reservoir.validate()?;
    if sigma1 < 0.0 || !sigma1.is_finite() {
        return Err(Error::domain(format!("sigma1 must be >= 0, got {sigma1}")));
    }
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::domain(format!("temperature must be > 0, got {t}")));
    }
    let n1 = occupancy.count() as f64;
    let n2 = reservoir.n2 as f64;
    let g = reservoir.g;
    let combined = fermi2d::helmholtz(n1 + n2, reservoir.sigma2 + sigma1, g, t, constants)?;
    let bath_only = fermi2d::helmholtz(n2, reservoir.sigma2, g, t, constants)?;
    Ok(combined - bath_only)
}

/// Small-N₁/N₂ form of the same variation:
/// ΔΨ ≈ N₁·μ(N₂,Σ₂)·(1 + N₁/2N₂) − ½·c_A·Σ₁·T.
pub fn delta_helmholtz_approx(
    occupancy: Occupancy,
    reservoir: &ReservoirSpec,
    sigma1: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    reservoir.validate()?;
    if sigma1 < 0.0 || !sigma1.is_finite() {
        return Err(Error::domain(format!("sigma1 must be >= 0, got {sigma1}")));
    }
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::domain(format!("temperature must be > 0, got {t}")));
    }
    let mu = reservoir.chemical_potential();
    let c_a = fermi2d::heat_capacity_per_area(reservoir.g, t, constants)?;
    Ok(fugacity_exponent(occupancy, reservoir.n2) * mu - 0.5 * c_a * sigma1 * t)
}

/// Everything except the temperature: bath, dot and constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub constants: PhysicalConstants,
    pub reservoir: ReservoirSpec,
    pub dot: DotSpec,
}

impl SystemSpec {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.reservoir.validate()?;
        self.dot.validate()
    }

    pub fn at_temperature(&self, temperature: f64) -> EnsembleParams {
        EnsembleParams {
            reservoir: self.reservoir,
            dot: self.dot,
            temperature,
            constants: self.constants,
            mu_from_oracle: false,
        }
    }

    /// Effective energy gap governing the occupation ratio:
    /// X = E_T + ΔE_L + ΔE_C − μ(N₂,Σ₂)·(1 + 3/(2N₂)), in meV.
    ///
    /// Temperature-independent; uses μ = N₂/(g·Σ₂).
    pub fn effective_energy_gap(&self) -> f64 {
        let mu = self.reservoir.chemical_potential();
        let n2 = self.reservoir.n2 as f64;
        self.dot.e_t + self.dot.delta_e_l + self.dot.delta_e_c - mu * (1.0 + 1.5 / n2)
    }

    /// Infinite-bath limit of the gap: X∞ = E_T + ΔE_L + ΔE_C − μ.
    pub fn effective_energy_gap_infinite(&self) -> f64 {
        let mu = self.reservoir.chemical_potential();
        self.dot.e_t + self.dot.delta_e_l + self.dot.delta_e_c - mu
    }

    /// Degeneracy ratio deg1/deg2, the infinite-temperature occupation ratio.
    pub fn degeneracy_ratio(&self) -> f64 {
        self.dot.deg1 as f64 / self.dot.deg2 as f64
    }
}

/// Full input to the ensemble formulas: bath + dot + temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    pub reservoir: ReservoirSpec,
    pub dot: DotSpec,
    /// Temperature in K, strictly positive.
    pub temperature: f64,
    pub constants: PhysicalConstants,
    /// Solve the exact Fermi-Dirac constraint for μ instead of using
    /// μ = N₂/(g·Σ₂). Affects the weights, probabilities and ratio; meant
    /// for sensitivity studies.
    #[serde(default)]
    pub mu_from_oracle: bool,
}

/// Occupation probabilities of the two dot states.
///
/// Linear values may underflow for extreme exponents; the log fields stay
/// finite whenever |βX| is finite, which is the representation contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupancyDistribution {
    /// Probability of single occupancy.
    pub p1: f64,
    /// Probability of double occupancy.
    pub p2: f64,
    /// ln p1, always finite.
    pub ln_p1: f64,
    /// ln p2, always finite.
    pub ln_p2: f64,
}

impl OccupancyDistribution {
    pub fn probability(&self, occupancy: Occupancy) -> f64 {
        match occupancy {
            Occupancy::One => self.p1,
            Occupancy::Two => self.p2,
        }
    }

    /// p1/p2 in log representation.
    pub fn ratio(&self) -> LogValue {
        LogValue::from_ln(self.ln_p1 - self.ln_p2)
    }
}

/// Outcome of inverting the state equation for the island area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConsistentArea {
    /// The unique nonnegative area zeroing the residual.
    Area(f64),
    /// ln Z_QG < 0: no nonnegative area satisfies the state equation.
    NoNonnegativeArea { ln_z_qg: f64 },
}

impl EnsembleParams {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.reservoir.validate()?;
        self.dot.validate()?;
        if self.temperature <= 0.0 || !self.temperature.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be strictly positive, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn system(&self) -> SystemSpec {
        SystemSpec {
            constants: self.constants,
            reservoir: self.reservoir,
            dot: self.dot,
        }
    }

    /// Inverse thermal energy β = 1/(k_B·T), meV⁻¹.
    pub fn beta(&self) -> f64 {
        1.0 / self.constants.thermal_energy(self.temperature)
    }

    /// Bath chemical potential used in the fugacity, meV.
    pub fn chemical_potential(&self) -> Result<f64> {
        if self.mu_from_oracle {
            let settings = oracle::OracleSettings::default();
            let point = oracle::fd_oracle(
                self.reservoir.n2 as f64,
                self.reservoir.sigma2,
                self.reservoir.g,
                self.temperature,
                &self.constants,
                &settings,
            )?;
            Ok(point.mu)
        } else {
            Ok(self.reservoir.chemical_potential())
        }
    }

    /// ln z = β·μ(N₂,Σ₂).
    pub fn log_fugacity(&self) -> Result<f64> {
        Ok(self.beta() * self.chemical_potential()?)
    }

    /// ln of the statistical weight of one occupancy:
    /// x·ln z + ln deg − β·E, with x the fugacity exponent.
    pub fn log_weight(&self, occupancy: Occupancy) -> Result<f64> {
        self.validate()?;
        let x = fugacity_exponent(occupancy, self.reservoir.n2);
        let deg = self.dot.degeneracy(occupancy) as f64;
        Ok(x * self.log_fugacity()? + deg.ln() - self.beta() * dot_energy(&self.dot, occupancy))
    }

    /// Statistical weight w(L), as a log-space value.
    pub fn weight(&self, occupancy: Occupancy) -> Result<LogValue> {
        Ok(LogValue::from_ln(self.log_weight(occupancy)?))
    }

    /// Partition function Z_QG = w(1) + w(2), summed in log space.
    pub fn partition_qg(&self) -> Result<LogValue> {
        let lw1 = self.log_weight(Occupancy::One)?;
        let lw2 = self.log_weight(Occupancy::Two)?;
        Ok(LogValue::from_ln(log_sum_exp(lw1, lw2)))
    }

    /// Occupation probabilities p(L) = w(L)/Z_QG.
    pub fn occupation_probability(&self) -> Result<OccupancyDistribution> {
        let d = self.log_weight(Occupancy::One)? - self.log_weight(Occupancy::Two)?;
        let ln_p1 = -softplus(-d);
        let ln_p2 = -softplus(d);
        Ok(OccupancyDistribution {
            p1: ln_p1.exp(),
            p2: ln_p2.exp(),
            ln_p1,
            ln_p2,
        })
    }

    /// Closed-form occupation ratio p(1)/p(2) = (deg1/deg2)·e^{βX}.
    pub fn occupation_ratio(&self) -> Result<LogValue> {
        self.validate()?;
        let mu = self.chemical_potential()?;
        let n2 = self.reservoir.n2 as f64;
        let x = self.dot.e_t + self.dot.delta_e_l + self.dot.delta_e_c - mu * (1.0 + 1.5 / n2);
        Ok(LogValue::from_ln(
            self.system().degeneracy_ratio().ln() + self.beta() * x,
        ))
    }

    /// Effective energy gap X entering the ratio exponent, meV.
    pub fn effective_energy_gap(&self) -> f64 {
        self.system().effective_energy_gap()
    }

    /// N₂ → ∞ limit of the ratio: (deg1/deg2)·e^{β(E_T+ΔE_L+ΔE_C−μ)}.
    pub fn infinite_reservoir_ratio(&self) -> Result<LogValue> {
        self.validate()?;
        let x_inf = self.system().effective_energy_gap_infinite();
        Ok(LogValue::from_ln(
            self.system().degeneracy_ratio().ln() + self.beta() * x_inf,
        ))
    }

    /// Residual of the state equation, ln Z_QG − c_A·Σ₁/(2k_B).
    ///
    /// Zero exactly when the normalization condition of the ensemble holds
    /// for the configured island area.
    pub fn state_equation_residual(&self) -> Result<f64> {
        let ln_z = self.partition_qg()?.ln();
        Ok(ln_z - self.area_term(self.dot.sigma1)?)
    }

    /// c_A·Σ₁/(2k_B) = (π²/6)·g·Σ₁·k_B·T, dimensionless.
    fn area_term(&self, sigma1: f64) -> Result<f64> {
        let c_a = fermi2d::heat_capacity_per_area(
            self.reservoir.g,
            self.temperature,
            &self.constants,
        )?;
        Ok(c_a * sigma1 / (2.0 * self.constants.k_b))
    }

    /// The island area Σ₁* = 2·k_B·ln Z_QG / c_A that zeroes the residual.
    ///
    /// Z_QG does not depend on Σ₁, so the residual is linear in the area and
    /// the solution is unique; a negative ln Z_QG is reported as a
    /// diagnostic, not an error.
    pub fn consistent_island_area(&self) -> Result<ConsistentArea> {
        let ln_z = self.partition_qg()?.ln();
        if ln_z < 0.0 {
            return Ok(ConsistentArea::NoNonnegativeArea { ln_z_qg: ln_z });
        }
        let c_a = fermi2d::heat_capacity_per_area(
            self.reservoir.g,
            self.temperature,
            &self.constants,
        )?;
        Ok(ConsistentArea::Area(
            2.0 * self.constants.k_b * ln_z / c_a,
        ))
    }
}
