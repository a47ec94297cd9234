//! Low-temperature thermodynamics of a two-dimensional Fermi electron system.
//!
//! The closed-form relations used everywhere else in the crate are the
//! second-order low-temperature expansion for a constant density of states g:
//!
//! ```text
//! μ   = M / (g A)
//! U   = M²/(2 g A) + (π²/6) g A (k_B T)²
//! Ψ   = M²/(2 g A) − (π²/6) g A (k_B T)²
//! S   = (π²/3) g A k_B² T
//! c_A = (π²/3) g k_B² T
//! P   = M²/(2 g A²) + (π²/6) g (k_B T)²
//! ```
//!
//! [`sommerfeld`] evaluates the general second-order expansion for an
//! arbitrary density-of-states profile, and [`oracle`] provides the exact
//! (non-expanded) Fermi-Dirac integrals by adaptive quadrature with a
//! bracketed chemical-potential solve, used to validate the expansion.

pub mod oracle;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// The small 2D electron bath: particle count N₂, area Σ₂ (nm²), and
/// density of states per energy per area g (meV⁻¹·nm⁻²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirSpec {
    /// Number of electrons in the bath, ≥ 1.
    pub n2: u64,
    /// Bath area in nm².
    pub sigma2: f64,
    /// Density of states in meV⁻¹·nm⁻², constant in energy.
    pub g: f64,
}

impl ReservoirSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n2 < 1 {
            return Err(Error::domain(format!(
                "reservoir.n2 must be >= 1, got {}",
                self.n2
            )));
        }
        if self.sigma2 <= 0.0 || !self.sigma2.is_finite() {
            return Err(Error::domain(format!(
                "reservoir.sigma2 must be strictly positive, got {}",
                self.sigma2
            )));
        }
        if self.g <= 0.0 || !self.g.is_finite() {
            return Err(Error::domain(format!(
                "reservoir.g must be strictly positive, got {}",
                self.g
            )));
        }
        Ok(())
    }

    /// Chemical potential μ(N₂, Σ₂) = N₂/(g·Σ₂) in meV.
    pub fn chemical_potential(&self) -> f64 {
        self.n2 as f64 / (self.g * self.sigma2)
    }
}

/// One evaluated thermodynamic state of the bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint {
    /// Chemical potential, meV.
    pub mu: f64,
    /// Internal energy (extensive), meV.
    pub u: f64,
    /// Helmholtz potential (extensive), meV.
    pub psi: f64,
    /// Entropy, meV/K.
    pub s: f64,
    /// Heat capacity per area, meV·K⁻¹·nm⁻².
    pub c_a: f64,
    /// Pressure (energy per area), meV·nm⁻².
    pub p: f64,
}

fn check_particles(m: f64) -> Result<()> {
    if m < 0.0 || !m.is_finite() {
        return Err(Error::domain(format!(
            "particle count must be >= 0 and finite, got {m}"
        )));
    }
    Ok(())
}

fn check_area(area: f64) -> Result<()> {
    if area <= 0.0 || !area.is_finite() {
        return Err(Error::domain(format!(
            "area must be strictly positive, got {area}"
        )));
    }
    Ok(())
}

fn check_dos(g: f64) -> Result<()> {
    if g <= 0.0 || !g.is_finite() {
        return Err(Error::domain(format!(
            "density of states must be strictly positive, got {g}"
        )));
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::domain(format!(
            "temperature must be >= 0 and finite, got {t}"
        )));
    }
    Ok(())
}

/// Density of states of the 2D system, g = m_eff/(π²ħ²), in meV⁻¹·nm⁻².
///
/// Constant in energy (d = 2). The conventional spin-degenerate value
/// m_eff/(πħ²) differs by a factor π; since g enters everywhere only as the
/// explicit [`ReservoirSpec::g`] field, either convention can be configured
/// directly.
pub fn dos_2d(constants: &PhysicalConstants) -> Result<f64> {
    constants.validate()?;
    Ok(constants.m_eff / (PI * PI * constants.hbar * constants.hbar))
}

/// μ = M/(g·A), exactly linear in M.
pub fn chemical_potential(m: f64, area: f64, g: f64) -> Result<f64> {
    check_particles(m)?;
    check_area(area)?;
    check_dos(g)?;
    Ok(m / (g * area))
}

/// U = M²/(2gA) + (π²/6)·g·A·(k_B T)², extensive, in meV.
pub fn internal_energy(
    m: f64,
    area: f64,
    g: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_particles(m)?;
    check_area(area)?;
    check_dos(g)?;
    check_temperature(t)?;
    let kt = constants.thermal_energy(t);
    Ok(m * m / (2.0 * g * area) + PI * PI / 6.0 * g * area * kt * kt)
}

/// Ψ = M²/(2gA) − (π²/6)·g·A·(k_B T)², extensive, in meV.
pub fn helmholtz(m: f64, area: f64, g: f64, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_particles(m)?;
    check_area(area)?;
    check_dos(g)?;
    check_temperature(t)?;
    let kt = constants.thermal_energy(t);
    Ok(m * m / (2.0 * g * area) - PI * PI / 6.0 * g * area * kt * kt)
}

/// S = −∂Ψ/∂T = (π²/3)·g·A·k_B²·T, in meV/K.
pub fn entropy(m: f64, area: f64, g: f64, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_particles(m)?;
    check_area(area)?;
    check_dos(g)?;
    check_temperature(t)?;
    Ok(PI * PI / 3.0 * g * area * constants.k_b * constants.k_b * t)
}

/// c_A = (π²/3)·g·k_B²·T, linear in T, in meV·K⁻¹·nm⁻².
pub fn heat_capacity_per_area(g: f64, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_dos(g)?;
    check_temperature(t)?;
    Ok(PI * PI / 3.0 * g * constants.k_b * constants.k_b * t)
}

/// P = −∂Ψ/∂A = M²/(2gA²) + (π²/6)·g·(k_B T)², in meV·nm⁻².
pub fn pressure(m: f64, area: f64, g: f64, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_particles(m)?;
    check_area(area)?;
    check_dos(g)?;
    check_temperature(t)?;
    let kt = constants.thermal_energy(t);
    Ok(m * m / (2.0 * g * area * area) + PI * PI / 6.0 * g * kt * kt)
}

/// All six thermodynamic quantities at one (M, A, g, T) point.
pub fn thermo_point(
    m: f64,
    area: f64,
    g: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<ThermoPoint> {
    Ok(ThermoPoint {
        mu: chemical_potential(m, area, g)?,
        u: internal_energy(m, area, g, t, constants)?,
        psi: helmholtz(m, area, g, t, constants)?,
        s: entropy(m, area, g, t, constants)?,
        c_a: heat_capacity_per_area(g, t, constants)?,
        p: pressure(m, area, g, t, constants)?,
    })
}

/// A density-of-states profile with closed-form band-bottom integrals.
///
/// Energies are measured from the band bottom at E = 0, the lower limit of
/// every integral.
pub trait DensityOfStates {
    /// g(E).
    fn value(&self, e: f64) -> f64;
    /// g′(E).
    fn slope(&self, e: f64) -> f64;
    /// ∫₀^E g(E′) dE′.
    fn count_integral(&self, e: f64) -> f64;
    /// ∫₀^E E′·g(E′) dE′.
    fn energy_integral(&self, e: f64) -> f64;
}

/// Polynomial density of states g(E) = Σ cᵢ·Eⁱ.
///
/// Covers the constant 2D case as degree zero; higher degrees are used to
/// probe the expansion against the exact Fermi-Dirac integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyDos {
    coeffs: Vec<f64>,
}

impl PolyDos {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(g: f64) -> Self {
        Self { coeffs: vec![g] }
    }

    /// Linear profile with value `g_at` and slope `slope` at energy `at`.
    pub fn linear_through(at: f64, g_at: f64, slope: f64) -> Self {
        Self {
            coeffs: vec![g_at - slope * at, slope],
        }
    }
}

impl DensityOfStates for PolyDos {
    fn value(&self, e: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * e + c)
    }

    fn slope(&self, e: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * e + i as f64 * c;
        }
        acc
    }

    fn count_integral(&self, e: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * e + c / (i + 1) as f64;
        }
        acc * e
    }

    fn energy_integral(&self, e: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * e + c / (i + 2) as f64;
        }
        acc * e * e
    }
}

/// Energy and particle density per unit area from the expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SommerfeldPoint {
    /// Energy per area, meV·nm⁻².
    pub u: f64,
    /// Particles per area, nm⁻².
    pub n: f64,
}

/// Second-order low-temperature expansion of the Fermi-Dirac integrals for
/// an arbitrary density-of-states profile:
///
/// ```text
/// u = ∫₀^μ E g(E) dE + (π²/6)(k_B T)² [μ g′(μ) + g(μ)]
/// n = ∫₀^μ g(E) dE   + (π²/6)(k_B T)²  g′(μ)
/// ```
pub fn sommerfeld(
    dos: &impl DensityOfStates,
    mu: f64,
    t: f64,
    kb: f64,
) -> Result<SommerfeldPoint> {
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::domain(format!(
            "expansion requires mu > 0, got {mu}"
        )));
    }
    check_temperature(t)?;
    let kt = kb * t;
    let thermal = PI * PI / 6.0 * kt * kt;
    Ok(SommerfeldPoint {
        u: dos.energy_integral(mu) + thermal * (mu * dos.slope(mu) + dos.value(mu)),
        n: dos.count_integral(mu) + thermal * dos.slope(mu),
    })
}

/// Expansion from local density-of-states data alone.
///
/// The zero-temperature integrals are evaluated for the linear profile with
/// value `g_at_mu` and slope `g_prime_at_mu` at `mu_f`; the thermal
/// correction terms are evaluated at the same `mu_f`. With `g_prime_at_mu`
/// zero this reduces exactly to the constant-g forms per unit area.
pub fn sommerfeld_expansion(
    g_at_mu: f64,
    g_prime_at_mu: f64,
    mu_f: f64,
    t: f64,
    kb: f64,
) -> Result<SommerfeldPoint> {
    let dos = PolyDos::linear_through(mu_f, g_at_mu, g_prime_at_mu);
    sommerfeld(&dos, mu_f, t, kb)
}
