//! Physical constants in the crate unit system (meV, nm, s, K).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant, meV/K (exact SI definition, 2019).
pub const BOLTZMANN_MEV_PER_K: f64 = 0.08617333262145178;

/// Reduced Planck constant, meV·s (h exact, divided by 2π).
pub const HBAR_MEV_S: f64 = 6.582119569509067e-13;

/// Free electron mass, meV·s²·nm⁻² (CODATA 2018, 9.1093837015e-31 kg).
pub const ELECTRON_MASS: f64 = 5.685630103565723e-27;

/// In-plane effective mass of electrons in a (100) silicon inversion layer,
/// the transverse mass 0.19 m_e.
pub const SILICON_EFFECTIVE_MASS: f64 = 0.19 * ELECTRON_MASS;

/// k_B, ħ and the effective electron mass, all strictly positive.
///
/// The defaults are the CODATA values with the silicon effective mass;
/// every field may be overridden through configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Boltzmann constant, meV/K.
    pub k_b: f64,
    /// Reduced Planck constant, meV·s.
    pub hbar: f64,
    /// Effective electron mass, meV·s²·nm⁻².
    pub m_eff: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            k_b: BOLTZMANN_MEV_PER_K,
            hbar: HBAR_MEV_S,
            m_eff: SILICON_EFFECTIVE_MASS,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("constants.k_b", self.k_b),
            ("constants.hbar", self.hbar),
            ("constants.m_eff", self.m_eff),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::domain(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Thermal energy k_B·T in meV.
    pub fn thermal_energy(&self, temperature: f64) -> f64 {
        self.k_b * temperature
    }
}
