//! Statistical physics of a quantum dot that holds one or two electrons while
//! exchanging a single electron with a small two-dimensional electron bath.
//!
//! The crate is organized around the measurement chain of single-electron
//! thermometry:
//!
//! 1. [`fermi2d`] — low-temperature thermodynamics of the 2D Fermi bath
//!    (chemical potential, internal energy, Helmholtz potential, entropy,
//!    heat capacity per area, pressure) together with an exact Fermi-Dirac
//!    quadrature oracle that validates the second-order expansion.
//! 2. [`ensemble`] — the grand canonical ensemble of the (1↔2) dot kept at
//!    finite bath size: statistical weights with 1/N₂ fugacity corrections,
//!    partition function, occupation probabilities, the state equation
//!    residual, and the occupation ratio with its infinite-bath limit.
//! 3. [`rts`] — seeded generation of the random telegraph signal whose
//!    dwell-time statistics realize the ensemble ratio, plus rendering of
//!    noisy sampled current traces.
//! 4. [`estimator`] — dwell-time recovery from noisy traces (hysteresis
//!    detection), Poissonianity diagnostics, and inversion of the ratio into
//!    a generalized electron temperature with propagated uncertainty.
//!
//! Units used throughout: energy in meV, area in nm², temperature in K,
//! time in s, current in A. [`PhysicalConstants`] carries k_B, ħ and the
//! effective mass in this unit system.

pub mod constants;
pub mod ensemble;
pub mod error;
pub mod estimator;
pub mod fermi2d;
pub mod io;
pub mod numeric;
pub mod rts;

pub use constants::PhysicalConstants;
pub use ensemble::{DotSpec, EnsembleParams, Occupancy, OccupancyDistribution, SystemSpec};
pub use error::{Error, Result};
pub use fermi2d::{ReservoirSpec, ThermoPoint};
pub use numeric::LogValue;
pub use rts::{EventList, RateModel, SampledTrace, TraceConfig};
