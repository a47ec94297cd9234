//! Exact Fermi-Dirac integrals by adaptive quadrature, with a bracketed
//! chemical-potential solve. Independent of the expansion it validates.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, brent_root, softplus};

use super::{DensityOfStates, PolyDos};

/// Tolerances and cutoffs of the quadrature oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleSettings {
    /// Absolute tolerance on the solved chemical potential, meV.
    pub mu_abs_tol: f64,
    /// Relative tolerance of each quadrature.
    pub quad_rel_tol: f64,
    /// Half-width of the μ bracket in units of k_B·T.
    pub bracket_kt: f64,
    /// Upper integration limit beyond μ in units of k_B·T; the discarded
    /// tail is bounded by the e^{−E/k_BT} decay of the Fermi factor.
    pub tail_kt: f64,
    /// Allowed relative mismatch between the quadrature density and the
    /// constant-g closed form used as a cross-check.
    pub cross_check_rel_tol: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            mu_abs_tol: 1e-12,
            quad_rel_tol: 1e-13,
            bracket_kt: 50.0,
            tail_kt: 40.0,
            cross_check_rel_tol: 1e-8,
        }
    }
}

/// Exact chemical potential and internal energy at one (M, A, g, T) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOraclePoint {
    /// Solved chemical potential, meV.
    pub mu: f64,
    /// Internal energy by quadrature (extensive), meV.
    pub u: f64,
}

/// Fermi occupation 1/(1 + e^{(E−μ)/k_BT}), evaluated without overflow.
fn fermi_factor(e: f64, mu: f64, kt: f64) -> f64 {
    let x = (e - mu) / kt;
    if x > 0.0 {
        let ex = (-x).exp();
        ex / (1.0 + ex)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// ∫₀^∞ H(E)·f(E) dE truncated at μ + tail_kt·k_BT, split at the Fermi edge.
fn fd_integral<H: Fn(f64) -> f64>(h: H, mu: f64, kt: f64, settings: &OracleSettings) -> f64 {
    let upper = mu.max(0.0) + settings.tail_kt * kt;
    if upper <= 0.0 {
        return 0.0;
    }
    let integrand = |e: f64| h(e) * fermi_factor(e, mu, kt);
    let mut knots: Vec<f64> = [mu - settings.tail_kt * kt, mu - 8.0 * kt, mu, mu + 8.0 * kt]
        .into_iter()
        .filter(|&k| k > 0.0 && k < upper)
        .collect();
    knots.insert(0, 0.0);
    knots.push(upper);

    // coarse composite pass fixes the absolute tolerance scale
    let mut coarse = 0.0;
    for w in knots.windows(2) {
        coarse += fixed_simpson(&integrand, w[0], w[1], 64);
    }
    let scale = coarse.abs().max(f64::MIN_POSITIVE);
    let tol = settings.quad_rel_tol * scale / (knots.len() - 1) as f64;

    let mut total = 0.0;
    for w in knots.windows(2) {
        total += adaptive_simpson(&integrand, w[0], w[1], tol);
    }
    total
}

fn fixed_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Particle density n(μ, T) = ∫₀^∞ g(E) f(E) dE by quadrature, nm⁻².
pub fn fd_density(
    dos: &impl DensityOfStates,
    mu: f64,
    t: f64,
    kb: f64,
    settings: &OracleSettings,
) -> f64 {
    fd_integral(|e| dos.value(e), mu, kb * t, settings)
}

/// Energy density u(μ, T) = ∫₀^∞ E·g(E) f(E) dE by quadrature, meV·nm⁻².
pub fn fd_energy_density(
    dos: &impl DensityOfStates,
    mu: f64,
    t: f64,
    kb: f64,
    settings: &OracleSettings,
) -> f64 {
    fd_integral(|e| e * dos.value(e), mu, kb * t, settings)
}

/// Closed-form density of a constant density of states,
/// n = g·k_BT·ln(1 + e^{μ/k_BT}).
pub fn constant_g_density(g: f64, mu: f64, t: f64, kb: f64) -> f64 {
    let kt = kb * t;
    g * kt * softplus(mu / kt)
}

/// Solves n(μ) = `n_target` for μ inside `[lo, hi]` by Brent iteration.
///
/// The density is strictly increasing in μ, so a sign change over the
/// bracket is necessary and sufficient.
pub fn solve_chemical_potential(
    dos: &impl DensityOfStates,
    n_target: f64,
    t: f64,
    kb: f64,
    lo: f64,
    hi: f64,
    settings: &OracleSettings,
) -> Result<f64> {
    let f = |mu: f64| fd_density(dos, mu, t, kb, settings) - n_target;
    let (flo, fhi) = (f(lo), f(hi));
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::numerical(format!(
            "chemical potential not bracketed: n(μ={lo}) - n_target = {flo}, \
             n(μ={hi}) - n_target = {fhi} (n_target = {n_target})"
        )));
    }
    brent_root(f, lo, hi, settings.mu_abs_tol, 200)
}

/// Exact (M, A, g, T) → (μ, U) for the constant-g 2D system.
///
/// Solves the full Fermi-Dirac particle-number constraint for μ inside
/// [−bracket·k_BT, μ_F + bracket·k_BT], cross-checks the quadrature density
/// against the constant-g closed form, then integrates the energy density.
pub fn fd_oracle(
    m: f64,
    area: f64,
    g: f64,
    t: f64,
    constants: &PhysicalConstants,
    settings: &OracleSettings,
) -> Result<FdOraclePoint> {
    if !(m > 0.0 && area > 0.0 && g > 0.0 && t > 0.0) {
        return Err(Error::domain(format!(
            "fd_oracle requires M > 0, A > 0, g > 0, T > 0; got M={m}, A={area}, g={g}, T={t}"
        )));
    }
    let kb = constants.k_b;
    let kt = kb * t;
    let mu_f = m / (g * area);
    let n_target = m / area;
    let dos = PolyDos::constant(g);

    let lo = -settings.bracket_kt * kt;
    let hi = mu_f + settings.bracket_kt * kt;
    let mu = solve_chemical_potential(&dos, n_target, t, kb, lo, hi, settings)?;

    let n_quad = fd_density(&dos, mu, t, kb, settings);
    let n_closed = constant_g_density(g, mu, t, kb);
    let mismatch = (n_quad - n_closed).abs() / n_closed.abs().max(f64::MIN_POSITIVE);
    if mismatch > settings.cross_check_rel_tol {
        return Err(Error::numerical(format!(
            "quadrature density {n_quad:e} disagrees with the constant-g closed form \
             {n_closed:e} by {mismatch:e} relative (tolerance {:e})",
            settings.cross_check_rel_tol
        )));
    }

    let u = area * fd_energy_density(&dos, mu, t, kb, settings);
    Ok(FdOraclePoint { mu, u })
}
