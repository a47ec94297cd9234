//! Deterministic draw and oracle helpers for the acceptance suite.

#![allow(dead_code)]

use rts_thermo::ensemble::{DotSpec, SystemSpec};
use rts_thermo::fermi2d::ReservoirSpec;
use rts_thermo::PhysicalConstants;

/// xorshift64 grid generator, independent of the library RNG.
pub struct GridRng(u64);

impl GridRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        self.range(lo.ln(), hi.ln()).exp()
    }
}

/// Mesoscopic-scale random system: μ ∈ [0.5, 30] meV, dot level of the same
/// order, spin-degenerate defaults optional.
pub fn draw_system(rng: &mut GridRng, default_degeneracies: bool) -> SystemSpec {
    let constants = PhysicalConstants::default();
    let g = rng.log_range(1.0e-5, 1.0e-2);
    let sigma2 = rng.log_range(1.0e3, 1.0e5);
    let mu_target = rng.range(0.5, 30.0);
    let n2 = ((mu_target * g * sigma2).round() as u64).max(2);
    let reservoir = ReservoirSpec { n2, sigma2, g };
    let mu = reservoir.chemical_potential();
    let (deg1, deg2) = if default_degeneracies {
        (2, 1)
    } else {
        (rng.range(1.0, 4.99) as u32, rng.range(1.0, 4.99) as u32)
    };
    SystemSpec {
        constants,
        reservoir,
        dot: DotSpec {
            e_t: mu * rng.range(0.2, 1.5),
            delta_e_c: rng.range(0.0, 5.0),
            delta_e_l: rng.range(-2.0, 2.0),
            deg1,
            deg2,
            sigma1: rng.range(0.0, 100.0),
        },
    }
}

/// Kolmogorov-Smirnov statistic against the exponential CDF with the given
/// mean, and the asymptotic critical value at significance 0.01.
pub fn ks_statistic_exponential(sample: &[f64], mean: f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let cdf = 1.0 - (-x / mean).exp();
        d = d.max((cdf - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - cdf).abs());
    }
    d
}

pub fn ks_critical_a01(n: usize) -> f64 {
    1.62762 / (n as f64).sqrt()
}

/// Central differences over a relative step ladder.
pub fn central_diff_scan<F: Fn(f64) -> f64>(f: F, x: f64, rel_steps: &[f64]) -> Vec<f64> {
    rel_steps
        .iter()
        .map(|&r| {
            let h = if x == 0.0 { r } else { r * x.abs() };
            (f(x + h) - f(x - h)) / (2.0 * h)
        })
        .collect()
}
