//! Oracles shared by the integration suites: independent of the library
//! paths they check.

#![allow(dead_code)]

/// Kolmogorov-Smirnov statistic of a sample against the exponential CDF
/// with the given mean.
pub fn ks_statistic_exponential(sample: &[f64], mean: f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let cdf = 1.0 - (-x / mean).exp();
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

/// Asymptotic Kolmogorov critical value at significance 0.01.
pub fn ks_critical_a01(n: usize) -> f64 {
    1.62762 / (n as f64).sqrt()
}

/// Greedy monotone matching of detected transition times to true ones
/// within `tol`; returns (matched, missed, spurious).
pub fn match_transitions(truth: &[f64], detected: &[f64], tol: f64) -> (usize, usize, usize) {
    let mut i = 0;
    let mut j = 0;
    let mut matched = 0;
    while i < truth.len() && j < detected.len() {
        let dt = detected[j] - truth[i];
        if dt.abs() <= tol {
            matched += 1;
            i += 1;
            j += 1;
        } else if dt < 0.0 {
            j += 1; // detected time too early: spurious candidate
        } else {
            i += 1; // true transition skipped: missed
        }
    }
    let missed = truth.len() - matched;
    let spurious = detected.len() - matched;
    (matched, missed, spurious)
}

/// Central-difference derivative with a step scan: returns the candidate
/// derivatives for relative steps over a small ladder.
pub fn central_diff_scan<F: Fn(f64) -> f64>(f: F, x: f64, rel_steps: &[f64]) -> Vec<f64> {
    rel_steps
        .iter()
        .map(|&r| {
            let h = if x == 0.0 { r } else { r * x.abs() };
            (f(x + h) - f(x - h)) / (2.0 * h)
        })
        .collect()
}

/// Deterministic xorshift-based grid generator for test parameter draws;
/// avoids coupling the tests to the library's RNG.
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

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Log-uniform in [lo, hi).
    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        (self.range(lo.ln(), hi.ln())).exp()
    }
}
