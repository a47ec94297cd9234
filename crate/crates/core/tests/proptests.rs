//! Randomized property checks for the algebraic invariants.

use proptest::prelude::*;
use rts_thermo::ensemble::{DotSpec, Occupancy, SystemSpec};
use rts_thermo::fermi2d::ReservoirSpec;
use rts_thermo::rts::{dwell_means_from_ratio, simulate_events, RateModel};
use rts_thermo::PhysicalConstants;

fn arb_system() -> impl Strategy<Value = SystemSpec> {
    (
        1.0e-5..1.0e-2f64,             // g
        1.0e3..1.0e5f64,               // sigma2
        0.5..30.0f64,                  // mu target
        0.2..1.5f64,                   // e_t / mu
        0.0..5.0f64,                   // delta_e_c
        -2.0..2.0f64,                  // delta_e_l
        1u32..5,                       // deg1
        1u32..5,                       // deg2
        0.0..100.0f64,                 // sigma1
    )
        .prop_map(
            |(g, sigma2, mu, et_frac, dec, del, deg1, deg2, sigma1)| {
                let n2 = ((mu * g * sigma2).round() as u64).max(2);
                SystemSpec {
                    constants: PhysicalConstants::default(),
                    reservoir: ReservoirSpec { n2, sigma2, g },
                    dot: DotSpec {
                        e_t: mu * et_frac,
                        delta_e_c: dec,
                        delta_e_l: del,
                        deg1,
                        deg2,
                        sigma1,
                    },
                }
            },
        )
}

proptest! {
    #[test]
    fn probabilities_normalize_and_match_the_ratio(sys in arb_system(), t in 2.0..300.0f64) {
        let params = sys.at_temperature(t);
        let d = params.occupation_probability().unwrap();
        prop_assert!((d.p1 + d.p2 - 1.0).abs() <= 1e-12);
        let closed = params.occupation_ratio().unwrap().ln();
        prop_assert!((d.ratio().ln() - closed).abs() <= 1e-12 * closed.abs().max(1.0));
    }

    #[test]
    fn ratio_is_invariant_under_energy_unit_rescaling(
        sys in arb_system(),
        t in 2.0..300.0f64,
        lambda in 1.0e-3..1.0e3f64,
    ) {
        // expressing every energy in a unit λ times smaller leaves the
        // dimensionless ratio exponent unchanged
        let base = sys.at_temperature(t).occupation_ratio().unwrap().ln();
        let mut scaled = sys;
        scaled.constants.k_b *= lambda;
        scaled.constants.hbar *= lambda;
        scaled.reservoir.g /= lambda;
        scaled.dot.e_t *= lambda;
        scaled.dot.delta_e_c *= lambda;
        scaled.dot.delta_e_l *= lambda;
        let re = scaled.at_temperature(t).occupation_ratio().unwrap().ln();
        prop_assert!(
            (re - base).abs() <= 1e-9 * base.abs().max(1.0),
            "{re} vs {base} at λ = {lambda}"
        );
    }

    #[test]
    fn dwell_closure_preserves_the_ratio_exactly(
        ratio in 1.0e-6..1.0e6f64,
        rate in 1.0e-3..1.0e9f64,
    ) {
        let m = dwell_means_from_ratio(ratio, rate).unwrap();
        prop_assert!((m.tau1_mean / m.tau2_mean - ratio).abs() <= 1e-15 * ratio);
    }

    #[test]
    fn simulated_dwells_always_alternate_and_sum(
        tau1 in 1.0e-6..1.0f64,
        tau2 in 1.0e-6..1.0f64,
        transitions in 1usize..200,
        seed in any::<u64>(),
    ) {
        let model = RateModel { tau1_mean: tau1, tau2_mean: tau2 };
        let ev = simulate_events(&model, transitions, seed).unwrap();
        prop_assert_eq!(ev.dwells.len(), transitions + 1);
        prop_assert_eq!(ev.initial_state, ev.dwells[0].state);
        let mut sum = 0.0;
        let mut prev: Option<Occupancy> = None;
        for d in &ev.dwells {
            prop_assert!(d.duration > 0.0);
            if let Some(p) = prev {
                prop_assert!(p != d.state);
            }
            prev = Some(d.state);
            sum += d.duration;
        }
        prop_assert!((sum - ev.total_time).abs() <= 1e-12 * ev.total_time);
    }
}
