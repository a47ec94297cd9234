use rts_thermo::{PhysicalConstants, Result, SystemSpec};
use rts_thermo::ensemble::DotSpec;
use rts_thermo::fermi2d::{dos_2d, ReservoirSpec};
use rts_thermo::rts::{dwell_means_from_ratio, simulate_events};
use rts_thermo::estimator::{dwell_statistics, estimate_temperature, EstimatorOptions};

fn main() -> Result<()> {
    let constants = PhysicalConstants::default();
    let system = SystemSpec {
        constants,
        reservoir: ReservoirSpec { n2: 100, sigma2: 1.0e4, g: dos_2d(&constants)? },
        dot: DotSpec { e_t: 37.34, delta_e_c: 2.0, delta_e_l: 1.2,
                       deg1: 2, deg2: 1, sigma1: 10.0 },
    };

    // forward: ensemble ratio at 4.2 K -> dwell process
    let ratio = system.at_temperature(4.2).occupation_ratio()?.linear().unwrap();
    let model = dwell_means_from_ratio(ratio, 1.0e3)?;
    let events = simulate_events(&model, 10_000, 42)?;

    // inverse: dwell statistics -> generalized temperature
    let stats = dwell_statistics(&events)?;
    let estimate = estimate_temperature(&stats, &system, &EstimatorOptions::default())?;
    assert!(estimate.valid);
    println!("T = {:.3} ± {:.3} K", estimate.t_hat, estimate.sigma_t);
    Ok(())
}
