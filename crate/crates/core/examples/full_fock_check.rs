//! Brute-force joint evolution over every bin, compared with the traced
//! two-body stepper.

use num_complex::Complex64;
use wgqed::oracle::build_time_bins;
use wgqed::oracle::full_fock::{
    max_marginal_deviation, simulate_full_fock, two_body_marginals, FieldInput,
};
use wgqed::pulse::{Pulse, Shape};

fn main() -> wgqed::Result<()> {
    let p = Pulse::coherent_with_photons(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0), 1.0)?;
    let dt = 0.1;
    let bins = build_time_bins(&p, (-0.8, 0.0), dt)?;
    let h = 0.5f64.sqrt();
    let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    for n_max in [1, 2, 3] {
        let full = simulate_full_fock(
            plus,
            &FieldInput::Coherent(bins.amplitudes.clone()),
            n_max,
            1.0,
            dt,
        )?;
        let traced = two_body_marginals(plus, &bins.amplitudes, n_max, 1.0, dt)?;
        let norm_drift = full
            .norms
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max);
        println!(
            "n_max {n_max}: dim {:>6}, marginal deviation {:.1e}, norm drift {norm_drift:.1e}",
            2 * (n_max + 1usize).pow(bins.len() as u32),
            max_marginal_deviation(&full.qubit_marginals, &traced)
        );
    }
    Ok(())
}
