//! Time-bin collision model against the Bloch equations, and its per-step
//! energy bookkeeping.

use wgqed::coherent::integrate_obe;
use wgqed::oracle::{build_time_bins, run_coherent_oracle};
use wgqed::pulse::{Pulse, Shape};
use wgqed::qubit::QubitState;
use wgqed::units::TimeGrid;

fn main() -> wgqed::Result<()> {
    let p = Pulse::coherent_with_photons(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0), 1.0)?;
    let grid = TimeGrid::new(-5.0, 10.0, 2.5e-4)?;
    let obe = integrate_obe(&p, QubitState::GROUND, &grid, 1.0)?;

    println!(
        "{:>8} {:>6} {:>12} {:>12} {:>12}",
        "dt", "n_max", "max|dz|", "|Wq+Wf|", "io dev"
    );
    for dt in [4e-2, 2e-2, 1e-2, 5e-3] {
        let bins = build_time_bins(&p, (-5.0, 10.0), dt)?;
        let run = run_coherent_oracle(&bins, QubitState::GROUND, None, 1.0)?;
        let dz = run
            .times
            .iter()
            .zip(&run.states)
            .map(|(t, s)| (s.z - obe.states[grid.index_of(*t).unwrap()].z).abs())
            .fold(0.0, f64::max);
        println!(
            "{dt:>8} {:>6} {dz:>12.3e} {:>12.1e} {:>12.3e}",
            run.n_max,
            run.max_action_reaction(),
            run.input_output_deviation()
        );
    }
    Ok(())
}
