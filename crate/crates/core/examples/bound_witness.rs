//! The ergotropy bound W ≥ ΔE_q: kept by a coherent pulse, broken by a single
//! photon with the same envelope.

use wgqed::coherent::integrate_obe;
use wgqed::energetics::{assemble_ledger, classical_bound_witness, Trajectory};
use wgqed::pulse::{Pulse, Shape};
use wgqed::qubit::QubitState;
use wgqed::single_photon::integrate_single_excitation;
use wgqed::units::{TimeGrid, UnitsConvention};

fn main() -> wgqed::Result<()> {
    let shape = Shape::RisingExponential { rate: 1.0 };
    let grid = TimeGrid::new(-5.0, 10.0, 1e-3)?;
    let units = UnitsConvention::new(1.0, 1.0)?;

    let coherent = Pulse::coherent_with_photons(shape, (-5.0, 0.0), 1.0)?;
    let coherent = Trajectory::Coherent(integrate_obe(&coherent, QubitState::GROUND, &grid, 1.0)?);
    let single = Pulse::single_photon(shape, (-5.0, 0.0))?;
    let single = Trajectory::SinglePhoton(integrate_single_excitation(&single, &grid, 1.0)?);

    for (name, traj) in [("coherent", coherent), ("single photon", single)] {
        let ledger = assemble_ledger(&traj, units)?;
        let w = classical_bound_witness(&ledger);
        let i0 = grid.index_of(0.0).unwrap();
        println!("{name}:");
        println!(
            "  at t=0: W = {:.5}, dE_q = {:.5}, Q = {:.5}",
            ledger.work()[i0],
            ledger.ergotropy()[i0] - ledger.ergotropy()[0],
            ledger.correlation()[i0]
        );
        println!(
            "  min_t [W - dE_q] = {:.5}, violation = {}",
            w.min_gap, w.violation
        );
        if let (Some(a), Some(b)) = (w.violation_times.first(), w.violation_times.last()) {
            println!("  violated for t in [{a:.3}, {b:.3}]");
        }
        println!("  balance residual {:.2e}", ledger.balance_residual());
    }
    Ok(())
}
