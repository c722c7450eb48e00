//! Decay into the empty waveguide: the qubit does negative work on its own
//! emitted field when it starts with a dipole.

use wgqed::coherent::integrate_obe;
use wgqed::energetics::{assemble_ledger, Trajectory};
use wgqed::pulse::Pulse;
use wgqed::qubit::QubitState;
use wgqed::units::{TimeGrid, UnitsConvention};

fn main() -> wgqed::Result<()> {
    let grid = TimeGrid::new(0.0, 20.0, 1e-3)?;
    for (name, s0) in [("|e>", QubitState::EXCITED), ("|+>", QubitState::PLUS)] {
        let traj = Trajectory::Coherent(integrate_obe(&Pulse::vacuum(), s0, &grid, 1.0)?);
        let ledger = assemble_ledger(&traj, UnitsConvention::new(1.0, 1.0)?)?;
        println!(
            "{name}: W(inf) = {:+.6}, Q(inf) = {:+.6}, coherent field energy gained = {:+.6}",
            ledger.work().last().unwrap(),
            ledger.correlation().last().unwrap(),
            ledger.coherent_field_energy().last().unwrap() - ledger.coherent_field_energy()[0]
        );
    }
    Ok(())
}
