//! Optical Bloch equations for a one-photon coherent pulse, with the work and
//! correlation energy it exchanges with the qubit.

use wgqed::coherent::{cumulative_flows, integrate_obe};
use wgqed::pulse::{Pulse, Shape};
use wgqed::qubit::{ergotropy, QubitState};
use wgqed::units::TimeGrid;

fn main() -> wgqed::Result<()> {
    let p = Pulse::coherent_with_photons(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0), 1.0)?;
    let grid = TimeGrid::new(-5.0, 10.0, 1e-3)?;
    let traj = integrate_obe(&p, QubitState::GROUND, &grid, 1.0)?;
    let (w, q) = cumulative_flows(&traj);

    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "t", "z", "|s|", "W", "Q", "ergo"
    );
    for t in [-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let i = grid.index_of(t).unwrap();
        let s = traj.states[i];
        println!(
            "{t:>6.1} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            s.z,
            s.sigma_minus().norm(),
            w[i],
            q[i],
            ergotropy(&s)?
        );
    }
    println!("peak drive |beta|^2/gamma = {:.3}", traj.drive_strength());
    Ok(())
}
