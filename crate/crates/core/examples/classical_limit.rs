//! Correlation energy relative to work for a constant drive of fixed length,
//! at increasing drive strength.

use wgqed::coherent::integrate_obe;
use wgqed::energetics::{assemble_ledger, Trajectory};
use wgqed::pulse::{Pulse, Shape};
use wgqed::qubit::QubitState;
use wgqed::units::{TimeGrid, UnitsConvention};

fn main() -> wgqed::Result<()> {
    let duration = 2.0;
    let grid = TimeGrid::new(0.0, duration, 1e-4)?;
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "|b|^2", "max|Q|", "max W", "ratio"
    );
    for drive in [1.0, 10.0, 100.0] {
        let shape = Shape::Square {
            start: 0.0,
            duration,
        };
        let p = Pulse::coherent_with_photons(shape, shape.natural_support(), drive * duration)?;
        let traj = integrate_obe(&p, QubitState::GROUND, &grid, 1.0)?;
        let ledger = assemble_ledger(&Trajectory::Coherent(traj), UnitsConvention::new(1.0, 1.0)?)?;
        let q = ledger
            .correlation()
            .iter()
            .map(|q| q.abs())
            .fold(0.0, f64::max);
        let w = ledger.work().iter().cloned().fold(f64::MIN, f64::max);
        println!("{drive:>8} {q:>12.6} {w:>12.6} {:>12.6}", q / w);
    }
    Ok(())
}
