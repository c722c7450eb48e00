//! Population inversion by a single photon, for the mode-matched rising
//! exponential and a few other wavepacket shapes.

use wgqed::pulse::{Pulse, Shape};
use wgqed::single_photon::integrate_single_excitation;
use wgqed::units::TimeGrid;

fn main() -> wgqed::Result<()> {
    let grid = TimeGrid::new(-20.0, 15.0, 1e-3)?;
    let shapes = [
        Shape::RisingExponential { rate: 1.0 },
        Shape::Gaussian {
            center: 0.0,
            width: 0.5,
        },
        Shape::Gaussian {
            center: 0.0,
            width: 1.5,
        },
        Shape::Square {
            start: -1.0,
            duration: 1.0,
        },
        Shape::Square {
            start: -2.5,
            duration: 2.5,
        },
    ];
    for shape in shapes {
        let p = Pulse::single_photon(shape, shape.default_support())?;
        let traj = integrate_single_excitation(&p, &grid, 1.0)?;
        let (i, peak) =
            traj.excited_population
                .iter()
                .enumerate()
                .fold(
                    (0, 0.0),
                    |best, (i, pe)| if *pe > best.1 { (i, *pe) } else { best },
                );
        println!("{shape:?}: max P_e = {peak:.6} at t = {:.3}", grid.time(i));
    }
    println!("1 - e^-5 = {:.6}", 1.0 - (-5.0f64).exp());
    Ok(())
}
