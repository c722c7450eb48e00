//! Envelope shapes, truncation and renormalization.

use wgqed::pulse::{normalize_pulse, Pulse, Shape};

fn main() -> wgqed::Result<()> {
    let shapes = [
        Shape::RisingExponential { rate: 1.0 },
        Shape::Gaussian {
            center: 0.0,
            width: 1.0,
        },
        Shape::Square {
            start: -2.0,
            duration: 2.0,
        },
    ];
    for shape in shapes {
        let support = shape.default_support();
        let raw = Pulse::coherent(shape, support)?;
        let one = normalize_pulse(&raw, 1.0)?;
        let three = Pulse::coherent_with_photons(shape, support, 3.0)?;
        println!(
            "{:<20} support [{:>5.1}, {:>5.1}]  N truncated {:.6}  N renormalized {:.6}  peak |b| at N=3 {:.4}",
            raw.label(),
            support.0,
            support.1,
            raw.photon_number(),
            one.photon_number(),
            three.peak_amplitude()
        );
    }
    Ok(())
}
