//! Energy and ergotropy of a few qubit states.

use wgqed::qubit::{ergotropy, qubit_energy, QubitState};

fn main() -> wgqed::Result<()> {
    let states = [
        ("ground", QubitState::GROUND),
        ("excited", QubitState::EXCITED),
        ("plus", QubitState::PLUS),
        ("mixed z=0.5", QubitState::new(0.0, 0.0, 0.5)?),
        ("mixed z=-0.4", QubitState::new(0.0, 0.0, -0.4)?),
        ("tilted", QubitState::new(0.6, 0.0, -0.8)?),
    ];
    println!(
        "{:<14} {:>8} {:>10} {:>8}",
        "state", "energy", "ergotropy", "S"
    );
    for (name, s) in states {
        println!(
            "{name:<14} {:>8.4} {:>10.4} {:>8.4}",
            qubit_energy(&s)?,
            ergotropy(&s)?,
            s.entropy()
        );
    }
    Ok(())
}
