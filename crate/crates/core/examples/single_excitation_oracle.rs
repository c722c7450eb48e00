//! Exact global state of qubit plus one photon: inversion, qubit–field
//! entanglement entropy and the scattered wavepacket.

use wgqed::oracle::{build_time_bins, simulate_single_excitation_global};
use wgqed::pulse::{Pulse, Shape};

fn main() -> wgqed::Result<()> {
    let p = Pulse::single_photon(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0))?;
    let bins = build_time_bins(&p, (-5.0, 10.0), 1e-2)?;
    let run = simulate_single_excitation_global(&bins, 1.0)?;

    println!("{:>6} {:>9} {:>9} {:>9}", "t", "P_e", "S", "excit.");
    for k in (0..run.times.len()).step_by(100) {
        println!(
            "{:>6.2} {:>9.5} {:>9.5} {:>9.6}",
            run.times[k], run.excited_population[k], run.entropy[k], run.excitation_number[k]
        );
    }
    let out: f64 = run
        .output_amplitude
        .iter()
        .map(|a| a.norm_sqr() * run.dt)
        .sum();
    println!("photon weight leaving the qubit: {out:.6}");
    println!(
        "max |<sigma_->| = {:.1e} (no dipole in a Fock sector)",
        run.max_abs_sigma_minus()
    );
    Ok(())
}
