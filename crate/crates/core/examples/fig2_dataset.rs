//! Coherent vs single-photon energetics on a shared grid, written as CSV.
//!
//! `cargo run --example fig2_dataset -- fig2.csv`

use wgqed::config::parse_config;
use wgqed::runner::{emit_fig2_dataset, fig2_partner};

const CONFIG: &str = "
scenario = coherent
pulse = rising_exponential
t_start = -5
t_stop = 0
photon_number = 1
";

fn main() -> wgqed::Result<()> {
    let coherent = parse_config(CONFIG)?;
    let single = fig2_partner(&coherent)?;
    let f = emit_fig2_dataset(&coherent, &single)?;

    let path = std::env::args().nth(1).unwrap_or_else(|| "fig2.csv".into());
    std::fs::write(&path, f.to_csv()?).expect("write csv");
    println!("{}", f.summary_line());

    for t in [-2.0, -1.0, 0.0, 1.0, 3.0, 10.0] {
        let i = f.t_gamma.iter().position(|x| (x - t).abs() < 1e-9).unwrap();
        println!(
            "t = {t:>5.1}: dWB coh {:+.4} single {:+.4} | Q coh {:+.4} single {:+.4}",
            f.dwb_coherent[i], f.dwb_single[i], f.q_coherent[i], f.q_single[i]
        );
    }
    println!("wrote {path}");
    Ok(())
}
