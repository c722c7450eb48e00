//! Convergence of the energy balance (fourth order) and of the collision
//! oracle (first order) under step halving.

use wgqed::config::parse_config;
use wgqed::runner::convergence_sweep;

fn main() -> wgqed::Result<()> {
    for text in [
        "scenario = coherent\npulse = rising_exponential\nphoton_number = 1\n",
        "scenario = single_photon\npulse = rising_exponential\n",
        "scenario = spontaneous\ninitial_x = 1\ninitial_z = 0\n",
    ] {
        let cfg = parse_config(text)?;
        let r = convergence_sweep(&cfg, &cfg.sweep_dt)?;
        println!("{}", r.summary_line());
        for row in &r.rows {
            println!(
                "  dt {:<8} residual {:.3e}  oracle {:.3e}",
                row.dt, row.balance_residual, row.oracle_deviation
            );
        }
        let fmt = |v: Vec<f64>| {
            v.iter()
                .map(|x| format!("{x:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!(
            "  ratios: residual [{}] oracle [{}]",
            fmt(r.balance_ratios()),
            fmt(r.oracle_ratios())
        );
    }
    Ok(())
}
