//! Parse a scenario file and run it, printing the summary and the head of
//! the CSV.
//!
//! `cargo run --example run_config -- path/to/scenario.cfg`

use wgqed::config::parse_config;
use wgqed::runner::run_scenario;

const DEFAULT: &str = "
# spontaneous decay from |e>, with the collision oracle alongside
scenario = spontaneous
t_max = 5
dt = 0.01
oracle = true
oracle_dt = 0.05
";

fn main() -> wgqed::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("read config"),
        None => DEFAULT.to_string(),
    };
    let cfg = parse_config(&text)?;
    let d = run_scenario(&cfg)?;
    println!("{}", d.summary_line());
    if let Some(o) = &d.oracle {
        println!(
            "oracle: n_max {}, max|dz| {:.2e}, |Wq+Wf| {:.1e}",
            o.n_max, o.max_z_deviation, o.max_action_reaction
        );
    }
    for line in d.to_csv()?.lines().filter(|l| !l.starts_with('#')).take(4) {
        println!("{line}");
    }
    Ok(())
}
