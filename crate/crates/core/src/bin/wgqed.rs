use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use wgqed::config::{parse_config, EmitKind};
use wgqed::runner::{convergence_sweep, emit_fig2_dataset, fig2_partner, run_scenario};
use wgqed::Error;

/// Directory used for relative `--out` paths when set.
const OUT_DIR_VAR: &str = "WGQED_OUT_DIR";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Fig2,
    Trajectory,
    Convergence,
}

#[derive(Debug, Parser)]
#[command(
    version,
    about = "Qubit energetics in a waveguide: run a scenario file and write CSV"
)]
struct Args {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; stdout only gets the summary line. Defaults to `<config stem>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// What to produce; overrides `emit` in the config.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Run the collision-model oracle too.
    #[arg(long)]
    oracle: bool,
    /// Solver step override.
    #[arg(long)]
    dt: Option<f64>,
}

fn output_path(args: &Args) -> PathBuf {
    let path = args.out.clone().unwrap_or_else(|| {
        let stem = args.config.file_stem().unwrap_or_default();
        Path::new(stem).with_extension("csv")
    });
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path,
    }
}

fn run(args: &Args) -> wgqed::Result<String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(dt) = args.dt {
        cfg = cfg.with_dt(dt);
        // Re-validate the grid with the new step.
        cfg = parse_config(&cfg.serialize())?;
    }
    if args.oracle {
        cfg.oracle.enabled = true;
    }
    let emit = match args.emit {
        Some(Emit::Fig2) => EmitKind::Fig2,
        Some(Emit::Trajectory) => EmitKind::Trajectory,
        Some(Emit::Convergence) => EmitKind::Convergence,
        None => cfg.emit,
    };
    let (csv, summary) = match emit {
        EmitKind::Trajectory => {
            let d = run_scenario(&cfg)?;
            (d.to_csv()?, d.summary_line())
        }
        EmitKind::Fig2 => {
            let other = fig2_partner(&cfg)?;
            let f = if cfg.kind == wgqed::config::ScenarioKind::Coherent {
                emit_fig2_dataset(&cfg, &other)?
            } else {
                emit_fig2_dataset(&other, &cfg)?
            };
            (f.to_csv()?, f.summary_line())
        }
        EmitKind::Convergence => {
            let r = convergence_sweep(&cfg, &cfg.sweep_dt)?;
            (r.to_csv(&cfg)?, r.summary_line())
        }
    };
    let out = output_path(args);
    std::fs::write(&out, csv)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", out.display())))?;
    Ok(summary)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            // Unreadable or unwritable paths are bad input too.
            if e.is_config_error() || matches!(e, Error::Io(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
