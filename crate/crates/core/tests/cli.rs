use std::path::PathBuf;
use std::process::Command;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wgqed-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn wgqed() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wgqed"));
    cmd.env_remove("WGQED_OUT_DIR");
    cmd
}

const SINGLE: &str = "scenario = single_photon\npulse = rising_exponential\ndt = 0.01\n";

#[test]
fn trajectory_run_writes_csv_and_summary() {
    let dir = scratch("traj");
    let cfg = dir.join("single.cfg");
    let out = dir.join("single.csv");
    std::fs::write(&cfg, SINGLE).unwrap();
    let run = wgqed()
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("scenario=single_photon min_gap="));
    assert!(stdout.trim_end().ends_with("violation=true"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("\nt,P_e,Re_xi_in,Re_xi_out,Im_xi_out,U_q,W,Q,E_q,dWB\n"));
}

#[test]
fn oracle_flag_and_dt_override() {
    let dir = scratch("oracle");
    let cfg = dir.join("single.cfg");
    std::fs::write(&cfg, SINGLE).unwrap();
    let out = dir.join("o.csv");
    let run = wgqed()
        .args(["--oracle", "--dt", "0.005", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# config.dt = 0.005"));
    assert!(csv.contains(",S_entropy\n"));
}

#[test]
fn out_dir_override_applies_to_relative_paths() {
    let dir = scratch("env");
    let cfg = dir.join("spont.cfg");
    std::fs::write(&cfg, "scenario = spontaneous\ndt = 0.01\nt_max = 2\n").unwrap();
    let run = wgqed()
        .env("WGQED_OUT_DIR", &dir)
        .arg("--config")
        .arg(&cfg)
        .args(["--out", "rel.csv"])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(dir.join("rel.csv").exists());
}

#[test]
fn fig2_and_convergence_emitters() {
    let dir = scratch("emit");
    let cfg = dir.join("fig2.cfg");
    std::fs::write(&cfg, "scenario = coherent\npulse = rising_exponential\nphoton_number = 1\ndt = 0.01\nsweep_dt = 0.1, 0.05, 0.025\n").unwrap();
    let out = dir.join("fig2.csv");
    let run = wgqed()
        .arg("--config")
        .arg(&cfg)
        .args(["--emit", "fig2", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("\nt_gamma,dWB_coherent,dWB_single,Q_coherent,Q_single\n"));

    let out = dir.join("conv.csv");
    let run = wgqed()
        .arg("--config")
        .arg(&cfg)
        .args(["--emit", "convergence", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8(run.stdout)
        .unwrap()
        .contains("non_converging=false"));
}

#[test]
fn config_errors_exit_2() {
    let dir = scratch("bad");
    let cfg = dir.join("bad.cfg");
    std::fs::write(
        &cfg,
        "scenario = single_photon\npulse = rising_exponential\ninitial_z = 0.0\n",
    )
    .unwrap();
    let run = wgqed().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8(run.stderr).unwrap().contains("line 3"));

    let run = wgqed()
        .args(["--config", "/nonexistent/x.cfg"])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
    let run = wgqed().args(["--emit", "nonsense"]).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // A 400-photon pulse on a step far too coarse for its Rabi frequency.
    let dir = scratch("diverge");
    let cfg = dir.join("hot.cfg");
    std::fs::write(&cfg, "scenario = coherent\npulse = square\nstart = 0\nduration = 1\nphoton_number = 400\nt0 = 0\nt_max = 2\ndt = 0.1\n").unwrap();
    let run = wgqed()
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("o.csv"))
        .output()
        .unwrap();
    assert_eq!(
        run.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
}
