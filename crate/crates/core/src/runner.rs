//! Scenario execution and CSV output.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coherent::integrate_obe;
use crate::config::{ScenarioConfig, ScenarioKind};
use crate::energetics::{
    assemble_ledger, classical_bound_witness, BoundWitness, EnergyLedger, Trajectory,
};
use crate::error::{Error, Result};
use crate::oracle::full_fock::{
    max_marginal_deviation, simulate_full_fock, two_body_marginals, FieldInput,
};
use crate::oracle::{
    build_time_bins, run_coherent_oracle, simulate_single_excitation_global, TimeBins,
};
use crate::pulse::{Pulse, Statistics};
use crate::qubit::QubitState;
use crate::single_photon::integrate_single_excitation;

pub const FORMAT_VERSION: u32 = 1;

pub const COHERENT_COLUMNS: [&str; 14] = [
    "t",
    "x",
    "y",
    "z",
    "Re_beta_in",
    "Im_beta_in",
    "Re_beta_out",
    "Im_beta_out",
    "U_q",
    "W",
    "Q",
    "E_q",
    "E_f_coh",
    "dWB",
];

pub const SINGLE_PHOTON_COLUMNS: [&str; 10] = [
    "t",
    "P_e",
    "Re_xi_in",
    "Re_xi_out",
    "Im_xi_out",
    "U_q",
    "W",
    "Q",
    "E_q",
    "dWB",
];

pub const FIG2_COLUMNS: [&str; 5] = [
    "t_gamma",
    "dWB_coherent",
    "dWB_single",
    "Q_coherent",
    "Q_single",
];

/// Bins handed to the brute-force check.
const FULL_FOCK_BINS: usize = 8;

/// Collision-model cross-checks of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDiagnostics {
    pub dt: f64,
    pub n_max: usize,
    /// `max |z_oracle − z_solver|` at bin boundaries.
    pub max_z_deviation: f64,
    /// `max |Ẇ^q + Ẇ^f|` over collisions.
    pub max_action_reaction: f64,
    /// `max |ΔU^q + ΔU^f|` over collisions.
    pub max_energy_exchange: f64,
    /// `max |⟨a_out⟩ − ⟨a_in⟩ + √γ⟨σ₋⟩|` over bins.
    pub input_output_deviation: f64,
    /// Brute-force vs two-body marginals on the first bins, if requested.
    pub full_fock_deviation: Option<f64>,
    /// Single photon only: `(t, S)` of the qubit after each collision.
    pub entropy: Option<Vec<(f64, f64)>>,
}

/// Everything produced by one scenario run.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub config: ScenarioConfig,
    pub trajectory: Trajectory,
    pub ledger: EnergyLedger,
    pub witness: BoundWitness,
    pub oracle: Option<OracleDiagnostics>,
}

/// Solve a scenario and assemble its ledger, plus oracle diagnostics when
/// enabled.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Dataset> {
    let trajectory = solve(cfg)?;
    let ledger = assemble_ledger(&trajectory, cfg.units()?)?;
    let witness = classical_bound_witness(&ledger);
    let oracle = if cfg.oracle.enabled {
        Some(run_oracle(cfg, &trajectory, cfg.oracle.dt)?)
    } else {
        None
    };
    Ok(Dataset {
        config: cfg.clone(),
        trajectory,
        ledger,
        witness,
        oracle,
    })
}

fn scenario_pulse(cfg: &ScenarioConfig) -> Result<Pulse> {
    Ok(cfg.pulse()?.unwrap_or_else(Pulse::vacuum))
}

fn solve(cfg: &ScenarioConfig) -> Result<Trajectory> {
    let grid = cfg.grid()?;
    let p = scenario_pulse(cfg)?;
    Ok(match cfg.kind {
        ScenarioKind::SinglePhoton => {
            Trajectory::SinglePhoton(integrate_single_excitation(&p, &grid, cfg.gamma)?)
        }
        _ => Trajectory::Coherent(integrate_obe(&p, cfg.initial, &grid, cfg.gamma)?),
    })
}

fn scenario_bins(cfg: &ScenarioConfig, dt: f64) -> Result<TimeBins> {
    build_time_bins(&scenario_pulse(cfg)?, (cfg.t0, cfg.t_max), dt)
}

/// Solver state at an oracle time; the two grids must be commensurate.
fn solver_z(traj: &Trajectory, t: f64) -> Result<f64> {
    let grid = traj.grid();
    let i = grid.index_of(t).ok_or_else(|| {
        Error::domain(format!(
            "oracle time {t} is not on the solver grid; make oracle_dt a multiple of dt"
        ))
    })?;
    Ok(match traj {
        Trajectory::Coherent(b) => b.states[i].z,
        Trajectory::SinglePhoton(s) => 2.0 * s.excited_population[i] - 1.0,
    })
}

fn pure_amplitudes(s: &QubitState) -> Option<[Complex64; 2]> {
    if (s.bloch_norm() - 1.0).abs() > 1e-9 {
        return None;
    }
    let pe = s.excited_population();
    let cg = (1.0 - pe).max(0.0).sqrt();
    let ce = if cg > 1e-12 {
        // ⟨σ₋⟩ = c_e c_g*.
        s.sigma_minus() / cg
    } else {
        Complex64::new(1.0, 0.0)
    };
    Some([Complex64::new(cg, 0.0), ce])
}

fn run_oracle(cfg: &ScenarioConfig, traj: &Trajectory, dt: f64) -> Result<OracleDiagnostics> {
    let bins = scenario_bins(cfg, dt)?;
    match bins.statistics {
        Statistics::Coherent => {
            let run = run_coherent_oracle(&bins, cfg.initial, cfg.oracle.n_max, cfg.gamma)?;
            let mut max_z = 0.0f64;
            for (t, s) in run.times.iter().zip(&run.states) {
                max_z = max_z.max((s.z - solver_z(traj, *t)?).abs());
            }
            let full_fock_deviation = match (cfg.oracle.full_fock, pure_amplitudes(&cfg.initial)) {
                (false, _) => None,
                (true, None) => {
                    return Err(Error::domain(
                        "the full Fock check needs a pure initial qubit state",
                    ))
                }
                (true, Some(q)) => {
                    let amps = &bins.amplitudes[..FULL_FOCK_BINS.min(bins.len())];
                    let n_max = cfg.oracle.n_max.unwrap_or(2);
                    let full = simulate_full_fock(
                        q,
                        &FieldInput::Coherent(amps.to_vec()),
                        n_max,
                        cfg.gamma,
                        dt,
                    )?;
                    let traced = two_body_marginals(q, amps, n_max, cfg.gamma, dt)?;
                    Some(max_marginal_deviation(&full.qubit_marginals, &traced))
                }
            };
            Ok(OracleDiagnostics {
                dt,
                n_max: run.n_max,
                max_z_deviation: max_z,
                max_action_reaction: run.max_action_reaction(),
                max_energy_exchange: run.max_energy_exchange(),
                input_output_deviation: run.input_output_deviation(),
                full_fock_deviation,
                entropy: None,
            })
        }
        Statistics::SinglePhoton => {
            let run = simulate_single_excitation_global(&bins, cfg.gamma)?;
            let mut max_z = 0.0f64;
            for (t, pe) in run.times.iter().zip(&run.excited_population) {
                max_z = max_z.max((2.0 * pe - 1.0 - solver_z(traj, *t)?).abs());
            }
            let sg = cfg.gamma.sqrt();
            let input_output_deviation = (0..bins.len())
                .map(|n| {
                    let xi = bins.amplitudes[n] / bins.dt.sqrt();
                    let e_mid = 0.5 * (run.excited_amplitude[n] + run.excited_amplitude[n + 1]);
                    (run.output_amplitude[n] - (xi - sg * e_mid)).norm()
                })
                .fold(0.0, f64::max);
            let full_fock_deviation = if cfg.oracle.full_fock {
                Some(single_photon_full_fock(&bins, cfg.gamma)?)
            } else {
                None
            };
            Ok(OracleDiagnostics {
                dt,
                n_max: 1,
                max_z_deviation: max_z,
                max_action_reaction: run.max_action_reaction(),
                max_energy_exchange: run.max_energy_drift(),
                input_output_deviation,
                full_fock_deviation,
                entropy: Some(
                    run.times
                        .iter()
                        .cloned()
                        .zip(run.entropy.iter().cloned())
                        .collect(),
                ),
            })
        }
    }
}

fn single_photon_full_fock(bins: &TimeBins, gamma: f64) -> Result<f64> {
    let mut head = bins.truncated(FULL_FOCK_BINS);
    let norm = head
        .amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if norm == 0.0 {
        return Err(Error::domain("no photon weight in the first bins"));
    }
    for a in &mut head.amplitudes {
        *a /= norm;
    }
    let ground = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let full = simulate_full_fock(
        ground,
        &FieldInput::SinglePhoton(head.amplitudes.clone()),
        1,
        gamma,
        head.dt,
    )?;
    let global = simulate_single_excitation_global(&head, gamma)?;
    Ok(full
        .qubit_marginals
        .iter()
        .zip(&global.excited_population)
        .map(|(rho, pe)| (rho[(1, 1)].re - pe).abs())
        .fold(0.0, f64::max))
}

fn num(v: f64) -> String {
    // Print −0 as 0 so equal data gives equal text.
    format!("{:.16e}", v + 0.0)
}

fn header(out: &mut String, kind: &str, cfg: &ScenarioConfig, columns: &[&str]) -> Result<()> {
    let _ = writeln!(out, "# wgqed {kind}");
    let _ = writeln!(out, "# format_version = {FORMAT_VERSION}");
    for line in cfg.units()?.describe() {
        let _ = writeln!(out, "# {line}");
    }
    for line in cfg.serialize().lines() {
        let _ = writeln!(out, "# config.{line}");
    }
    let _ = writeln!(out, "# columns = {}", columns.join(","));
    Ok(())
}

fn push_row(out: &mut String, row: &[f64]) {
    let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// Linear interpolation in a sorted `(t, value)` table.
fn interpolate(table: &[(f64, f64)], t: f64) -> f64 {
    let k = table.partition_point(|(x, _)| *x < t);
    if k == 0 {
        return table[0].1;
    }
    if k >= table.len() {
        return table[table.len() - 1].1;
    }
    let ((t0, v0), (t1, v1)) = (table[k - 1], table[k]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

impl Dataset {
    pub fn columns(&self) -> Vec<&'static str> {
        match &self.trajectory {
            Trajectory::Coherent(_) => COHERENT_COLUMNS.to_vec(),
            Trajectory::SinglePhoton(_) => {
                let mut c = SINGLE_PHOTON_COLUMNS.to_vec();
                if self.oracle.as_ref().is_some_and(|o| o.entropy.is_some()) {
                    c.push("S_entropy");
                }
                c
            }
        }
    }

    /// Row-major table in [`Dataset::columns`] order.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let l = &self.ledger;
        let grid = l.grid();
        (0..grid.len())
            .map(|i| {
                let t = grid.time(i);
                let tail = [
                    l.energy()[i],
                    l.work()[i],
                    l.correlation()[i],
                    l.ergotropy()[i],
                ];
                match &self.trajectory {
                    Trajectory::Coherent(b) => {
                        let s = b.states[i];
                        let (bi, bo) = (b.input_amplitude[i], b.output_amplitude[i]);
                        let mut row = vec![t, s.x, s.y, s.z, bi.re, bi.im, bo.re, bo.im];
                        row.extend(tail);
                        row.push(l.coherent_field_energy()[i]);
                        row.push(l.extractable_gain()[i]);
                        row
                    }
                    Trajectory::SinglePhoton(sp) => {
                        let (xi, xo) = (sp.input_envelope[i], sp.output_envelope[i]);
                        let mut row = vec![t, sp.excited_population[i], xi.re, xo.re, xo.im];
                        row.extend(tail);
                        row.push(l.extractable_gain()[i]);
                        if let Some(table) = self.oracle.as_ref().and_then(|o| o.entropy.as_ref()) {
                            row.push(interpolate(table, t));
                        }
                        row
                    }
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let columns = self.columns();
        let mut out = String::new();
        header(&mut out, "trajectory", &self.config, &columns)?;
        let _ = writeln!(out, "# witness.min_gap = {}", num(self.witness.min_gap));
        let _ = writeln!(out, "# witness.violation = {}", self.witness.violation);
        let _ = writeln!(
            out,
            "# ledger.balance_residual = {}",
            num(self.ledger.balance_residual())
        );
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "# oracle.dt = {}", o.dt);
            let _ = writeln!(out, "# oracle.n_max = {}", o.n_max);
            let _ = writeln!(out, "# oracle.max_z_deviation = {}", num(o.max_z_deviation));
            let _ = writeln!(
                out,
                "# oracle.max_action_reaction = {}",
                num(o.max_action_reaction)
            );
            let _ = writeln!(
                out,
                "# oracle.max_energy_exchange = {}",
                num(o.max_energy_exchange)
            );
            let _ = writeln!(
                out,
                "# oracle.input_output_deviation = {}",
                num(o.input_output_deviation)
            );
            if let Some(d) = o.full_fock_deviation {
                let _ = writeln!(out, "# oracle.full_fock_deviation = {}", num(d));
            }
        }
        out.push_str(&columns.join(","));
        out.push('\n');
        for row in self.rows() {
            push_row(&mut out, &row);
        }
        Ok(out)
    }

    pub fn summary_line(&self) -> String {
        summary(self.config.kind.name(), &self.witness)
    }
}

fn summary(scenario: &str, w: &BoundWitness) -> String {
    format!(
        "scenario={scenario} min_gap={:.6e} violation={}",
        w.min_gap, w.violation
    )
}

/// The four curves of the coherent vs single-photon comparison.
#[derive(Debug, Clone)]
pub struct Fig2Dataset {
    pub coherent: Dataset,
    pub single: Dataset,
    pub t_gamma: Vec<f64>,
    pub dwb_coherent: Vec<f64>,
    pub dwb_single: Vec<f64>,
    pub q_coherent: Vec<f64>,
    pub q_single: Vec<f64>,
}

/// Run a coherent and a single-photon scenario that share grid and envelope.
pub fn emit_fig2_dataset(
    coherent_cfg: &ScenarioConfig,
    single_cfg: &ScenarioConfig,
) -> Result<Fig2Dataset> {
    if coherent_cfg.kind != ScenarioKind::Coherent || single_cfg.kind != ScenarioKind::SinglePhoton
    {
        return Err(Error::domain(
            "fig2 needs one coherent and one single_photon config",
        ));
    }
    let same_grid = (coherent_cfg.t0, coherent_cfg.t_max, coherent_cfg.dt)
        == (single_cfg.t0, single_cfg.t_max, single_cfg.dt)
        && coherent_cfg.gamma == single_cfg.gamma
        && coherent_cfg.omega0 == single_cfg.omega0;
    if !same_grid {
        return Err(Error::domain("grid mismatch between the fig2 configs"));
    }
    if coherent_cfg.shape != single_cfg.shape || coherent_cfg.support != single_cfg.support {
        return Err(Error::domain("envelope mismatch between the fig2 configs"));
    }
    let coherent = run_scenario(coherent_cfg)?;
    let single = run_scenario(single_cfg)?;
    let grid = coherent.ledger.grid();
    Ok(Fig2Dataset {
        t_gamma: grid.times().map(|t| t * coherent_cfg.gamma).collect(),
        dwb_coherent: coherent.ledger.extractable_gain().to_vec(),
        dwb_single: single.ledger.extractable_gain().to_vec(),
        q_coherent: coherent.ledger.correlation().to_vec(),
        q_single: single.ledger.correlation().to_vec(),
        coherent,
        single,
    })
}

/// The sibling scenario for a fig2 pair: same envelope and grid, other
/// statistics.
pub fn fig2_partner(cfg: &ScenarioConfig) -> Result<ScenarioConfig> {
    let mut other = cfg.clone();
    match cfg.kind {
        ScenarioKind::Coherent => {
            other.kind = ScenarioKind::SinglePhoton;
            other.photon_number = None;
            other.initial = QubitState::GROUND;
        }
        ScenarioKind::SinglePhoton => other.kind = ScenarioKind::Coherent,
        ScenarioKind::Spontaneous => {
            return Err(Error::domain("fig2 needs a pulse; spontaneous has none"))
        }
    }
    Ok(other)
}

impl Fig2Dataset {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        header(
            &mut out,
            "fig2 coherent",
            &self.coherent.config,
            &FIG2_COLUMNS,
        )?;
        for line in self.single.config.serialize().lines() {
            let _ = writeln!(out, "# single.{line}");
        }
        out.push_str(&FIG2_COLUMNS.join(","));
        out.push('\n');
        for i in 0..self.t_gamma.len() {
            push_row(
                &mut out,
                &[
                    self.t_gamma[i],
                    self.dwb_coherent[i],
                    self.dwb_single[i],
                    self.q_coherent[i],
                    self.q_single[i],
                ],
            );
        }
        Ok(out)
    }

    /// Summary of the single-photon half, where the bound can fail.
    pub fn summary_line(&self) -> String {
        format!(
            "{} | {}",
            self.coherent.summary_line(),
            self.single.summary_line()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    /// `max_t |ΔU^q − W − Q|` of the mean-value solver.
    pub balance_residual: f64,
    /// `max |z_oracle − z_ref|` with the oracle bin width equal to `dt`.
    pub oracle_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scenario: ScenarioKind,
    pub reference_dt: f64,
    pub rows: Vec<ConvergenceRow>,
    pub balance_order: f64,
    pub oracle_order: f64,
    /// Set when either fitted order is below [`MIN_ORDER`].
    pub non_converging: bool,
}

/// Fitted orders below this count as no convergence.
pub const MIN_ORDER: f64 = 0.5;

/// Least-squares slope of `log err` against `log dt`.
pub fn fit_order(dts: &[f64], errs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = dts
        .iter()
        .zip(errs)
        .filter(|(_, e)| **e > 0.0)
        .map(|(d, e)| (d.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Ratios `err[k] / err[k+1]` between consecutive step sizes.
pub fn successive_ratios(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Energy-balance residual and oracle deviation at each step size, against a
/// reference solution on a grid eight times finer than the smallest step.
pub fn convergence_sweep(cfg: &ScenarioConfig, dts: &[f64]) -> Result<ConvergenceReport> {
    if dts.len() < 3 || dts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain(
            "convergence sweep needs at least three decreasing step sizes",
        ));
    }
    let reference_dt = dts[dts.len() - 1] / 8.0;
    let reference = solve(&cfg.with_dt(reference_dt))?;
    let mut rows = Vec::with_capacity(dts.len());
    for &dt in dts {
        let run = cfg.with_dt(dt);
        let traj = solve(&run)?;
        let ledger = assemble_ledger(&traj, cfg.units()?)?;
        let diag = run_oracle(&run, &reference, dt)?;
        rows.push(ConvergenceRow {
            dt,
            balance_residual: ledger.balance_residual(),
            oracle_deviation: diag.max_z_deviation,
        });
    }
    let d: Vec<f64> = rows.iter().map(|r| r.dt).collect();
    let balance_order = fit_order(
        &d,
        &rows.iter().map(|r| r.balance_residual).collect::<Vec<_>>(),
    );
    let oracle_order = fit_order(
        &d,
        &rows.iter().map(|r| r.oracle_deviation).collect::<Vec<_>>(),
    );
    Ok(ConvergenceReport {
        scenario: cfg.kind,
        reference_dt,
        rows,
        balance_order,
        oracle_order,
        non_converging: balance_order < MIN_ORDER || oracle_order < MIN_ORDER,
    })
}

impl ConvergenceReport {
    pub fn balance_ratios(&self) -> Vec<f64> {
        successive_ratios(
            &self
                .rows
                .iter()
                .map(|r| r.balance_residual)
                .collect::<Vec<_>>(),
        )
    }

    pub fn oracle_ratios(&self) -> Vec<f64> {
        successive_ratios(
            &self
                .rows
                .iter()
                .map(|r| r.oracle_deviation)
                .collect::<Vec<_>>(),
        )
    }

    pub fn to_csv(&self, cfg: &ScenarioConfig) -> Result<String> {
        let columns = ["dt", "balance_residual", "oracle_deviation"];
        let mut out = String::new();
        header(&mut out, "convergence", cfg, &columns)?;
        let _ = writeln!(out, "# reference_dt = {}", num(self.reference_dt));
        let _ = writeln!(out, "# balance_order = {}", num(self.balance_order));
        let _ = writeln!(out, "# oracle_order = {}", num(self.oracle_order));
        let _ = writeln!(out, "# non_converging = {}", self.non_converging);
        out.push_str(&columns.join(","));
        out.push('\n');
        for r in &self.rows {
            push_row(&mut out, &[r.dt, r.balance_residual, r.oracle_deviation]);
        }
        Ok(out)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "scenario={} balance_order={:.3} oracle_order={:.3} non_converging={}",
            self.scenario.name(),
            self.balance_order,
            self.oracle_order,
            self.non_converging
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn cfg(text: &str) -> ScenarioConfig {
        parse_config(text).unwrap()
    }

    #[test]
    fn spontaneous_decay_column() {
        let d = run_scenario(&cfg("scenario = spontaneous\nt_max = 5\n")).unwrap();
        assert_eq!(d.columns(), COHERENT_COLUMNS.to_vec());
        for row in d.rows() {
            // U_q is P_e in units of ħω₀.
            assert!((row[8] - (-row[0]).exp()).abs() < 1e-6);
            assert!(row[9].abs() < 1e-15);
        }
    }

    #[test]
    fn fig2_signs_and_witnesses() {
        let c =
            cfg("scenario = coherent\npulse = rising_exponential\nphoton_number = 1\ndt = 0.005\n");
        let s = fig2_partner(&c).unwrap();
        let f = emit_fig2_dataset(&c, &s).unwrap();
        assert!(!f.coherent.witness.violation);
        assert!(f.single.witness.violation);
        assert!(f.q_coherent.iter().all(|q| *q <= 1e-6));
        assert!(f.q_single.iter().all(|q| *q >= -1e-6));
        assert!(f.dwb_coherent.iter().all(|q| *q <= 1e-6));
        let (imax, max) = f
            .dwb_single
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc },
            );
        assert!(max >= 0.97);
        assert!(f.t_gamma[imax].abs() < 0.5);
        let i0 = f.t_gamma.iter().position(|t| t.abs() < 1e-9).unwrap();
        assert!((f.q_single[i0] - 0.993).abs() < 1e-3);
        // The single-photon curves relax to zero; the coherent ones settle on
        // the incoherently scattered energy.
        let last = f.t_gamma.len() - 1;
        assert!(f.dwb_single[last].abs() < 1e-3 && f.q_single[last].abs() < 1e-3);
        let back = last - 200;
        for v in [&f.dwb_coherent, &f.q_coherent] {
            assert!((v[last] - v[back]).abs() < 1e-3);
        }
        assert!((f.dwb_coherent[last] - f.q_coherent[last]).abs() < 1e-3);
    }

    #[test]
    fn fig2_grid_mismatch() {
        let c = cfg("scenario = coherent\npulse = rising_exponential\n");
        let mut s = fig2_partner(&c).unwrap();
        s.dt = 2e-3;
        assert!(matches!(emit_fig2_dataset(&c, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_is_deterministic_and_complete() {
        let c = cfg("scenario = single_photon\npulse = rising_exponential\ndt = 0.01\noracle = true\noracle_dt = 0.05\n");
        let a = run_scenario(&c).unwrap().to_csv().unwrap();
        let b = run_scenario(&c).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("# format_version = 1"));
        assert!(a.contains("# units."));
        assert!(a.contains("# config.scenario = single_photon"));
        assert!(a.contains("\nt,P_e,Re_xi_in,Re_xi_out,Im_xi_out,U_q,W,Q,E_q,dWB,S_entropy\n"));
        let data: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(data.len(), 1501);
        for l in data {
            assert_eq!(l.split(',').count(), 11);
        }
    }

    #[test]
    fn oracle_diagnostics_coherent() {
        let c = cfg("scenario = coherent\npulse = rising_exponential\ndt = 0.01\noracle = true\noracle_full_fock = true\n");
        let o = run_scenario(&c).unwrap().oracle.unwrap();
        assert!(o.max_z_deviation < 5e-2);
        assert!(o.max_action_reaction < 1e-8);
        assert!(o.full_fock_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn oracle_diagnostics_single_photon() {
        let c = cfg("scenario = single_photon\npulse = rising_exponential\ndt = 0.01\noracle = true\noracle_full_fock = true\n");
        let o = run_scenario(&c).unwrap().oracle.unwrap();
        assert!(o.max_z_deviation < 5e-2);
        assert!(o.input_output_deviation < 5e-2);
        assert!(o.full_fock_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn order_fit() {
        let d = [0.1, 0.05, 0.025];
        assert!((fit_order(&d, &[1e-4, 6.25e-6, 3.90625e-7]) - 4.0).abs() < 1e-12);
        assert!(fit_order(&d, &[1e-3, 1e-3, 1e-3]).abs() < 1e-12);
    }
}
