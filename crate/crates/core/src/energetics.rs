//! Energy ledgers: qubit energy, work, correlation energy, ergotropy and the
//! energy Bob can extract locally, plus the classical ergotropy bound check.

use crate::coherent::{self, BlochTrajectory};
use crate::error::{Error, Result};
use crate::integrate;
use crate::pulse::Statistics;
use crate::qubit::{ergotropy_unchecked, QubitState};
use crate::single_photon::{self, SingleExcitationTrajectory};
use crate::units::{TimeGrid, UnitsConvention, BLOCH_TOLERANCE};

/// Margin below zero that `W − ΔE_q` may reach before it counts as a
/// violation of the classical ergotropy bound.
pub const WITNESS_TOLERANCE: f64 = 1e-6;

/// Output of one of the analytic solvers.
#[derive(Debug, Clone)]
pub enum Trajectory {
    Coherent(BlochTrajectory),
    SinglePhoton(SingleExcitationTrajectory),
}

impl Trajectory {
    pub fn grid(&self) -> &TimeGrid {
        match self {
            Trajectory::Coherent(t) => &t.grid,
            Trajectory::SinglePhoton(t) => &t.grid,
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            Trajectory::Coherent(t) => t.gamma,
            Trajectory::SinglePhoton(t) => t.gamma,
        }
    }

    pub fn statistics(&self) -> Statistics {
        match self {
            Trajectory::Coherent(_) => Statistics::Coherent,
            Trajectory::SinglePhoton(_) => Statistics::SinglePhoton,
        }
    }

    pub fn qubit_states(&self) -> Vec<QubitState> {
        match self {
            Trajectory::Coherent(t) => t.states.clone(),
            Trajectory::SinglePhoton(t) => t.states(),
        }
    }
}

/// Energy of the field's mean-amplitude component at every grid point:
/// what has left the qubit coherently plus what is still incoming.
pub fn coherent_field_energy_series(traj: &Trajectory) -> Vec<f64> {
    let t = match traj {
        Trajectory::Coherent(t) => t,
        Trajectory::SinglePhoton(t) => return vec![0.0; t.grid.len()],
    };
    let passed_in =
        integrate::cumulative(&t.grid, t.pieces(), |i, p| t.input_from(i, p).norm_sqr());
    let passed_out =
        integrate::cumulative(&t.grid, t.pieces(), |i, p| t.output_from(i, p).norm_sqr());
    let incoming = t.pulse.intensity_between(t.grid.t0(), f64::INFINITY);
    passed_out
        .iter()
        .zip(&passed_in)
        .map(|(out, inn)| out + (incoming - inn))
        .collect()
}

/// Coherent field energy at time `t` (linear interpolation between grid
/// points). Pulse energy beyond the end of the grid counts as incoming.
pub fn coherent_field_energy(traj: &Trajectory, t: f64) -> Result<f64> {
    let grid = traj.grid();
    if !grid.contains(t) {
        return Err(Error::domain(format!(
            "t = {t} lies outside the grid [{}, {}]",
            grid.t0(),
            grid.t_max()
        )));
    }
    let series = coherent_field_energy_series(traj);
    Ok(interpolate(grid, &series, t))
}

fn interpolate(grid: &TimeGrid, values: &[f64], t: f64) -> f64 {
    if let Some(i) = grid.index_of(t) {
        return values[i];
    }
    let x = ((t - grid.t0()) / grid.dt()).clamp(0.0, grid.n_steps() as f64);
    let i = (x.floor() as usize).min(grid.n_steps() - 1);
    let frac = x - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

/// Time series of every energetic quantity on a common grid, in ħω₀.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    grid: TimeGrid,
    statistics: Statistics,
    units: UnitsConvention,
    energy: Vec<f64>,
    work: Vec<f64>,
    correlation: Vec<f64>,
    ergotropy: Vec<f64>,
    coherent_field_energy: Vec<f64>,
    extractable_gain: Vec<f64>,
    balance_residual: f64,
}

impl EnergyLedger {
    /// Build a ledger from raw series. Only shapes are checked here; use
    /// [`EnergyLedger::check_invariants`] for the physics.
    #[allow(clippy::too_many_arguments)]
    pub fn from_series(
        grid: TimeGrid,
        statistics: Statistics,
        units: UnitsConvention,
        energy: Vec<f64>,
        work: Vec<f64>,
        correlation: Vec<f64>,
        ergotropy: Vec<f64>,
        coherent_field_energy: Vec<f64>,
    ) -> Result<Self> {
        let n = grid.len();
        for (name, len) in [
            ("energy", energy.len()),
            ("work", work.len()),
            ("correlation", correlation.len()),
            ("ergotropy", ergotropy.len()),
            ("coherent_field_energy", coherent_field_energy.len()),
        ] {
            if len != n {
                return Err(Error::domain(format!(
                    "grid mismatch: series `{name}` has {len} samples, grid has {n}"
                )));
            }
        }
        let extractable_gain = ergotropy
            .iter()
            .zip(&work)
            .map(|(e, w)| (e - ergotropy[0]) - w)
            .collect();
        let mut ledger = EnergyLedger {
            grid,
            statistics,
            units,
            energy,
            work,
            correlation,
            ergotropy,
            coherent_field_energy,
            extractable_gain,
            balance_residual: 0.0,
        };
        ledger.balance_residual = energy_balance_residual(&ledger);
        Ok(ledger)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn units(&self) -> &UnitsConvention {
        &self.units
    }

    /// Qubit energy `U_q(t)`.
    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    /// Cumulative work `W(t)` received by the qubit.
    pub fn work(&self) -> &[f64] {
        &self.work
    }

    /// Cumulative correlation energy `Q(t)`.
    pub fn correlation(&self) -> &[f64] {
        &self.correlation
    }

    /// Qubit ergotropy `E_q(t)`.
    pub fn ergotropy(&self) -> &[f64] {
        &self.ergotropy
    }

    /// Energy of the field's coherent component, `E_f_coh(t)`.
    pub fn coherent_field_energy(&self) -> &[f64] {
        &self.coherent_field_energy
    }

    /// `ΔW_B(t) = ΔE_q(t) − W(t)`.
    pub fn extractable_gain(&self) -> &[f64] {
        &self.extractable_gain
    }

    pub fn balance_residual(&self) -> f64 {
        self.balance_residual
    }

    pub fn balance_tolerance(&self) -> f64 {
        self.units.balance_tolerance(self.grid.dt())
    }

    /// `W_B(t) = E_q(t) + E_f_coh(t)`.
    pub fn local_extractable_work(&self) -> Vec<f64> {
        self.ergotropy
            .iter()
            .zip(&self.coherent_field_energy)
            .map(|(e, f)| e + f)
            .collect()
    }

    /// Check the ledger's physical consistency relations.
    pub fn check_invariants(&self) -> Result<()> {
        let tol = self.balance_tolerance();
        let limit = 100.0 * tol;
        if !(self.balance_residual <= limit) {
            return Err(Error::Inconsistency {
                residual: self.balance_residual,
                limit,
            });
        }
        if let Some(i) =
            (0..self.grid.len()).find(|&i| self.ergotropy[i] > self.energy[i] + BLOCH_TOLERANCE)
        {
            return Err(Error::Numerical(format!(
                "ergotropy {} exceeds energy {} at t = {}",
                self.ergotropy[i],
                self.energy[i],
                self.grid.time(i)
            )));
        }
        let f0 = self.coherent_field_energy[0];
        let field_mismatch = self
            .work
            .iter()
            .zip(&self.coherent_field_energy)
            .map(|(w, f)| (w + (f - f0)).abs())
            .fold(0.0, f64::max);
        if field_mismatch > limit {
            return Err(Error::Inconsistency {
                residual: field_mismatch,
                limit,
            });
        }
        let wb = self.local_extractable_work();
        let gain_mismatch = wb
            .iter()
            .zip(&self.extractable_gain)
            .map(|(w, g)| ((w - wb[0]) - g).abs())
            .fold(0.0, f64::max);
        if gain_mismatch > limit {
            return Err(Error::Inconsistency {
                residual: gain_mismatch,
                limit,
            });
        }
        Ok(())
    }
}

/// Assemble and verify the ledger of a solved scenario.
pub fn assemble_ledger(traj: &Trajectory, units: UnitsConvention) -> Result<EnergyLedger> {
    if (traj.gamma() - units.gamma).abs() > 1e-15 * units.gamma {
        return Err(Error::domain("trajectory and units disagree on gamma"));
    }
    let states = traj.qubit_states();
    let energy: Vec<f64> = states.iter().map(QubitState::excited_population).collect();
    let ergotropy: Vec<f64> = states.iter().map(ergotropy_unchecked).collect();
    let (work, correlation) = match traj {
        Trajectory::Coherent(t) => coherent::cumulative_flows(t),
        Trajectory::SinglePhoton(t) => {
            let en = single_photon::single_photon_energetics(t);
            (en.work, en.correlation)
        }
    };
    let field = coherent_field_energy_series(traj);
    let ledger = EnergyLedger::from_series(
        *traj.grid(),
        traj.statistics(),
        units,
        energy,
        work,
        correlation,
        ergotropy,
        field,
    )?;
    ledger.check_invariants()?;
    Ok(ledger)
}

/// `max_t |ΔU_q(t) − W(t) − Q(t)|`.
pub fn energy_balance_residual(ledger: &EnergyLedger) -> f64 {
    let u0 = ledger.energy[0];
    ledger
        .energy
        .iter()
        .zip(&ledger.work)
        .zip(&ledger.correlation)
        .map(|((u, w), q)| ((u - u0) - w - q).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundWitness {
    /// `min_t [W(t) − ΔE_q(t)]`.
    pub min_gap: f64,
    pub violation: bool,
    pub violation_times: Vec<f64>,
}

/// Test `W(t) ≥ ΔE_q(t)`, which holds for every coherent input.
pub fn classical_bound_witness(ledger: &EnergyLedger) -> BoundWitness {
    let mut min_gap = f64::INFINITY;
    let mut violation_times = Vec::new();
    for (i, gain) in ledger.extractable_gain.iter().enumerate() {
        let gap = -gain;
        min_gap = min_gap.min(gap);
        if gap < -WITNESS_TOLERANCE {
            violation_times.push(ledger.grid.time(i));
        }
    }
    BoundWitness {
        // `+ 0.0` turns a −0 gap into +0.
        min_gap: min_gap + 0.0,
        violation: min_gap < -WITNESS_TOLERANCE,
        violation_times,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::integrate_obe;
    use crate::pulse::{Pulse, Shape};
    use crate::single_photon::integrate_single_excitation;
    use approx::assert_abs_diff_eq;

    const RISING: Shape = Shape::RisingExponential { rate: 1.0 };

    fn fig_grid() -> TimeGrid {
        TimeGrid::new(-5.0, 10.0, 1e-3).unwrap()
    }

    fn coherent_ledger(p: &Pulse, s0: QubitState, grid: &TimeGrid) -> (Trajectory, EnergyLedger) {
        let traj = Trajectory::Coherent(integrate_obe(p, s0, grid, 1.0).unwrap());
        let ledger = assemble_ledger(&traj, UnitsConvention::default()).unwrap();
        (traj, ledger)
    }

    #[test]
    fn ground_state_vacuum_is_all_zero() {
        let (_, l) = coherent_ledger(
            &Pulse::vacuum(),
            QubitState::GROUND,
            &TimeGrid::new(0.0, 2.0, 1e-2).unwrap(),
        );
        for series in [
            l.energy(),
            l.work(),
            l.correlation(),
            l.ergotropy(),
            l.coherent_field_energy(),
            l.extractable_gain(),
        ] {
            assert!(series.iter().all(|v| *v == 0.0));
        }
        let w = classical_bound_witness(&l);
        assert_eq!(w.min_gap, 0.0);
        assert!(!w.violation);
    }

    #[test]
    fn field_energy_before_interaction_is_photon_number() {
        let p = Pulse::coherent_with_photons(RISING, (-5.0, 0.0), 1.0).unwrap();
        let (traj, _) = coherent_ledger(&p, QubitState::GROUND, &fig_grid());
        assert_abs_diff_eq!(
            coherent_field_energy(&traj, -5.0).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert!(coherent_field_energy(&traj, 11.0).is_err());
    }

    #[test]
    fn spontaneous_field_energy_from_plus() {
        let grid = TimeGrid::new(0.0, 30.0, 1e-3).unwrap();
        let (traj, l) = coherent_ledger(&Pulse::vacuum(), QubitState::PLUS, &grid);
        assert_abs_diff_eq!(
            coherent_field_energy(&traj, 30.0).unwrap(),
            0.25,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(*l.work().last().unwrap(), -0.25, epsilon = 1e-10);
        assert!(coherent_field_energy(&traj, 0.0005).unwrap() > 0.0);
    }

    #[test]
    fn single_photon_ledger_and_violation() {
        let p = Pulse::single_photon(RISING, (-5.0, 0.0)).unwrap();
        let traj =
            Trajectory::SinglePhoton(integrate_single_excitation(&p, &fig_grid(), 1.0).unwrap());
        let l = assemble_ledger(&traj, UnitsConvention::default()).unwrap();
        let i0 = fig_grid().index_of(0.0).unwrap();
        let expected = 2.0 * (1.0 - (-5.0f64).exp()) - 1.0;
        assert_abs_diff_eq!(l.extractable_gain()[i0], expected, epsilon = 1e-9);
        assert!(coherent_field_energy(&traj, 1.0).unwrap() == 0.0);
        let w = classical_bound_witness(&l);
        assert!(w.violation);
        assert_abs_diff_eq!(w.min_gap, -expected, epsilon = 1e-9);
        assert!(w.violation_times.contains(&fig_grid().time(i0)));
    }

    #[test]
    fn coherent_bound_holds() {
        let p = Pulse::coherent_with_photons(RISING, (-5.0, 0.0), 1.0).unwrap();
        let (_, l) = coherent_ledger(&p, QubitState::GROUND, &fig_grid());
        assert!(l.extractable_gain().iter().all(|g| *g <= WITNESS_TOLERANCE));
        let w = classical_bound_witness(&l);
        assert!(!w.violation && w.min_gap >= -WITNESS_TOLERANCE);
        assert!(l.correlation().iter().all(|q| *q <= WITNESS_TOLERANCE));
    }

    #[test]
    fn shifted_work_shows_up_in_residual() {
        let p = Pulse::coherent_with_photons(RISING, (-5.0, 0.0), 1.0).unwrap();
        let (_, l) = coherent_ledger(&p, QubitState::GROUND, &fig_grid());
        let mut work = l.work().to_vec();
        work.iter_mut().skip(1).for_each(|w| *w += 0.1);
        let bad = EnergyLedger::from_series(
            *l.grid(),
            l.statistics(),
            *l.units(),
            l.energy().to_vec(),
            work,
            l.correlation().to_vec(),
            l.ergotropy().to_vec(),
            l.coherent_field_energy().to_vec(),
        )
        .unwrap();
        assert_abs_diff_eq!(energy_balance_residual(&bad), 0.1, epsilon = 1e-6);
        assert!(matches!(
            bad.check_invariants(),
            Err(Error::Inconsistency { .. })
        ));
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        let short = vec![0.0; 5];
        let full = vec![0.0; g.len()];
        let r = EnergyLedger::from_series(
            g,
            Statistics::Coherent,
            UnitsConvention::default(),
            full.clone(),
            short,
            full.clone(),
            full.clone(),
            full,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
