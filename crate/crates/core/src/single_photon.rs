//! Exact scattering of a one-photon wavepacket on a ground-state qubit.
//!
//! In the single-excitation sector the joint state is
//! `e(t)|e, vac⟩ + ∫ φ(t, τ)|g, 1_τ⟩ dτ`; the excited amplitude obeys
//! `de/dt = −(γ/2) e + √γ ξ(t)` with `e(t0) = 0`, and the scattered
//! wavefunction is `ξ_out = ξ − √γ e`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{self, rk4};
use crate::pulse::{Pulse, Statistics};
use crate::qubit::QubitState;
use crate::units::{Piece, TimeGrid, BLOCH_TOLERANCE};

#[derive(Debug, Clone)]
pub struct SingleExcitationTrajectory {
    pub grid: TimeGrid,
    pub gamma: f64,
    pub pulse: Pulse,
    pub e_amp: Vec<Complex64>,
    pub input_envelope: Vec<Complex64>,
    pub output_envelope: Vec<Complex64>,
    pub excited_population: Vec<f64>,
    pieces: Vec<Piece>,
}

impl SingleExcitationTrajectory {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn states(&self) -> Vec<QubitState> {
        self.excited_population
            .iter()
            .map(|pe| QubitState::from_dipole(Complex64::new(0.0, 0.0), 2.0 * pe - 1.0))
            .collect()
    }

    pub(crate) fn input_from(&self, i: usize, probe: f64) -> Complex64 {
        self.pulse.evaluate_from(self.grid.time(i), probe)
    }

    pub(crate) fn output_from(&self, i: usize, probe: f64) -> Complex64 {
        self.input_from(i, probe) - self.gamma.sqrt() * self.e_amp[i]
    }

    /// `P_e(t) + ∫_{t0}^{t}|ξ_out|² + ∫_{t}^{∞}|ξ|²`, which must stay at 1.
    pub fn excitation_budget(&self) -> Vec<f64> {
        let passed_in = integrate::cumulative(&self.grid, &self.pieces, |i, p| {
            self.input_from(i, p).norm_sqr()
        });
        let passed_out = integrate::cumulative(&self.grid, &self.pieces, |i, p| {
            self.output_from(i, p).norm_sqr()
        });
        let incoming = self.pulse.intensity_between(self.grid.t0(), f64::INFINITY);
        (0..self.grid.len())
            .map(|i| self.excited_population[i] + passed_out[i] + (incoming - passed_in[i]))
            .collect()
    }
}

/// Integrate the excited amplitude for an arbitrary input envelope, starting
/// from the ground state. The envelope need not be normalized.
pub(crate) fn solve_amplitude(
    envelope: impl Fn(f64, f64) -> Complex64,
    grid: &TimeGrid,
    gamma: f64,
) -> Result<Vec<Complex64>> {
    let sg = gamma.sqrt();
    rk4(
        grid,
        Complex64::new(0.0, 0.0),
        |t, probe, e| -0.5 * gamma * e + sg * envelope(t, probe),
        |_, t, e| {
            let pe = e.norm_sqr();
            if !pe.is_finite() || pe > 1.0 + BLOCH_TOLERANCE {
                return Err(Error::SolverDivergence { t, norm: pe });
            }
            Ok(if pe > 1.0 { e / pe.sqrt() } else { e })
        },
    )
}

/// Scatter a normalized single-photon pulse on a qubit starting in `|g⟩`.
pub fn integrate_single_excitation(
    p: &Pulse,
    grid: &TimeGrid,
    gamma: f64,
) -> Result<SingleExcitationTrajectory> {
    if p.statistics() != Statistics::SinglePhoton {
        return Err(Error::domain(
            "integrate_single_excitation requires a single-photon pulse",
        ));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    p.validate_statistics()?;
    let pieces = grid.pieces(&p.breakpoints())?;
    let e_amp = solve_amplitude(|t, probe| p.evaluate_from(t, probe), grid, gamma)?;
    let input_envelope: Vec<Complex64> = grid.times().map(|t| p.evaluate(t)).collect();
    let output_envelope = input_envelope
        .iter()
        .zip(&e_amp)
        .map(|(x, e)| x - gamma.sqrt() * e)
        .collect();
    let excited_population = e_amp.iter().map(|e| e.norm_sqr()).collect();
    Ok(SingleExcitationTrajectory {
        grid: *grid,
        gamma,
        pulse: p.clone(),
        e_amp,
        input_envelope,
        output_envelope,
        excited_population,
        pieces,
    })
}

/// Reduced qubit state for excited amplitude `e`: diagonal, `z = 2|e|² − 1`.
pub fn qubit_state_from_amplitude(e: Complex64) -> Result<QubitState> {
    if !(e.norm() <= 1.0 + BLOCH_TOLERANCE) {
        return Err(Error::domain(format!(
            "excited amplitude |e| = {} exceeds 1",
            e.norm()
        )));
    }
    let pe = e.norm_sqr().min(1.0);
    Ok(QubitState {
        x: 0.0,
        y: 0.0,
        z: 2.0 * pe - 1.0,
    })
}

/// Rate of change of qubit energy, all of it correlation flow:
/// `dP_e/dt = −γ|e|² + 2√γ Re[e* ξ]`.
pub fn correlation_flow(e: Complex64, xi: Complex64, gamma: f64) -> f64 {
    -gamma * e.norm_sqr() + 2.0 * gamma.sqrt() * (e.conj() * xi).re
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonEnergetics {
    pub work: Vec<f64>,
    pub correlation: Vec<f64>,
}

/// Work vanishes identically (no mean field); the correlation energy is the
/// integrated correlation flow, equal to `P_e(t)` up to integrator error.
pub fn single_photon_energetics(traj: &SingleExcitationTrajectory) -> SinglePhotonEnergetics {
    let g = traj.gamma;
    let correlation = integrate::cumulative(&traj.grid, &traj.pieces, |i, probe| {
        correlation_flow(traj.e_amp[i], traj.input_from(i, probe), g)
    });
    SinglePhotonEnergetics {
        work: vec![0.0; traj.grid.len()],
        correlation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::Shape;
    use approx::assert_abs_diff_eq;

    const RISING: Shape = Shape::RisingExponential { rate: 1.0 };

    fn fig_grid() -> TimeGrid {
        TimeGrid::new(-5.0, 10.0, 1e-3).unwrap()
    }

    #[test]
    fn renormalized_inversion_at_pulse_end() {
        let p = Pulse::single_photon(RISING, (-5.0, 0.0)).unwrap();
        let g = fig_grid();
        let traj = integrate_single_excitation(&p, &g, 1.0).unwrap();
        let i0 = g.index_of(0.0).unwrap();
        assert_abs_diff_eq!(
            traj.excited_population[i0],
            1.0 - (-5.0f64).exp(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn unrenormalized_inversion_at_pulse_end() {
        let p = Pulse::coherent(RISING, (-5.0, 0.0)).unwrap();
        let g = fig_grid();
        let e = solve_amplitude(|t, probe| p.evaluate_from(t, probe), &g, 1.0).unwrap();
        let i0 = g.index_of(0.0).unwrap();
        let expected = (1.0 - (-5.0f64).exp()).powi(2);
        assert_abs_diff_eq!(e[i0].norm_sqr(), expected, epsilon = 1e-10);
    }

    #[test]
    fn free_decay_after_pulse() {
        let p = Pulse::single_photon(RISING, (-5.0, 0.0)).unwrap();
        let g = fig_grid();
        let traj = integrate_single_excitation(&p, &g, 1.0).unwrap();
        let i0 = g.index_of(0.0).unwrap();
        let pe0 = traj.excited_population[i0];
        for i in (i0 + 1..g.len()).step_by(500) {
            let t = g.time(i);
            assert_abs_diff_eq!(
                traj.excited_population[i],
                pe0 * (-t).exp(),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                traj.output_envelope[i].re,
                -traj.e_amp[i].re,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn budget_is_conserved() {
        let p = Pulse::single_photon(
            Shape::Gaussian {
                center: 0.0,
                width: 1.0,
            },
            (-5.0, 5.0),
        )
        .unwrap();
        let traj = integrate_single_excitation(&p, &fig_grid(), 1.0).unwrap();
        for b in traj.excitation_budget() {
            assert_abs_diff_eq!(b, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn work_is_zero_and_correlation_tracks_population() {
        let p = Pulse::single_photon(RISING, (-5.0, 0.0)).unwrap();
        let traj = integrate_single_excitation(&p, &fig_grid(), 1.0).unwrap();
        let en = single_photon_energetics(&traj);
        assert!(en.work.iter().all(|w| *w == 0.0));
        for (q, pe) in en.correlation.iter().zip(&traj.excited_population) {
            assert_abs_diff_eq!(*q, *pe, epsilon = 1e-9);
        }
        assert!(en.correlation.last().unwrap().abs() < 1e-4);
    }

    #[test]
    fn amplitude_to_state() {
        assert_eq!(
            qubit_state_from_amplitude(Complex64::new(1.0, 0.0)).unwrap(),
            QubitState::EXCITED
        );
        assert_eq!(
            qubit_state_from_amplitude(Complex64::new(0.0, 0.0)).unwrap(),
            QubitState::GROUND
        );
        let half = qubit_state_from_amplitude(Complex64::new(0.5f64.sqrt(), 0.0)).unwrap();
        assert_abs_diff_eq!(half.z, 0.0, epsilon = 1e-15);
        assert!(qubit_state_from_amplitude(Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn rejects_coherent_pulse() {
        let p = Pulse::coherent(RISING, (-5.0, 0.0)).unwrap();
        assert!(matches!(
            integrate_single_excitation(&p, &fig_grid(), 1.0),
            Err(Error::Domain(_))
        ));
    }
}
