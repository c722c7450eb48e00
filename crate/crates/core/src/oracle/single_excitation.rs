//! Exact global evolution in the single-excitation sector.
//!
//! The joint pure state is `c_v|g, vac⟩ + c_e|e, vac⟩ + Σ_n c_n|g, 1_n⟩`.
//! A collision with bin `n` rotates the pair `(c_e, c_n)` by the angle
//! `√(γΔt)`; all other amplitudes are spectators.

use num_complex::Complex64;

use super::bins::TimeBins;
use super::linalg::{c, CMatrix, CVector};
use super::two_body::{self, FlowDecomposition};
use crate::error::{Error, Result};
use crate::pulse::Statistics;
use crate::qubit::QubitState;

/// Norm drift beyond which the run is aborted.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSingleExcitationState {
    /// `|g, vac⟩` amplitude (zero for a single-photon input).
    pub vacuum: Complex64,
    /// `|e, vac⟩` amplitude.
    pub excited: Complex64,
    /// `|g, 1_n⟩` amplitudes.
    pub bins: Vec<Complex64>,
}

impl GlobalSingleExcitationState {
    /// Ground-state qubit facing a photon spread over `weights`.
    pub fn incoming(weights: &[Complex64]) -> Self {
        GlobalSingleExcitationState {
            vacuum: c(0.0),
            excited: c(0.0),
            bins: weights.to_vec(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.vacuum.norm_sqr()
            + self.excited.norm_sqr()
            + self.bins.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// Total excitation number `⟨σ₊σ₋⟩ + Σ⟨a_n†a_n⟩`.
    pub fn excitation_number(&self) -> f64 {
        self.excited.norm_sqr() + self.bins.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// `⟨σ₋⟩ = c_v* c_e`: the only field configuration shared by the two
    /// qubit levels is the vacuum.
    pub fn sigma_minus(&self) -> Complex64 {
        self.vacuum.conj() * self.excited
    }

    pub fn qubit_state(&self) -> QubitState {
        QubitState::from_dipole(self.sigma_minus(), 2.0 * self.excited.norm_sqr() - 1.0)
    }

    /// Reduced state of qubit ⊗ bin `n` (one Fock level per bin).
    pub fn two_body_state(&self, n: usize) -> CMatrix {
        // Other bins empty: c_v|g0⟩ + c_n|g1⟩ + c_e|e0⟩. Other bins occupied:
        // the qubit is in |g⟩ and bin n is empty.
        let phi = CVector::from_vec(vec![self.vacuum, self.bins[n], self.excited, c(0.0)]);
        let elsewhere: f64 = self
            .bins
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != n)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let mut rho = &phi * phi.adjoint();
        rho[(0, 0)] += c(elsewhere);
        rho
    }

    fn collide(&mut self, n: usize, theta: f64) {
        let (ce, cn) = (self.excited, self.bins[n]);
        self.excited = theta.cos() * ce + theta.sin() * cn;
        self.bins[n] = theta.cos() * cn - theta.sin() * ce;
    }
}

#[derive(Debug, Clone)]
pub struct SingleExcitationOracleRun {
    pub gamma: f64,
    pub dt: f64,
    /// `t0` followed by the end time of every collision.
    pub times: Vec<f64>,
    pub excited_population: Vec<f64>,
    /// Qubit von Neumann entropy (nats) at each of `times`.
    pub entropy: Vec<f64>,
    pub sigma_minus: Vec<Complex64>,
    /// `|e, vac⟩` amplitude at each of `times`.
    pub excited_amplitude: Vec<Complex64>,
    pub excitation_number: Vec<f64>,
    /// `|ΔU^q + ΔU^f|` per collision.
    pub energy_drift: Vec<f64>,
    /// Scattered wavefunction per bin, `c_n/√Δt` after its collision.
    pub output_amplitude: Vec<Complex64>,
    pub flows: Vec<FlowDecomposition>,
    pub final_state: GlobalSingleExcitationState,
}

impl SingleExcitationOracleRun {
    pub fn max_action_reaction(&self) -> f64 {
        self.flows
            .iter()
            .map(|f| (f.work_qubit + f.work_field).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_abs_sigma_minus(&self) -> f64 {
        self.sigma_minus
            .iter()
            .map(|s| s.norm())
            .fold(0.0, f64::max)
    }
}

/// Scatter a single photon, bin by bin, on a ground-state qubit.
pub fn simulate_single_excitation_global(
    bins: &TimeBins,
    gamma: f64,
) -> Result<SingleExcitationOracleRun> {
    if bins.statistics != Statistics::SinglePhoton {
        return Err(Error::domain(
            "single-excitation oracle needs single-photon bin weights",
        ));
    }
    if !(gamma > 0.0) {
        return Err(Error::domain("gamma must be positive"));
    }
    let theta = (gamma * bins.dt).sqrt();
    let coupling = two_body::coupling_hamiltonian(gamma, bins.dt, 1);
    let sdt = bins.dt.sqrt();
    let mut psi = GlobalSingleExcitationState::incoming(&bins.amplitudes);
    let norm0 = psi.norm_sqr();

    let record = |psi: &GlobalSingleExcitationState| {
        let q = psi.qubit_state();
        (
            q.excited_population(),
            q.entropy(),
            psi.sigma_minus(),
            psi.excitation_number(),
        )
    };
    let (pe, s, sm, ex) = record(&psi);
    let mut run = SingleExcitationOracleRun {
        gamma,
        dt: bins.dt,
        times: vec![bins.t0],
        excited_population: vec![pe],
        entropy: vec![s],
        sigma_minus: vec![sm],
        excited_amplitude: vec![psi.excited],
        excitation_number: vec![ex],
        energy_drift: Vec::with_capacity(bins.len()),
        output_amplitude: Vec::with_capacity(bins.len()),
        flows: Vec::with_capacity(bins.len()),
        final_state: psi.clone(),
    };

    for n in 0..bins.len() {
        let pre = psi.two_body_state(n);
        let before = psi.excited.norm_sqr() + psi.bins[n].norm_sqr();
        psi.collide(n, theta);
        let post = psi.two_body_state(n);
        let after = psi.excited.norm_sqr() + psi.bins[n].norm_sqr();
        run.energy_drift.push((after - before).abs());
        run.flows
            .push(two_body::decompose_energy_flows(&pre, &post, &coupling));
        run.output_amplitude.push(psi.bins[n] / sdt);

        let drift = (psi.norm_sqr() - norm0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::Numerical(format!(
                "global norm drifted by {drift:e} at bin {n}"
            )));
        }
        let (pe, s, sm, ex) = record(&psi);
        run.times.push(bins.end(n));
        run.excited_population.push(pe);
        run.entropy.push(s);
        run.sigma_minus.push(sm);
        run.excited_amplitude.push(psi.excited);
        run.excitation_number.push(ex);
    }
    run.final_state = psi;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::bins::build_time_bins;
    use crate::pulse::{Pulse, Shape};
    use approx::assert_abs_diff_eq;

    fn rising_bins(dt: f64) -> TimeBins {
        let p = Pulse::single_photon(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0)).unwrap();
        build_time_bins(&p, (-5.0, 10.0), dt).unwrap()
    }

    #[test]
    fn sector_structure() {
        let run = simulate_single_excitation_global(&rising_bins(1e-2), 1.0).unwrap();
        assert_eq!(run.max_abs_sigma_minus(), 0.0);
        for ex in &run.excitation_number {
            assert_abs_diff_eq!(*ex, 1.0, epsilon = 1e-12);
        }
        assert!(run.max_energy_drift() < 1e-12);
        assert!(run.max_action_reaction() < 1e-12);
    }

    #[test]
    fn inversion_near_analytic() {
        let bins = rising_bins(1e-2);
        let run = simulate_single_excitation_global(&bins, 1.0).unwrap();
        let i0 = run.times.iter().position(|t| t.abs() < 1e-9).unwrap();
        let analytic = 1.0 - (-5.0f64).exp();
        assert!((run.excited_population[i0] - analytic).abs() < 2e-2);
    }

    #[test]
    fn entropy_rises_and_falls() {
        let run = simulate_single_excitation_global(&rising_bins(1e-2), 1.0).unwrap();
        for (pe, s) in run.excited_population.iter().zip(&run.entropy) {
            if *pe > 1e-12 && *pe < 1.0 - 1e-12 {
                assert!(*s > 0.0);
            }
        }
        assert!(*run.entropy.last().unwrap() < 1e-3);
    }

    #[test]
    fn two_body_state_is_a_density_matrix() {
        let bins = rising_bins(0.1);
        let mut psi = GlobalSingleExcitationState::incoming(&bins.amplitudes);
        for n in 0..20 {
            psi.collide(n, 0.1f64.sqrt());
        }
        let rho = psi.two_body_state(25);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert!(crate::oracle::linalg::min_eigenvalue(&rho) > -1e-14);
    }

    #[test]
    fn rejects_coherent_bins() {
        let mut bins = rising_bins(0.1);
        bins.statistics = Statistics::Coherent;
        assert!(simulate_single_excitation_global(&bins, 1.0).is_err());
    }
}
