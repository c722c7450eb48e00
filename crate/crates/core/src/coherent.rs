//! Mean-field dynamics of the qubit under a resonant coherent pulse.
//!
//! With `s = ⟨σ₋⟩` in the rotating frame and `β(t)` the input amplitude:
//!
//! ```text
//! ds/dt = −(γ/2) s − √γ β z
//! dz/dt = −γ (1 + z) + 4 √γ Re[β* s]
//! ```
//!
//! and the output amplitude obeys `β_out = β − √γ s`.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{self, rk4};
use crate::pulse::{Pulse, Statistics};
use crate::qubit::QubitState;
use crate::units::{Piece, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bloch {
    s: Complex64,
    z: f64,
}

impl Add for Bloch {
    type Output = Bloch;
    fn add(self, o: Bloch) -> Bloch {
        Bloch {
            s: self.s + o.s,
            z: self.z + o.z,
        }
    }
}

impl Mul<f64> for Bloch {
    type Output = Bloch;
    fn mul(self, k: f64) -> Bloch {
        Bloch {
            s: self.s * k,
            z: self.z * k,
        }
    }
}

fn obe_rhs(gamma: f64, beta: Complex64, y: Bloch) -> Bloch {
    let sg = gamma.sqrt();
    Bloch {
        s: -0.5 * gamma * y.s - sg * beta * y.z,
        z: -gamma * (1.0 + y.z) + 4.0 * sg * (beta.conj() * y.s).re,
    }
}

/// Solution of the optical Bloch equations sampled on a grid.
#[derive(Debug, Clone)]
pub struct BlochTrajectory {
    pub grid: TimeGrid,
    pub gamma: f64,
    pub pulse: Pulse,
    pub states: Vec<QubitState>,
    pub input_amplitude: Vec<Complex64>,
    pub output_amplitude: Vec<Complex64>,
    pieces: Vec<Piece>,
}

impl BlochTrajectory {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times().collect()
    }

    /// Input amplitude at grid point `i`, taken from the side of `probe`.
    pub(crate) fn input_from(&self, i: usize, probe: f64) -> Complex64 {
        self.pulse.evaluate_from(self.grid.time(i), probe)
    }

    pub(crate) fn output_from(&self, i: usize, probe: f64) -> Complex64 {
        self.input_from(i, probe) - self.gamma.sqrt() * self.states[i].sigma_minus()
    }

    /// Largest `|β|²/γ` over the run: the classical-limit diagnostic.
    pub fn drive_strength(&self) -> f64 {
        self.input_amplitude
            .iter()
            .map(|b| b.norm_sqr() / self.gamma)
            .fold(0.0, f64::max)
    }
}

/// Integrate the optical Bloch equations for a coherent pulse.
pub fn integrate_obe(
    p: &Pulse,
    s0: QubitState,
    grid: &TimeGrid,
    gamma: f64,
) -> Result<BlochTrajectory> {
    if p.statistics() != Statistics::Coherent {
        return Err(Error::domain("integrate_obe requires a coherent pulse"));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    s0.validate()?;
    let pieces = grid.pieces(&p.breakpoints())?;

    let y0 = Bloch {
        s: s0.sigma_minus(),
        z: s0.z,
    };
    let ys = rk4(
        grid,
        y0,
        |t, probe, y| obe_rhs(gamma, p.evaluate_from(t, probe), y),
        |_, t, y| {
            let q = QubitState::from_dipole(y.s, y.z).clipped(t)?;
            Ok(Bloch {
                s: q.sigma_minus(),
                z: q.z,
            })
        },
    )?;

    let states: Vec<QubitState> = ys
        .iter()
        .map(|y| QubitState::from_dipole(y.s, y.z))
        .collect();
    let input_amplitude: Vec<Complex64> = grid.times().map(|t| p.evaluate(t)).collect();
    let output_amplitude = input_amplitude
        .iter()
        .zip(&states)
        .map(|(b, q)| b - gamma.sqrt() * q.sigma_minus())
        .collect();
    Ok(BlochTrajectory {
        grid: *grid,
        gamma,
        pulse: p.clone(),
        states,
        input_amplitude,
        output_amplitude,
        pieces,
    })
}

/// Work flow `2√γ Re[s β*] − γ|s|²` received by the qubit (ħω₀γ units when
/// γ is the rate unit).
pub fn work_flow(state: &QubitState, beta: Complex64, gamma: f64) -> f64 {
    let s = state.sigma_minus();
    2.0 * gamma.sqrt() * (s * beta.conj()).re - gamma * s.norm_sqr()
}

/// Correlation energy flow `γ(|s|² − P_e)`; never positive.
pub fn correlation_flow(state: &QubitState, gamma: f64) -> f64 {
    gamma * (state.sigma_minus().norm_sqr() - state.excited_population())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyFlows {
    pub work: Vec<f64>,
    pub correlation: Vec<f64>,
}

/// Pointwise work and correlation flows along a trajectory.
pub fn coherent_energy_flows(traj: &BlochTrajectory) -> EnergyFlows {
    let work = traj
        .states
        .iter()
        .zip(&traj.input_amplitude)
        .map(|(s, b)| work_flow(s, *b, traj.gamma))
        .collect();
    let correlation = traj
        .states
        .iter()
        .map(|s| correlation_flow(s, traj.gamma))
        .collect();
    EnergyFlows { work, correlation }
}

/// Work flow read off the field: `−(|β_out|² − |β_in|²)`.
pub fn field_side_work(traj: &BlochTrajectory) -> Vec<f64> {
    traj.input_amplitude
        .iter()
        .zip(&traj.output_amplitude)
        .map(|(b_in, b_out)| -(b_out.norm_sqr() - b_in.norm_sqr()))
        .collect()
}

/// Cumulative work `W(t)` and correlation energy `Q(t)` from `t0`.
pub fn cumulative_flows(traj: &BlochTrajectory) -> (Vec<f64>, Vec<f64>) {
    let g = traj.gamma;
    let w = integrate::cumulative(&traj.grid, &traj.pieces, |i, probe| {
        work_flow(&traj.states[i], traj.input_from(i, probe), g)
    });
    let q = integrate::cumulative(&traj.grid, &traj.pieces, |i, _| {
        correlation_flow(&traj.states[i], g)
    });
    (w, q)
}
