//! Two-level reduced state and its pointwise energetic functionals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::BLOCH_TOLERANCE;

/// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` in the frame rotating at ω₀.
///
/// The dipole is `⟨σ₋⟩ = (x − i y)/2` and the excited population is
/// `(1 + z)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl QubitState {
    pub const GROUND: QubitState = QubitState {
        x: 0.0,
        y: 0.0,
        z: -1.0,
    };

    pub const EXCITED: QubitState = QubitState {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// `(|g⟩ + |e⟩)/√2`, the state with maximal dipole.
    pub const PLUS: QubitState = QubitState {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let s = QubitState { x, y, z };
        s.validate()?;
        Ok(s)
    }

    /// Build from the dipole `⟨σ₋⟩` and inversion `z` without validation.
    pub fn from_dipole(sigma_minus: Complex64, z: f64) -> Self {
        QubitState {
            x: 2.0 * sigma_minus.re,
            y: -2.0 * sigma_minus.im,
            z,
        }
    }

    /// Bloch vector of a 2×2 density matrix in the `(g, e)` basis.
    pub fn from_density(rho: &[[Complex64; 2]; 2]) -> Self {
        let coherence = rho[1][0];
        QubitState::from_dipole(coherence, (rho[1][1] - rho[0][0]).re)
    }

    /// `⟨σ₋⟩ = (x − i y)/2`.
    pub fn sigma_minus(&self) -> Complex64 {
        Complex64::new(0.5 * self.x, -0.5 * self.y)
    }

    pub fn excited_population(&self) -> f64 {
        0.5 * (1.0 + self.z)
    }

    pub fn bloch_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.bloch_norm();
        if !r.is_finite() || r > 1.0 + BLOCH_TOLERANCE {
            return Err(Error::domain(format!(
                "invalid Bloch vector ({}, {}, {}): norm {r} exceeds 1",
                self.x, self.y, self.z
            )));
        }
        Ok(())
    }

    /// Project round-off overshoot (at most `BLOCH_TOLERANCE`) back onto the
    /// unit sphere. Larger overshoot is reported as divergence at time `t`.
    pub fn clipped(self, t: f64) -> Result<Self> {
        let r = self.bloch_norm();
        if !r.is_finite() || r > 1.0 + BLOCH_TOLERANCE {
            return Err(Error::SolverDivergence { t, norm: r });
        }
        if r > 1.0 {
            return Ok(QubitState {
                x: self.x / r,
                y: self.y / r,
                z: self.z / r,
            });
        }
        Ok(self)
    }

    /// Density matrix in the `(g, e)` basis.
    pub fn density(&self) -> [[Complex64; 2]; 2] {
        let pe = self.excited_population();
        let coh = self.sigma_minus();
        [
            [Complex64::new(1.0 - pe, 0.0), coh.conj()],
            [coh, Complex64::new(pe, 0.0)],
        ]
    }

    /// Von Neumann entropy of the state, in nats.
    pub fn entropy(&self) -> f64 {
        let r = self.bloch_norm().min(1.0);
        let plus = 0.5 * (1.0 + r);
        let minus = 0.5 * (1.0 - r);
        (-xlnx(plus) - xlnx(minus)).max(0.0)
    }
}

fn xlnx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Mean energy `Tr[H_q ρ] = (1 + z)/2` in units of ħω₀.
pub fn qubit_energy(s: &QubitState) -> Result<f64> {
    s.validate()?;
    Ok(s.excited_population())
}

/// Maximal energy extractable by a unitary, `(z + r)/2` in units of ħω₀.
///
/// The passive state reached by the optimal unitary points the Bloch vector
/// straight down, leaving energy `(1 − r)/2`.
pub fn ergotropy(s: &QubitState) -> Result<f64> {
    s.validate()?;
    Ok(ergotropy_unchecked(s))
}

pub(crate) fn ergotropy_unchecked(s: &QubitState) -> f64 {
    let r = s.bloch_norm().min(1.0);
    (0.5 * (s.z + r)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn energy_examples() {
        assert_eq!(qubit_energy(&QubitState::GROUND).unwrap(), 0.0);
        assert_eq!(qubit_energy(&QubitState::EXCITED).unwrap(), 1.0);
        assert_eq!(qubit_energy(&QubitState::PLUS).unwrap(), 0.5);
    }

    #[test]
    fn ergotropy_examples() {
        assert_eq!(ergotropy(&QubitState::EXCITED).unwrap(), 1.0);
        assert_eq!(
            ergotropy(&QubitState::new(0.0, 0.0, 0.5).unwrap()).unwrap(),
            0.5
        );
        assert_abs_diff_eq!(ergotropy(&QubitState::PLUS).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(
            ergotropy(&QubitState::new(0.0, 0.0, -0.4).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn invalid_bloch_vector_is_rejected() {
        let bad = QubitState {
            x: 1.0,
            y: 0.0,
            z: 0.1,
        };
        assert!(matches!(qubit_energy(&bad), Err(Error::Domain(_))));
        assert!(matches!(ergotropy(&bad), Err(Error::Domain(_))));
        assert!(QubitState::new(0.0, 0.0, 1.0 + 1e-10).is_ok());
    }

    #[test]
    fn clipping_only_absorbs_roundoff() {
        let s = QubitState {
            x: 0.0,
            y: 0.0,
            z: 1.0 + 5e-10,
        };
        assert_eq!(s.clipped(0.0).unwrap().z, 1.0);
        let far = QubitState {
            x: 0.0,
            y: 0.0,
            z: 1.0 + 1e-6,
        };
        assert!(matches!(
            far.clipped(2.0),
            Err(Error::SolverDivergence { .. })
        ));
    }

    #[test]
    fn dipole_and_density_agree() {
        let s = QubitState::new(0.3, -0.4, 0.2).unwrap();
        let rho = s.density();
        let back = QubitState::from_density(&rho);
        assert_abs_diff_eq!(back.x, s.x, epsilon = 1e-15);
        assert_abs_diff_eq!(back.y, s.y, epsilon = 1e-15);
        assert_abs_diff_eq!(back.z, s.z, epsilon = 1e-15);
        assert_abs_diff_eq!(rho[1][0].re, 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(rho[1][0].im, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn entropy_limits() {
        assert_abs_diff_eq!(QubitState::GROUND.entropy(), 0.0);
        let mixed = QubitState::new(0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(mixed.entropy(), std::f64::consts::LN_2, epsilon = 1e-15);
    }
}
